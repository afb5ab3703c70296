"""Weighted area integral means on the unit disk and their log-convexity in ``log r``."""

__version__ = "0.1.0"

from .convexity import (CONCAVE, CONVEX, INDETERMINATE, NEITHER, ConvexityProfile, classify,
                        d_functional_closed, d_functional_fd, delta, delta_dlambda,
                        delta_limit_extrapolated, find_sign_change, limit_delta_x1,
                        loglog_profile)
from .diagnostics import DiagnosticReport, verify_claims
from .errors import (AccuracyError, BracketError, ConsistencyError, DomainError,
                     LogConvexError, RegimeError)
from .kernels import KernelBundle, KernelParams, eval_dh_dlambda, eval_f_lambda, kernel_bundle
from .means import (TaylorCoefficients, circle_mean_p2, monomial_mean, quad_mean,
                    read_coefficients, series_mean_p2)
from .scan import ScanRecord, Subject, run_scan

__all__ = [
    "AccuracyError", "BracketError", "CONCAVE", "CONVEX", "ConsistencyError",
    "ConvexityProfile", "DiagnosticReport", "DomainError", "INDETERMINATE", "KernelBundle",
    "KernelParams", "LogConvexError", "NEITHER", "RegimeError", "ScanRecord", "Subject",
    "TaylorCoefficients", "circle_mean_p2", "classify", "d_functional_closed",
    "d_functional_fd", "delta", "delta_dlambda", "delta_limit_extrapolated",
    "eval_dh_dlambda", "eval_f_lambda", "find_sign_change", "kernel_bundle",
    "limit_delta_x1", "loglog_profile", "monomial_mean", "quad_mean", "read_coefficients",
    "run_scan", "series_mean_p2", "verify_claims",
]
