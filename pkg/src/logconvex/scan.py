"""Convexity profiles for concrete subjects and sweeps over ``(p, alpha, subject)``.

A subject is either a monomial degree ``k`` or a polynomial read from a
coefficient file.  Monomial profiles use the analytic discriminant
(``d^2 log M / d(log x)^2 = x * Delta(pk/2, alpha, x)``); polynomial profiles
use finite differences of the mean.  Polynomials with ``p != 2`` go through
polar quadrature and are labelled exploratory: nothing is known about them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .convexity import CONVEX, ConvexityProfile, delta, loglog_profile
from .means import TaylorCoefficients, monomial_mean_x, quad_mean, series_mean_p2_x
from .report import SCHEMA, render_csv

# finite-difference settings for the quadrature route, whose values carry ~1e-12 noise
EXPLORATORY_STEP = 1e-2
EXPLORATORY_TOL = 1e-13

DEFAULT_R_GRID = tuple(round(0.02 * i, 2) for i in range(1, 50))


@dataclass(frozen=True)
class Subject:
    """Monomial ``z**k`` (``coeffs is None``) or a named polynomial."""

    label: str
    k: Optional[int] = None
    coeffs: Optional[TaylorCoefficients] = None

    @classmethod
    def monomial(cls, k: int) -> "Subject":
        return cls(label=str(int(k)), k=int(k))

    @classmethod
    def polynomial(cls, label: str, coeffs: TaylorCoefficients) -> "Subject":
        return cls(label=label, coeffs=coeffs)

    @property
    def sort_key(self):
        return (0, self.k, "") if self.k is not None else (1, 0, self.label)

    def is_exploratory(self, p: float) -> bool:
        return self.coeffs is not None and p != 2


@dataclass
class ScanRecord:
    p: float
    alpha: float
    subject: str
    classification: str
    witness_x: Optional[float]
    min_d: float
    max_d: float
    exploratory: bool = False

    def row(self):
        # the fixed schema has no flag column, so the subject carries the label
        subject = self.subject + "~exploratory" if self.exploratory else self.subject
        return (self.p, self.alpha, subject, self.witness_x, self.min_d, self.classification)


def mean_function(p: float, alpha: float, subject: Subject):
    """The mean as a function of ``x = r**2`` for this subject."""
    if subject.k is not None:
        return lambda x: monomial_mean_x(p, alpha, subject.k, x)
    if p == 2:
        return lambda x: series_mean_p2_x(subject.coeffs, alpha, x)
    return lambda x: quad_mean(subject.coeffs, p, alpha, x ** 0.5, tol=EXPLORATORY_TOL)


def subject_profile(p: float, alpha: float, subject: Subject, xgrid: Sequence[float],
                    band: Optional[float] = None) -> ConvexityProfile:
    mean = mean_function(p, alpha, subject)
    if subject.k is not None:
        lam = p * subject.k / 2.0
        return loglog_profile(mean, xgrid, band, second=lambda x: x * delta(lam, alpha, x))
    if subject.is_exploratory(p):
        return loglog_profile(mean, xgrid, band, step=EXPLORATORY_STEP)
    return loglog_profile(mean, xgrid, band)


def record_from_profile(p, alpha, subject: Subject, prof: ConvexityProfile) -> ScanRecord:
    i = int(np.argmin(prof.dvals))
    witness = float(prof.grid[i]) if prof.classification != CONVEX else None
    return ScanRecord(p=float(p), alpha=float(alpha), subject=subject.label,
                      classification=prof.classification, witness_x=witness,
                      min_d=prof.min_d, max_d=prof.max_d,
                      exploratory=subject.is_exploratory(p))


def run_scan(ps: Sequence[float], alphas: Sequence[float], subjects: Sequence[Subject],
             xgrid: Sequence[float], band: Optional[float] = None):
    """One record per ``(p, alpha, subject)``, in lexicographic order."""
    records = []
    for p in sorted(set(ps)):
        for alpha in sorted(set(alphas)):
            for subject in sorted(subjects, key=lambda s: s.sort_key):
                prof = subject_profile(p, alpha, subject, xgrid, band)
                records.append(record_from_profile(p, alpha, subject, prof))
    return records


def scan_csv(records: Sequence[ScanRecord]) -> str:
    return render_csv(SCHEMA, [r.row() for r in records])


def profile_rows(p, alpha, subject: Subject, prof: ConvexityProfile):
    return [(p, alpha, subject.label, x, d, prof.classification)
            for x, d in zip(prof.grid, prof.dvals)]

