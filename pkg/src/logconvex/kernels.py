"""Kernel integrals ``f_lam(x) = int_0^x t**lam (1 - t)**alpha dt`` and derivatives.

The kernel is an (unregularised) incomplete beta integral with a second
parameter ``alpha + 1`` that may be zero or negative, so library incomplete
beta routines do not apply.  Evaluation uses, in order of preference,

* elementary closed forms (``alpha == 0``, ``lam == 0``, ``lam == -(alpha + 2)``),
* the binomial series ``sum_j c_j x**(lam + j + 1) / (lam + j + 1)`` with
  ``c_j = (-alpha)_j / j!`` for ``x`` up to the switch point,
* adaptive Gauss-Kronrod quadrature above it.  The quadrature works in the
  reflected variable ``s = 1 - t`` near the top of the interval so that
  ``1 - t`` is never formed by cancellation.

All functions are pure; ``KernelParams`` is immutable and hashable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, DomainError
from .quadrature import geometric_breaks, gk_integrate

X_MIN = 1e-12
X_MAX = 1.0 - 1e-12
DEFAULT_TOL = 1e-10
DEFAULT_SWITCH = 0.9
# The quadrature route integrates [0, REFLECT_AT] in t and the rest in s = 1 - t.
REFLECT_AT = 0.5


@dataclass(frozen=True)
class KernelParams:
    """Exponent ``lam`` of ``t`` and weight exponent ``alpha`` of ``1 - t``."""

    lam: float
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.alpha)):
            raise DomainError(f"kernel parameters must be finite, got {self}")
        if self.lam < 0:
            raise DomainError(f"lam must be >= 0, got {self.lam}")

    @property
    def is_special(self) -> bool:
        """True when ``lam == -(alpha + 2) > 0`` and the kernel is elementary."""
        return self.lam > 0 and abs(self.lam + self.alpha + 2.0) <= 1e-14


@dataclass(frozen=True)
class KernelBundle:
    x: float
    h: float
    h1: float
    h2: float
    h3: float
    dh_dlambda: float


def _check_x(x):
    if not (X_MIN <= x <= X_MAX):
        raise DomainError(f"x must lie in [{X_MIN}, 1 - {X_MIN}], got {x!r}")



# ---------------------------------------------------------------------------
# closed forms

def closed_form_f(params: KernelParams, x: float):
    """Elementary value of ``f_lam(x)`` or ``None`` when no closed form applies."""
    lam, alpha = params.lam, params.alpha
    if alpha == 0.0:
        return x ** (lam + 1) / (lam + 1)
    if lam == 0.0:
        if alpha == -1.0:
            return -math.log1p(-x)
        a1 = alpha + 1.0
        return -math.expm1(a1 * math.log1p(-x)) / a1
    if params.is_special:
        a1 = alpha + 1.0
        return -((1.0 - x) / x) ** a1 / a1
    return None


def closed_form_dh_dlambda(params: KernelParams, x: float):
    """Elementary value of ``int_0^x t**lam (1-t)**alpha log t dt`` or ``None``."""
    lam, alpha = params.lam, params.alpha
    if alpha == 0.0:
        m = lam + 1.0
        return x ** m * (math.log(x) / m - 1.0 / m ** 2)
    return None


# ---------------------------------------------------------------------------
# binomial series

def _series_terms(lam, alpha, x, with_log, eps):
    """Sum the binomial series for the kernel (and optionally its log-weighted twin)."""
    logx = math.log(x)
    total = 0.0
    comp = []
    j0 = 0
    coef = 1.0
    chunk = 256
    # Terms eventually decay like j**(-alpha - 1) * x**j.
    while True:
        j = np.arange(j0, j0 + chunk, dtype=float)
        ratios = (j - alpha) / (j + 1.0)
        c = coef * np.concatenate([[1.0], np.cumprod(ratios[:-1])])
        m = lam + j + 1.0
        xm = np.exp(m * logx)
        if with_log:
            terms = c * xm * (logx / m - 1.0 / m ** 2)
        else:
            terms = c * xm / m
        comp.append(terms)
        total += float(np.sum(terms))
        coef = float(c[-1] * ratios[-1])
        j0 += chunk
        last = abs(terms[-1])
        # geometric tail bound once the ratio has settled near x
        if j0 > alpha + 2 and last <= eps * abs(total) * (1.0 - x):
            break
        if j0 > 200000:
            raise ConsistencyError(f"binomial series failed to converge at x={x}")
        if not math.isfinite(total):
            raise ConsistencyError(f"binomial series overflow at x={x}")
    return math.fsum(np.concatenate(comp))


def kernel_series(params: KernelParams, x: float) -> float:
    """``f_lam(x)`` by the binomial power series (any ``x`` in (0, 1), slow near 1)."""
    _check_x(x)
    return _series_terms(params.lam, params.alpha, x, False, 1e-17)


def dh_dlambda_series(params: KernelParams, x: float) -> float:
    _check_x(x)
    return _series_terms(params.lam, params.alpha, x, True, 1e-17)


# ---------------------------------------------------------------------------
# quadrature

def _quad_parts(lam, alpha, x, with_log, rtol):
    lo = min(x, REFLECT_AT)
    if with_log:
        def lower(t):
            return t ** lam * np.exp(alpha * np.log1p(-t)) * np.log(t)

        def upper(s):
            return np.exp(lam * np.log1p(-s)) * s ** alpha * np.log1p(-s)
    else:
        def lower(t):
            return t ** lam * np.exp(alpha * np.log1p(-t))

        def upper(s):
            return np.exp(lam * np.log1p(-s)) * s ** alpha

    value, err = gk_integrate(lower, geometric_breaks(0.0, lo, left=True), rtol=rtol)
    if x > REFLECT_AT:
        s_lo, s_hi = 1.0 - x, 1.0 - REFLECT_AT
        # breaks s_lo * 2**k resolve s**alpha near the reflected endpoint
        k = np.arange(0, int(math.log2(s_hi / s_lo)) + 1)
        breaks = np.unique(np.concatenate([s_lo * 2.0 ** k, [s_hi]]))
        v2, e2 = gk_integrate(upper, breaks, rtol=rtol)
        value += v2
        err += e2
    return value, err


def kernel_quad(params: KernelParams, x: float, rtol: float = 1e-13) -> float:
    """``f_lam(x)`` by adaptive Gauss-Kronrod quadrature."""
    _check_x(x)
    return _quad_parts(params.lam, params.alpha, x, False, rtol)[0]


def dh_dlambda_quad(params: KernelParams, x: float, rtol: float = 1e-13) -> float:
    _check_x(x)
    return _quad_parts(params.lam, params.alpha, x, True, rtol)[0]


# ---------------------------------------------------------------------------
# public evaluators

def _loose_rtol(tol):
    # half the budget goes to quadrature subdivision
    return max(0.5 * tol, 1e-14)


@lru_cache(maxsize=200000)
def _f_cached(lam, alpha, x, tol, switch):
    params = KernelParams(lam, alpha)
    value = closed_form_f(params, x)
    if value is not None:
        return value
    if x <= switch:
        return kernel_series(params, x)
    return kernel_quad(params, x, rtol=_loose_rtol(tol))


def eval_f_lambda(params: KernelParams, x: float, tol: float = DEFAULT_TOL, *,
                  switch: float = DEFAULT_SWITCH, cross_check: bool = False) -> float:
    """Evaluate ``f_lam(x) = int_0^x t**lam (1 - t)**alpha dt``.

    ``tol`` is an absolute-or-relative error target.  With ``cross_check``
    the series and the quadrature are both run and must agree to
    ``10 * tol``; otherwise :class:`ConsistencyError` is raised.
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    _check_x(x)
    value = _f_cached(float(params.lam), float(params.alpha), float(x), float(tol), float(switch))
    if cross_check:
        s = kernel_series(params, x)
        q = kernel_quad(params, x, rtol=_loose_rtol(tol))
        if abs(s - q) > 10 * tol * max(1.0, abs(q)):
            raise ConsistencyError(
                f"series {s!r} and quadrature {q!r} disagree for {params} at x={x}")
    return value


@lru_cache(maxsize=200000)
def _dh_cached(lam, alpha, x, tol, switch):
    params = KernelParams(lam, alpha)
    value = closed_form_dh_dlambda(params, x)
    if value is not None:
        return value
    if x <= switch:
        return dh_dlambda_series(params, x)
    return dh_dlambda_quad(params, x, rtol=_loose_rtol(tol))


def eval_dh_dlambda(params: KernelParams, x: float, tol: float = DEFAULT_TOL, *,
                    switch: float = DEFAULT_SWITCH) -> float:
    """``d f_lam(x) / d lam = int_0^x t**lam (1-t)**alpha log t dt`` (always negative)."""
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    _check_x(x)
    return _dh_cached(float(params.lam), float(params.alpha), float(x), float(tol), float(switch))


def eval_derivatives(params: KernelParams, x: float):
    """Closed-form ``(h', h'', h''')`` of ``f_lam`` with respect to ``x``."""
    _check_x(x)
    lam, a = params.lam, params.alpha
    lx = math.log(x)
    l1x = math.log1p(-x)
    h1 = math.exp(lam * lx + a * l1x)
    h2 = (lam - lam * x - a * x) * math.exp((lam - 1) * lx + (a - 1) * l1x)
    poly = ((-lam + 2 * lam * a - a + a * a + lam * lam) * x * x
            + (-2 * lam * a + 2 * lam - 2 * lam * lam) * x
            + (lam * lam - lam))
    h3 = poly * math.exp((lam - 2) * lx + (a - 2) * l1x)
    return h1, h2, h3


def kernel_bundle(params: KernelParams, x: float, tol: float = DEFAULT_TOL) -> KernelBundle:
    h1, h2, h3 = eval_derivatives(params, x)
    return KernelBundle(x=x, h=eval_f_lambda(params, x, tol), h1=h1, h2=h2, h3=h3,
                        dh_dlambda=eval_dh_dlambda(params, x, tol))


def gap_integral(params: KernelParams, x: float, tol: float = DEFAULT_TOL) -> float:
    """``x**lam * f_0(x) - f_lam(x) = int_0^x (x**lam - t**lam)(1-t)**alpha dt``.

    Evaluated directly so that the difference keeps full relative accuracy
    when both terms grow without bound as ``x -> 1``.
    """
    _check_x(x)
    lam, alpha = params.lam, params.alpha
    if lam == 0.0:
        return 0.0
    return _gap_cached(float(lam), float(alpha), float(x), float(tol))


@lru_cache(maxsize=200000)
def _gap_cached(lam, alpha, x, tol):
    if x <= DEFAULT_SWITCH:
        return _gap_series(lam, alpha, x)
    lo = REFLECT_AT
    xl = x ** lam
    logx = math.log1p(-(1.0 - x))

    def lower(t):
        return (xl - t ** lam) * np.exp(alpha * np.log1p(-t))

    def upper(s):
        # x**lam - (1-s)**lam without cancellation
        ls = np.log1p(-s)
        return np.exp(lam * ls) * np.expm1(lam * (logx - ls)) * s ** alpha

    rtol = _loose_rtol(tol)
    v1, _ = gk_integrate(lower, geometric_breaks(0.0, lo, left=True), rtol=rtol)
    s_lo, s_hi = 1.0 - x, 1.0 - lo
    k = np.arange(0, int(math.log2(s_hi / s_lo)) + 1)
    breaks = np.unique(np.concatenate([s_lo * 2.0 ** k, [s_hi]]))
    v2, _ = gk_integrate(upper, breaks, rtol=rtol)
    return v1 + v2


def _gap_series(lam, alpha, x):
    # sum_j c_j x**(lam+j+1) * (1/(j+1) - 1/(lam+j+1))
    logx = math.log(x)
    out = []
    coef = 1.0
    j = 0
    while True:
        m = lam + j + 1.0
        term = coef * math.exp(m * logx) * lam / ((j + 1.0) * m)
        out.append(term)
        if j > alpha + 2 and abs(term) <= 1e-17 * abs(math.fsum(out)) * (1.0 - x):
            break
        coef *= (j - alpha) / (j + 1.0)
        j += 1
    return math.fsum(out)
