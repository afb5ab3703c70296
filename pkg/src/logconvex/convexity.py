"""Logarithmic convexity in ``log x``: the D-functional, the discriminant
``Delta(lam, x) = D(f_lam)(x) - D(f_0)(x)`` and profile classification.

Everything runs in the variable ``x = r**2``; convexity of ``log M`` in
``log r`` and in ``log x`` are equivalent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BracketError, ConsistencyError, DomainError
from .kernels import (KernelParams, eval_derivatives, eval_dh_dlambda,
                      eval_f_lambda, gap_integral)

CONVEX = "convex"
CONCAVE = "concave"
NEITHER = "neither"
INDETERMINATE = "indeterminate"

DEFAULT_STEP = 1e-4
X_CAP = 1.0 - 1e-6
# Tight kernel tolerance used wherever near-cancelling kernel values are combined.
FINE_TOL = 1e-14


@dataclass
class ConvexityProfile:
    grid: np.ndarray
    dvals: np.ndarray
    classification: str
    band: float
    sign_changes: list = field(default_factory=list)

    @property
    def min_d(self) -> float:
        return float(np.min(self.dvals))

    @property
    def max_d(self) -> float:
        return float(np.max(self.dvals))


# ---------------------------------------------------------------------------
# D-functional

def d_functional_closed(g, g1, g2, x):
    """``D(g)(x) = g'/g + x g''/g - x (g'/g)**2`` from values of ``g, g', g''``."""
    if not g > 0:
        raise DomainError(f"D-functional needs g > 0, got {g!r}")
    u = g1 / g
    return u + x * g2 / g - x * u * u


def d_functional_fd(g: Callable[[float], float], x: float, step: float = DEFAULT_STEP,
                    richardson: bool = True) -> float:
    """Second derivative of ``log g(e**t)`` in ``t`` at ``t = log x``.

    This equals ``x * D(g)(x)`` and so carries the sign of the D-functional.
    Centered differences with steps ``step`` and ``step / 2`` are combined by
    one Richardson level unless ``richardson`` is false.
    """
    t = math.log(x)
    if not math.exp(t + step) < 1.0 or x <= 0:
        raise DomainError(f"finite-difference nodes leave (0, 1) at x={x}, step={step}")

    def value(tt):
        v = g(math.exp(tt))
        if not v > 0:
            raise DomainError(f"log-convexity needs a positive function, got {v!r}")
        return v

    g0 = value(t)

    def second(hh):
        # log(g+ g- / g0**2) keeps the rounding error independent of |log g|
        return math.log((value(t + hh) / g0) * (value(t - hh) / g0)) / (hh * hh)

    d1 = second(step)
    if not richardson:
        return d1
    d2 = second(0.5 * step)
    return (4.0 * d2 - d1) / 3.0


# ---------------------------------------------------------------------------
# the discriminant Delta

def _pieces(lam, alpha, x, tol):
    p = KernelParams(lam, alpha)
    h = eval_f_lambda(p, x, tol)
    f0 = eval_f_lambda(KernelParams(0.0, alpha), x, tol)
    h1, h2, _ = eval_derivatives(p, x)
    return p, h, f0, h1, h2


def delta(lam: float, alpha: float, x: float, tol: float = FINE_TOL) -> float:
    """``Delta(lam, x) = D(f_lam)(x) - D(f_0)(x)``.

    Assembled from the analytic ``h'``, ``h''`` and evaluated kernels.  The
    difference ``h'/h - f_0'/f_0`` and the matching second-order difference
    are rewritten through ``x**lam f_0 - f_lam`` (computed as one integral),
    which keeps the result accurate as ``x -> 1`` where each D-value grows
    like ``(1 - x)**-2``.
    """
    if lam == 0.0:
        eval_derivatives(KernelParams(lam, alpha), x)  # domain checks only
        return 0.0
    p, h, f0, h1, _ = _pieces(lam, alpha, x, tol)
    gap = gap_integral(p, x, tol)
    w = math.exp(alpha * math.log1p(-x))
    v = w * gap / (h * f0)
    u_h = h1 / h
    u_0 = w / f0
    # h'' f_0 - f_0'' h = (1-x)**(alpha-1) * (lam (1-x) x**(lam-1) f_0 - alpha * gap)
    curv = (w / (1.0 - x)) * (lam * (1.0 - x) * x ** (lam - 1.0) * f0 - alpha * gap) / (h * f0)
    return v + x * (curv - v * (u_h + u_0))


def log_slope_gap(lam: float, alpha: float, x: float, tol: float = FINE_TOL) -> float:
    """``f_lam'/f_lam - f_0'/f_0``, the x-derivative of ``log(f_lam / f_0)``."""
    p = KernelParams(lam, alpha)
    if lam == 0.0:
        return 0.0
    h = eval_f_lambda(p, x, tol)
    f0 = eval_f_lambda(KernelParams(0.0, alpha), x, tol)
    return math.exp(alpha * math.log1p(-x)) * gap_integral(p, x, tol) / (h * f0)


def delta_direct(lam: float, alpha: float, x: float, tol: float = FINE_TOL) -> float:
    """``Delta`` as the plain difference of two D-functionals (loses accuracy near 1)."""
    p, h, f0, h1, h2 = _pieces(lam, alpha, x, tol)
    g1, g2, _ = eval_derivatives(KernelParams(0.0, alpha), x)
    return d_functional_closed(h, h1, h2, x) - d_functional_closed(f0, g1, g2, x)


def delta_dlambda(lam: float, alpha: float, x: float, tol: float = FINE_TOL, *,
                  check: bool = False, step: float = 1e-5, rtol: float = 1e-4) -> float:
    """``dDelta/dlam = h'/h + (h log x - dh/dlam)(h h' + x h h'' - 2x h'**2) / h**3``.

    With ``check`` the value is compared against a centered difference of
    :func:`delta` in ``lam``; disagreement beyond ``rtol`` raises
    :class:`ConsistencyError`.
    """
    if not lam > 0:
        raise DomainError(f"dDelta/dlam is evaluated for lam > 0, got {lam}")
    p, h, _, h1, h2 = _pieces(lam, alpha, x, tol)
    dh = eval_dh_dlambda(p, x, tol)
    value = h1 / h + (h * math.log(x) - dh) * (h * h1 + x * h * h2 - 2 * x * h1 * h1) / h ** 3
    if check:
        lo = max(lam - step, 0.0)
        fd = (delta(lam + step, alpha, x, tol) - delta(lo, alpha, x, tol)) / (lam + step - lo)
        if abs(fd - value) > rtol * max(abs(value), 1e-8):
            raise ConsistencyError(
                f"dDelta/dlam {value!r} disagrees with finite difference {fd!r} "
                f"at lam={lam}, alpha={alpha}, x={x}")
    return value


def limit_delta_x1(lam: float, alpha: float) -> float:
    """Closed-form ``lim_{x->1} Delta(lam, x)`` for ``alpha < -3``."""
    if not alpha < -3:
        raise DomainError(f"the x -> 1 limit formula needs alpha < -3, got {alpha}")
    return lam * (alpha + 1) * (lam + 2 + alpha) / ((alpha + 2) ** 2 * (alpha + 3))


def extrapolate_to_one(func: Callable[[float], float], exponents: Sequence[float],
                       orders: Sequence[int] = (3, 4, 5)) -> float:
    """Estimate ``lim_{x->1} func(x)`` from samples at ``x = 1 - 10**-m``.

    The samples are fitted exactly by ``L + sum_i b_i * (1 - x)**exponents[i]``;
    ``len(orders)`` must equal ``len(exponents) + 1``.
    """
    if len(orders) != len(exponents) + 1:
        raise DomainError("need one more sample than correction exponents")
    eps = np.array([10.0 ** -m for m in orders])
    y = np.array([func(1.0 - e) for e in eps])
    basis = np.column_stack([np.ones_like(eps)] + [eps ** e for e in exponents])
    return float(np.linalg.solve(basis, y)[0])


def correction_exponents(alpha: float) -> list:
    """Leading powers of ``(1 - x)`` in ``Delta(lam, x) - lim`` for ``alpha < -3``.

    Besides the regular ``(1 - x)`` correction, the finite part of the
    divergent kernel integrals contributes ``(1 - x)**(-(alpha + 3))``.
    """
    frac = -(alpha + 3.0)
    if abs(frac - round(frac)) < 1e-9:
        return [1.0, 2.0]
    return sorted({1.0, 2.0, frac})[:2]


def delta_limit_extrapolated(lam: float, alpha: float, orders=(3, 4, 5)) -> float:
    return extrapolate_to_one(lambda x: delta(lam, alpha, x), correction_exponents(alpha), orders)


# ---------------------------------------------------------------------------
# sign changes and profiles

def find_sign_change(func: Callable[[float], float], lo: float, hi: float,
                     tol: float = 1e-12, max_iter: int = 200) -> float:
    """Bisection for a sign change of ``func`` in ``[lo, hi]``.

    Returns the midpoint of a bracketing interval of width at most ``tol``.
    """
    flo, fhi = func(lo), func(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={flo!r}, f(hi)={fhi!r}")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


BAND_SCALE = 1e-6


def default_band(dvals) -> float:
    """Noise band ``1e-6 * max(1, median |d|)`` below which values count as zero.

    Centered second differences at step ``1e-4`` with one Richardson level
    carry rounding noise of a few ``1e-7``.
    """
    dvals = np.asarray(dvals, dtype=float)
    return BAND_SCALE * max(1.0, float(np.median(np.abs(dvals)))) if dvals.size else 0.0


def classify(dvals, band: float) -> str:
    """Classify sampled log-log second derivatives.

    A profile whose values all sit inside the band is log-linear and is
    reported as convex (a function that is both convex and concave).
    ``indeterminate`` is reserved for empty or non-finite samples.
    """
    dvals = np.asarray(dvals, dtype=float)
    if dvals.size == 0 or not np.all(np.isfinite(dvals)):
        return INDETERMINATE
    has_neg = bool(np.any(dvals < -band))
    has_pos = bool(np.any(dvals > band))
    if has_neg and has_pos:
        return NEITHER
    if has_neg:
        return CONCAVE
    return CONVEX


def loglog_profile(mean: Callable[[float], float], grid: Sequence[float],
                   band: float | None = None, step: float = DEFAULT_STEP,
                   root_tol: float = 1e-10,
                   second: Callable[[float], float] | None = None) -> ConvexityProfile:
    """Sample ``d^2 log(mean) / d(log x)^2`` over ``grid`` and classify it.

    The second derivative comes from :func:`d_functional_fd` unless an
    analytic ``second(x)`` is supplied (for a monomial mean this is
    ``x * delta(lam, alpha, x)``).  Sign changes between neighbouring grid
    points (values outside the band on both sides) are refined by bisection.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0) or grid[0] <= 0 or grid[-1] >= 1:
        raise DomainError("profile grid must be strictly increasing inside (0, 1)")
    if band is not None and band < 0:
        raise DomainError(f"band must be >= 0, got {band}")

    def dfun(x):
        if second is not None:
            return second(x)
        return d_functional_fd(mean, x, step)

    if second is not None:
        for x in grid:
            if not mean(x) > 0:
                raise DomainError(f"log-convexity needs a positive function, got {mean(x)!r} at x={x}")
    dvals = np.array([dfun(x) for x in grid])
    if band is None:
        band = default_band(dvals)
    label = classify(dvals, band)
    roots = []
    signs = np.where(dvals > band, 1, np.where(dvals < -band, -1, 0))
    last_i = None
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if last_i is not None and s != signs[last_i]:
            roots.append(find_sign_change(dfun, grid[last_i], grid[i], root_tol))
        last_i = i
    return ConvexityProfile(grid=grid, dvals=dvals, classification=label, band=band,
                            sign_changes=roots)


# ---------------------------------------------------------------------------
# aggregation over a p = 2 series

def aggregation_terms(moduli_sq: Sequence[float], alpha: float, x: float):
    """``(D(H)(x), sum_k h_k D(h_k) / H)`` for ``H = sum_k |a_k|**2 M(z**k)``.

    Each ``h_k = |a_k|**2 f_k / f_0`` has ``D(h_k) = Delta(k, x)``; the
    derivatives of ``H`` are assembled from ``h_k' = h_k v_k`` and
    ``h_k'' = h_k (v_k' + v_k**2)`` where ``v_k = (log h_k)'`` and
    ``x v_k' = Delta(k, x) - v_k``.  Cauchy-Schwarz gives ``D(H) >= rhs``.
    """
    w = np.asarray(moduli_sq, dtype=float)
    ks = [k for k in range(len(w)) if w[k] > 0]
    if not ks:
        raise DomainError("aggregation needs at least one nonzero coefficient")
    f0 = eval_f_lambda(KernelParams(0.0, alpha), x, FINE_TOL)
    hk = np.array([w[k] * (eval_f_lambda(KernelParams(float(k), alpha), x, FINE_TOL) / f0
                           if k else 1.0) for k in ks])
    vk = np.array([log_slope_gap(float(k), alpha, x) for k in ks])
    dk = np.array([delta(float(k), alpha, x) for k in ks])
    big_h = math.fsum(hk)
    h1 = math.fsum(hk * vk)
    h2 = math.fsum(hk * ((dk - vk) / x + vk * vk))
    d_h = d_functional_closed(big_h, h1, h2, x)
    rhs = math.fsum(hk * dk) / big_h
    return d_h, rhs
