"""Auxiliary functions from the monomial convexity argument, with batch checks.

Each function evaluates one named quantity of the argument (``e_2``, ``d_1``,
``d_2``, ``delta``, the ``delta_1`` family, ``delta_3``, the
``Delta_1``/``Delta_2``/``T_1``/``T_2`` split and the two terms whose sum
gives ``Delta`` for ``alpha > 0``).  :func:`verify_claims` samples them on
a grid and reports every sign, monotonicity and limit claim that applies to
a given ``(lam, alpha)`` regime.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import beta as beta_fn

from .convexity import (X_CAP, correction_exponents, delta, delta_dlambda,
                        extrapolate_to_one, find_sign_change, limit_delta_x1)
from .errors import DomainError, RegimeError
from .kernels import (KernelParams, eval_derivatives, eval_dh_dlambda, eval_f_lambda,
                      gap_integral)

FINE = 1e-14


def _kern(lam, alpha, x):
    p = KernelParams(lam, alpha)
    h = eval_f_lambda(p, x, FINE)
    h1, h2, h3 = eval_derivatives(p, x)
    return p, h, h1, h2, h3


def e2(lam, alpha, x):
    """Quadratic ``e_2(x)`` carrying the sign of ``d_2'(x)``."""
    return (-(lam + 1) ** 2 + 2 * (lam * lam + 2 * lam + 1 + lam * alpha) * x
            - (lam + 1 + alpha) ** 2 * x * x)


def e2_prime(lam, alpha, x):
    return 2 * (lam * lam + 2 * lam + 1 + lam * alpha) - 2 * (lam + 1 + alpha) ** 2 * x


def d1(lam, alpha, x):
    """``d_1(x) = h log x - dh/dlam``; nonnegative on (0, 1)."""
    if not lam > 0:
        raise DomainError(f"d_1 is defined for lam > 0, got {lam}")
    p = KernelParams(lam, alpha)
    return eval_f_lambda(p, x, FINE) * math.log(x) - eval_dh_dlambda(p, x, FINE)


def d2(lam, alpha, x):
    """``d_2(x) = h - 2 x**(lam+1) (1-x)**(alpha+1) / (lam + 1 - (lam + 1 + alpha) x)``."""
    den = lam + 1 - (lam + 1 + alpha) * x
    if not den > 0:
        raise DomainError(f"d_2 denominator {den!r} is not positive at x={x}")
    h = eval_f_lambda(KernelParams(lam, alpha), x, FINE)
    return h - 2 * math.exp((lam + 1) * math.log(x) + (alpha + 1) * math.log1p(-x)) / den


def locate_x_star(lam, alpha, n=400, tol=1e-12):
    """Point ``x*`` with ``d_2 < 0`` on ``(0, x*)`` and ``d_2 > 0`` on ``(x*, 1)``.

    Returns 1.0 when no sign change is found below the boundary cap.
    """
    xs = np.concatenate([np.geomspace(1e-6, 0.5, n // 2, endpoint=False),
                         1 - np.geomspace(0.5, 1 - X_CAP, n // 2)])
    prev_x, prev_v = None, None
    for x in xs:
        v = d2(lam, alpha, x)
        if prev_v is not None and prev_v < 0 <= v:
            return find_sign_change(lambda t: d2(lam, alpha, t), prev_x, x, tol)
        prev_x, prev_v = x, v
    return 1.0


def _gram(h, h1, h2, x):
    """``h h' + x h h'' - 2 x h'**2``."""
    return h * h1 + x * h * h2 - 2 * x * h1 * h1


def delta_small(lam, alpha, x):
    """``delta(x)``, which has the sign of dDelta/dlam where ``d_2 < 0``."""
    if not lam > 0:
        raise DomainError(f"delta is defined for lam > 0, got {lam}")
    p, h, h1, h2, _ = _kern(lam, alpha, x)
    den = _gram(h, h1, h2, x)
    if not den < 0:
        raise RegimeError(f"h h' + x h h'' - 2x h'^2 = {den!r} >= 0 at x={x}: outside d_2 < 0")
    dh = eval_dh_dlambda(p, x, FINE)
    return -h * h * h1 / den - h * math.log(x) + dh


def delta1_family(lam, alpha, x):
    """``(delta_1, delta_1', delta_1'', delta_1''')``.

    ``delta_1 = q(x) h + x**(lam+1) (1-x)**(alpha+1) (lam + 1 - (lam+1+alpha) x)``
    with ``q`` the quadratic prefactor; its derivatives are taken in ``x``.
    """
    _, h, _, _, _ = _kern(lam, alpha, x)
    s = lam + 1 + alpha
    lx, l1x = math.log(x), math.log1p(-x)
    quad = -(lam + 1) ** 2 + (2 * lam * lam + 4 * lam + 2 + 2 * lam * alpha + alpha) * x - s * s * x * x
    w1 = math.exp((lam + 1) * lx + (alpha + 1) * l1x)
    w0 = math.exp(lam * lx + alpha * l1x)
    d0 = quad * h + w1 * (lam + 1 - s * x)
    dd1 = (2 * lam * lam + 4 * lam + 2 + 2 * lam * alpha + alpha - 2 * s * s * x) * h - 2 * s * w1
    dd2 = -2 * s * s * h + (-alpha + 2 * s * x) * w0
    dd3 = -alpha * (lam + (lam + 2 + alpha) * x) * math.exp((lam - 1) * lx + (alpha - 1) * l1x)
    return d0, dd1, dd2, dd3


def delta3(alpha, x):
    """``delta_3(x) = 1 - (1 + x + alpha x)(1-x)**(alpha+1)``."""
    return 1 - (1 + x + alpha * x) * math.exp((alpha + 1) * math.log1p(-x))


def delta3_prime(alpha, x):
    return (alpha + 1) * (alpha + 2) * x * math.exp(alpha * math.log1p(-x))


def delta_split(lam, alpha, x):
    """``(Delta_1, Delta_2, T_1, T_2)`` with ``Delta = Delta_1 + x Delta_2``.

    Defined for ``alpha < -3``; the formulas themselves hold for any ``alpha != -1``.
    """
    if not alpha < -3:
        raise DomainError(f"delta_split is set up for alpha < -3, got {alpha}")
    p, h, h1, h2, _ = _kern(lam, alpha, x)
    f0 = eval_f_lambda(KernelParams(0.0, alpha), x, FINE)
    g1, g2, _ = eval_derivatives(KernelParams(0.0, alpha), x)
    gap = gap_integral(p, x, FINE)  # x**lam f_0 - h
    w = math.exp(alpha * math.log1p(-x))
    v = w * gap / (h * f0)  # h'/h - f_0'/f_0
    big1 = v - x * v * v
    big2 = ((h2 * f0 - 2 * h1 * g1) * f0 + (2 * g1 * g1 - f0 * g2) * h) / (h * f0 * f0)
    om = 1.0 - x
    t1 = (lam * x ** (lam - 1) / om ** (alpha + 2) * f0 / om ** (alpha + 1)
          + alpha / om ** (alpha + 2) * (-gap) / om ** (alpha + 2))
    t2 = ((alpha + 2) * h - (lam - lam * x + alpha * x + 2 * x) * x ** (lam - 1) * f0) / om ** (alpha + 3)
    return big1, big2, t1, t2


def delta2_from_t(lam, alpha, x):
    """``Delta_2`` reassembled from ``T_1 + T_2`` and its prefactor."""
    _, _, t1, t2 = delta_split(lam, alpha, x)
    h = eval_f_lambda(KernelParams(lam, alpha), x, FINE)
    f0 = eval_f_lambda(KernelParams(0.0, alpha), x, FINE)
    return (1 - x) ** (3 * (alpha + 1)) / ((alpha + 1) * h * f0 * f0) * (t1 + t2)


def positive_alpha_terms(lam, alpha, x):
    """The two terms whose sum times ``(1-x)**(alpha-1)`` is ``Delta`` (``alpha > 0``)."""
    if not alpha > 0:
        raise DomainError(f"positive_alpha_terms needs alpha > 0, got {alpha}")
    _, h, _, _, _ = _kern(lam, alpha, x)
    f0 = eval_f_lambda(KernelParams(0.0, alpha), x, FINE)
    xl = x ** lam
    first = ((1 - x) * (xl / h - 1 / f0)
             - x * (1 - x) ** (alpha + 1) * (xl * xl / (h * h) - 1 / (f0 * f0)))
    second = x / (h * f0) * tail_bracket(lam, alpha, x, h=h, f0=f0)
    return first, second


def tail_bracket(lam, alpha, x, h=None, f0=None):
    """``(lam - lam x - alpha x) x**(lam-1) f_0 + alpha h``."""
    if h is None:
        h = eval_f_lambda(KernelParams(lam, alpha), x, FINE)
    if f0 is None:
        f0 = eval_f_lambda(KernelParams(0.0, alpha), x, FINE)
    return (lam - lam * x - alpha * x) * x ** (lam - 1) * f0 + alpha * h


def tail_bracket_limit(lam, alpha):
    """``-alpha int_0^1 (1 - t**lam)(1-t)**alpha dt`` for ``alpha > 0``."""
    return -alpha * (1 / (alpha + 1) - beta_fn(lam + 1, alpha + 1))


def kernel_ratio_limit(lam, alpha):
    """Extrapolated ``lim_{x->1} (1-x)**(alpha+1) / f_lam(x)`` for ``alpha < -3``."""
    def ratio(x):
        return math.exp((alpha + 1) * math.log1p(-x)) / eval_f_lambda(KernelParams(lam, alpha), x, FINE)
    return extrapolate_to_one(ratio, [1.0, 2.0])


# ---------------------------------------------------------------------------
# claim batteries

@dataclass
class DiagnosticReport:
    claim_id: str
    lam: float
    alpha: float
    passed: Optional[bool]
    worst_violation: float
    witness_x: Optional[float] = None
    npoints: int = 0
    note: str = ""

    @property
    def status(self) -> str:
        if self.passed is None:
            return "skip"
        return "pass" if self.passed else "fail"


def _margin_report(claim_id, lam, alpha, xs, values, tol, note=""):
    """Report for a ``values >= 0`` claim: worst violation is the smallest value."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return DiagnosticReport(claim_id, lam, alpha, None, 0.0, note="empty sample")
    i = int(np.argmin(values))
    worst = float(values[i])
    return DiagnosticReport(claim_id, lam, alpha, worst >= -tol, worst, float(xs[i]),
                            len(values), note)


def _skip(claim_id, lam, alpha, why):
    return DiagnosticReport(claim_id, lam, alpha, None, 0.0, note=why)


def prop4_regime(lam, alpha):
    return lam > 0 and -2 <= alpha < 0


def prop5_regime(lam, alpha):
    return -3 <= alpha < -2 and lam > -(alpha + 2)


def verify_claims(lam: float, alpha: float, grid: Sequence[float], tol: float = 1e-10):
    """Check every claim applicable to ``(lam, alpha)`` on ``grid``.

    Returns one :class:`DiagnosticReport` per known claim id, sorted by id;
    claims whose hypotheses do not hold are marked skipped.
    """
    xs = np.asarray(grid, dtype=float)
    if xs.size == 0 or np.any(xs <= 0) or np.any(xs >= 1):
        raise DomainError("verification grid must lie inside (0, 1)")
    reports = []
    add = reports.append

    add(_margin_report("delta_zero", 0.0, alpha, xs, [-abs(delta(0.0, alpha, x)) for x in xs], tol,
                       "Delta(0, x) = 0"))

    if lam > 0:
        add(_margin_report("prop4.d1_nonneg", lam, alpha, xs, [d1(lam, alpha, x) for x in xs], tol))
    else:
        add(_skip("prop4.d1_nonneg", lam, alpha, "needs lam > 0"))

    if alpha == 0:
        add(_margin_report("prop4.alpha0_loglinear", lam, alpha, xs,
                           [-abs(delta(lam, alpha, x)) for x in xs], tol, "Delta = 0 for alpha = 0"))
    else:
        add(_skip("prop4.alpha0_loglinear", lam, alpha, "needs alpha = 0"))

    in4, in5 = prop4_regime(lam, alpha), prop5_regime(lam, alpha)
    tag = "prop4" if in4 else "prop5"
    chain_ids = ["e2_increasing", "d2_sign_structure", "delta1_chain", "delta_small_positive",
                 "ddelta_dlambda_positive"]
    if in4 or in5:
        add(_margin_report(f"{tag}.e2_increasing", lam, alpha, xs,
                           [e2_prime(lam, alpha, x) for x in xs], tol))
        x_star = locate_x_star(lam, alpha)
        # d_2 < 0 below x*, > 0 above
        signed = [(-d2(lam, alpha, x) if x < x_star else d2(lam, alpha, x)) for x in xs]
        add(_margin_report(f"{tag}.d2_sign_structure", lam, alpha, xs, signed, tol,
                           f"x*={float(x_star)!r}"))
        fam = np.array([delta1_family(lam, alpha, x) for x in xs])
        add(_margin_report(f"{tag}.delta1_chain", lam, alpha, xs, fam.min(axis=1), tol,
                           "delta_1, delta_1', delta_1'', delta_1''' > 0"))
        below = xs[xs < x_star]
        vals = []
        for x in below:
            try:
                vals.append(delta_small(lam, alpha, x))
            except RegimeError:
                vals.append(-np.inf)
        add(_margin_report(f"{tag}.delta_small_positive", lam, alpha, below, vals, tol,
                           f"on (0, x*) with x*={float(x_star)!r}"))
        add(_margin_report(f"{tag}.ddelta_dlambda_positive", lam, alpha, xs,
                           [delta_dlambda(lam, alpha, x) for x in xs], tol))
    else:
        for cid in chain_ids:
            add(_skip(f"prop4.{cid}", lam, alpha, "needs lam > 0 and -2 <= alpha < 0, "
                      "or -3 <= alpha < -2 and lam > -(alpha + 2)"))

    if in4 and alpha > -2:
        e0, e1 = e2(lam, alpha, 0.0), e2(lam, alpha, 1.0)
        add(DiagnosticReport("prop4.e2_endpoints", lam, alpha, e0 < 0 <= e1 + tol,
                             min(-e0, e1), None, 2, f"e2(0)={e0!r}, e2(1)={e1!r}"))
    else:
        add(_skip("prop4.e2_endpoints", lam, alpha, "needs -2 < alpha < 0"))

    if -3 <= alpha < -2:
        lam0 = -(alpha + 2)
        add(_margin_report("prop5.delta3_positive", lam0, alpha, xs, [delta3(alpha, x) for x in xs], tol))
        add(_margin_report("prop5.delta_lambda0_positive", lam0, alpha, xs,
                           [delta(lam0, alpha, x) for x in xs], tol))
    else:
        add(_skip("prop5.delta3_positive", lam, alpha, "needs -3 <= alpha < -2"))
        add(_skip("prop5.delta_lambda0_positive", lam, alpha, "needs -3 <= alpha < -2"))
    if in5:
        add(_margin_report("prop5.d2_negative", lam, alpha, xs,
                           [-d2(lam, alpha, x) for x in xs], tol))
    else:
        add(_skip("prop5.d2_negative", lam, alpha, "needs -3 <= alpha < -2 and lam > -(alpha + 2)"))

    if alpha < -3:
        target = -(alpha + 1)
        worst = 0.0
        for lm in (lam, 0.0):
            est = kernel_ratio_limit(lm, alpha)
            err = abs(est - target)
            if err > abs(worst):
                worst = -err
        add(DiagnosticReport("prop6.kernel_ratio_limit", lam, alpha, -worst <= 1e-6, worst, None, 6,
                             f"lim (1-x)^(alpha+1)/h -> {target!r}"))
        if lam > 0:
            est = extrapolate_to_one(lambda x: delta(lam, alpha, x), correction_exponents(alpha))
            exact = limit_delta_x1(lam, alpha)
            add(DiagnosticReport("prop6.delta_limit", lam, alpha, abs(est - exact) <= 1e-3,
                                 -abs(est - exact), None, 3,
                                 f"extrapolated {est!r} vs closed form {exact!r}"))
        else:
            add(_skip("prop6.delta_limit", lam, alpha, "needs lam > 0"))
        mid = xs[(xs > 0.05) & (xs < 0.95)]
        errs = []
        for x in mid:
            b1, b2, _, _ = delta_split(lam, alpha, x)
            d = delta(lam, alpha, x)
            errs.append(-abs(d - (b1 + x * b2)) / max(1.0, abs(d)))
        add(_margin_report("prop6.split_identity", lam, alpha, mid, errs, 1e-9))
    else:
        for cid in ("kernel_ratio_limit", "delta_limit", "split_identity"):
            add(_skip(f"prop6.{cid}", lam, alpha, "needs alpha < -3"))

    if alpha > 0 and lam > 0:
        near = 1 - np.geomspace(1e-2, 1 - X_CAP, 41)
        vals = np.array([delta(lam, alpha, x) for x in near])
        i = int(np.argmin(vals))
        ok = bool(vals[i] < 0)
        add(DiagnosticReport("prop6.delta_negative_near_one", lam, alpha, ok, float(vals[i]),
                             float(near[i]), len(near),
                             "witness found" if ok else "inconclusive: no negative value up to the cap"))
        errs = []
        for x in xs:
            t5, t6 = positive_alpha_terms(lam, alpha, x)
            d = delta(lam, alpha, x)
            lhs = d * (1 - x) ** (1 - alpha)
            errs.append(-abs(lhs - (t5 + t6)) / max(1.0, abs(lhs)))
        add(_margin_report("prop6.two_term_identity", lam, alpha, xs, errs, 1e-9))
    else:
        add(_skip("prop6.delta_negative_near_one", lam, alpha, "needs alpha > 0 and lam > 0"))
        add(_skip("prop6.two_term_identity", lam, alpha, "needs alpha > 0 and lam > 0"))

    return sorted(reports, key=lambda r: r.claim_id)
