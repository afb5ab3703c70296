"""The reproduction battery behind ``logconvex reproduce``.

Every check returns a :class:`Check`; :data:`CHECKS` maps stable ids to
check functions.  Randomised checks draw from ``numpy.random.default_rng(seed)``.
"""
from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import convexity as cx
from . import diagnostics as dg
from .kernels import KernelParams, eval_f_lambda, kernel_quad
from .means import (TaylorCoefficients, monomial_mean, quad_mean, series_mean_p2,
                    series_mean_p2_x)
from .scan import DEFAULT_R_GRID, Subject, run_scan, scan_csv, subject_profile


@dataclass
class Check:
    check_id: str
    passed: bool
    detail: str


R_GRID_05 = [round(0.05 * i, 2) for i in range(1, 20)]
X_GRID = [r * r for r in DEFAULT_R_GRID]
ONE_PLUS_Z = TaylorCoefficients.of(1, 1)
SQRT2_Z = TaylorCoefficients.of(0, math.sqrt(2))


def quartic(x):
    return 9 - 24 * x + 18 * x ** 2 - 6 * x ** 3 + x ** 4


def cubic(x):
    return 18 - 36 * x + 21 * x ** 2 - 4 * x ** 3


def closed_form_1(r):
    return 2 * (3 - r ** 4) / (3 * (2 - r ** 2))


def closed_form_2(r):
    return (3 * r ** 2 - r ** 4) / (3 - 3 * r ** 2 + r ** 4)


def random_polynomial(rng, max_degree=8):
    deg = int(rng.integers(1, max_degree + 1))
    return TaylorCoefficients(tuple(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)))


# ---------------------------------------------------------------------------
# worked examples

def check_closed_form_1(seed):
    err = max(abs(series_mean_p2(ONE_PLUS_Z, 1.0, r) - closed_form_1(r)) for r in R_GRID_05)
    return Check("closed-form-1", err <= 1e-10, f"max |M - 2(3-r^4)/(3(2-r^2))| = {err:.3e} (tol 1e-10)")


def check_closed_form_2(seed):
    err = max(abs(series_mean_p2(SQRT2_Z, -4.0, r) - closed_form_2(r)) for r in R_GRID_05)
    return Check("closed-form-2", err <= 1e-10,
                 f"max |M - (3r^2-r^4)/(3-3r^2+r^4)| = {err:.3e} (tol 1e-10)")


def _quartic_from_d(x):
    """Recover the quartic from the D-functional of (3-x^2)/(2-x)."""
    h, h1, h2 = (3 - x * x) / (2 - x), (x * x - 4 * x + 3) / (2 - x) ** 2, -2 / (2 - x) ** 3
    return cx.d_functional_closed(h, h1, h2, x) * (2 - x) ** 2 * (3 - x * x) ** 2 / 2


def _cubic_from_d(x):
    q = 3 - 3 * x + x * x
    h, h1, h2 = (3 * x - x * x) / q, 3 * (3 - 2 * x) / q ** 2, 18 * (1 - x) * (2 - x) / q ** 3
    return cx.d_functional_closed(h, h1, h2, x) * (3 - x) ** 2 * q ** 2 / 3


def check_quartic_endpoints(seed):
    g0, g1 = quartic(0), quartic(1)
    inner = max(abs(_quartic_from_d(x) - quartic(x)) for x in X_GRID)
    ok = g0 == 9 and g1 == -2 and _quartic_from_d(0.0) == 9 and inner < 1e-10
    return Check("quartic-endpoints", ok,
                 f"g(0)={g0}, g(1)={g1}; D-reconstruction max error {inner:.1e}")


def check_cubic_endpoints(seed):
    g0, g1 = cubic(0), cubic(1)
    inner = max(abs(_cubic_from_d(x) - cubic(x)) for x in X_GRID)
    ok = g0 == 18 and g1 == -1 and inner < 1e-10
    return Check("cubic-endpoints", ok,
                 f"g(0)={g0}, g(1)={g1}; D-reconstruction max error {inner:.1e}")


def check_d_closed_forms(seed):
    # compare on the log-log scale x * D, where the difference error is uniform
    worst = 0.0
    for x in X_GRID:
        ea = abs(cx.d_functional_fd(lambda t: 3 - t * t, x) + 12 * x * x / (3 - x * x) ** 2)
        eb = abs(cx.d_functional_fd(lambda t: 2 - t, x) + 2 * x / (2 - x) ** 2)
        worst = max(worst, ea, eb)
    return Check("d-closed-forms", worst <= 1e-6,
                 f"x*D(3-x^2), x*D(2-x) vs finite differences: max error {worst:.2e}")


def _example_profile(check_id, coeffs, alpha, poly):
    prof = cx.loglog_profile(lambda x: series_mean_p2_x(coeffs, alpha, x), X_GRID)
    oracle = cx.find_sign_change(poly, 0.0, 1.0, 1e-12)
    roots = prof.sign_changes
    ok = prof.classification == cx.NEITHER and len(roots) == 1 and abs(roots[0] - oracle) <= 0.01
    where = f"{float(roots[0]):.6f}" if roots else "none"
    return Check(check_id, ok, f"{prof.classification}, sign changes {len(roots)} at x={where}; "
                               f"polynomial root {oracle:.6f}")


def check_quartic_profile(seed):
    return _example_profile("quartic-profile", ONE_PLUS_Z, 1.0, quartic)


def check_cubic_profile(seed):
    return _example_profile("cubic-profile", SQRT2_Z, -4.0, cubic)


def check_mean_examples(seed):
    vals = [
        (monomial_mean(2, 0, 1, 0.5), 0.125),
        (series_mean_p2(ONE_PLUS_Z, 1, 0.8), closed_form_1(0.8)),
        (monomial_mean(2, -4, 1, 0.5), (3 * 0.25 - 0.0625) / (2 * (3 - 0.75 + 0.0625))),
        (series_mean_p2(TaylorCoefficients.of(2 - 1j), -2.5, 0.3), 5.0),
    ]
    err = max(abs(a - b) for a, b in vals)
    return Check("mean-examples", err <= 1e-10, f"max error {err:.2e} over {len(vals)} values")


# ---------------------------------------------------------------------------
# log-convexity and sharpness

def check_log_convexity(seed):
    rng = np.random.default_rng(seed)
    polys = [random_polynomial(rng) for _ in range(20)]
    r = np.linspace(0.01, 0.99, 202)[1:-1]
    xs = r * r
    worst, where = math.inf, None
    for alpha in (-3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0):
        for i, f in enumerate(polys):
            for x in xs:
                d = cx.d_functional_fd(lambda t: series_mean_p2_x(f, alpha, t), x)
                if d < worst:
                    worst, where = d, (alpha, i, x)
    detail = (f"min log-log second difference {worst:.3e} (>= -1e-6) "
              f"at alpha={where[0]}, polynomial #{where[1]}, x={float(where[2]):.6g}")
    return Check("log-convexity", worst >= -1e-6, detail)


def check_sharpness_above(seed):
    near = 1 - np.geomspace(1e-2, 1e-6, 41)
    found = {}
    for alpha in (0.5, 1.0, 2.0):
        vals = [(cx.delta(1.0, alpha, x), x) for x in near]
        found[alpha] = min(vals)
    ok = all(v < 0 for v, _ in found.values())
    detail = "; ".join(f"alpha={a}: Delta={v:.3g} at x={x:.7f}" for a, (v, x) in found.items())
    return Check("sharpness-above", ok, detail)


def check_sharpness_below(seed):
    parts, ok = [], True
    for alpha in (-3.5, -4.0, -5.0):
        est = cx.delta_limit_extrapolated(1.0, alpha)
        exact = cx.limit_delta_x1(1.0, alpha)
        ok &= abs(est - exact) <= 1e-3
        parts.append(f"alpha={alpha}: {est:.6f} vs {exact:.6f}")
    ok &= cx.limit_delta_x1(1.0, -4.0) == -0.75
    return Check("sharpness-below", ok, "; ".join(parts) + " (tol 1e-3)")


def check_delta_zero(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        alpha = rng.uniform(-5, 3)
        x = rng.uniform(0.001, 0.999)
        worst = max(worst, abs(cx.delta(0.0, alpha, x)))
    return Check("delta-zero", worst <= 1e-12, f"max |Delta(0, x)| = {worst:.2e} over 100 draws")


def check_oracle_equivalence(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        f = random_polynomial(rng)
        alpha = rng.uniform(-4, 2)
        r = rng.uniform(0.1, 0.95)
        a = series_mean_p2(f, alpha, r)
        b = quad_mean(f, 2.0, alpha, r)
        worst = max(worst, abs(a - b) / abs(a))
    return Check("oracle-equivalence", worst <= 1e-6,
                 f"max relative gap series vs polar quadrature {worst:.2e} over 50 cases")


def check_proof_battery(seed):
    rng = np.random.default_rng(seed)
    xs = np.linspace(0.01, 0.99, 100)
    bad = []
    min_d1 = min_third = min_dd = math.inf
    for _ in range(100):
        lam = 10.0 * (1.0 - rng.random())
        alpha = -2.0 + 2.0 * rng.random()
        lam_grid = np.linspace(0.0, lam, 5)
        for x in xs:
            min_d1 = min(min_d1, dg.d1(lam, alpha, x))
            min_third = min(min_third, dg.delta1_family(lam, alpha, x)[3])
            min_dd = min(min_dd, cx.delta_dlambda(lam, alpha, x))
            vals = [cx.delta(lm, alpha, x) for lm in lam_grid]
            if np.any(np.diff(vals) < -1e-12 * max(1.0, max(abs(v) for v in vals))):
                bad.append((lam, alpha, x))
    min_d3 = max_d2 = None
    for _ in range(50):
        alpha = -3.0 + rng.random()
        lam0 = -(alpha + 2)
        lam = lam0 + 10.0 * (1.0 - rng.random())
        d3 = min(dg.delta3(alpha, x) for x in xs)
        d2 = max(dg.d2(lam, alpha, x) for x in xs)
        min_d3 = d3 if min_d3 is None else min(min_d3, d3)
        max_d2 = d2 if max_d2 is None else max(max_d2, d2)
    ok = (min_d1 >= -1e-10 and min_third > 0 and min_dd > 1e-12 and not bad
          and min_d3 > 0 and max_d2 < 0)
    return Check("proof-battery", ok,
                 f"min d1={min_d1:.2e}, min delta1'''={min_third:.2e}, min dDelta/dlam={min_dd:.2e}, "
                 f"monotonicity failures={len(bad)}, min delta3={min_d3:.2e}, max d2={max_d2:.2e}")


def check_aggregation(seed):
    rng = np.random.default_rng(seed)
    xs = np.linspace(0.01, 0.99, 50) ** 2
    worst = math.inf
    for _ in range(20):
        f = random_polynomial(rng)
        alpha = rng.uniform(-3, 0)
        for x in xs:
            d_h, rhs = cx.aggregation_terms(f.moduli_sq, alpha, x)
            worst = min(worst, d_h - rhs)
    return Check("aggregation", worst >= -1e-9, f"min D(H) - sum h_k D(h_k)/H = {worst:.3e} (>= -1e-9)")


SCAN_FLAGS = dict(ps=[2.0], alphas=[-3.0, -2.0, -1.0, 0.0, 1.0], subjects=[Subject.monomial(k) for k in (0, 1, 3)])


def check_determinism(seed):
    texts = []
    with tempfile.TemporaryDirectory() as tmp:
        for i in range(2):
            path = Path(tmp) / f"scan{i}.csv"
            recs = run_scan(xgrid=X_GRID, **SCAN_FLAGS)
            path.write_text(scan_csv(recs), newline="")
            texts.append(path.read_bytes())
    return Check("determinism", texts[0] == texts[1], f"two scans, {len(texts[0])} bytes each, identical")


# ---------------------------------------------------------------------------
# proof examples

def check_scan_examples(seed):
    convex_region = run_scan([2.0], [-3.0 + 0.5 * i for i in range(7)],
                             [Subject.monomial(k) for k in range(9)], X_GRID)
    above = run_scan([2.0], [0.5, 1.0, 2.0], [Subject.monomial(1)], X_GRID)
    below = run_scan([2.0], [-4.0], [Subject.monomial(1)], X_GRID)
    ok = (all(r.classification == cx.CONVEX for r in convex_region)
          and all(r.classification != cx.CONVEX for r in above)
          and below[0].classification != cx.CONVEX)
    return Check("scan-examples", ok,
                 f"{sum(r.classification == cx.CONVEX for r in convex_region)}/{len(convex_region)} convex "
                 f"for -3<=alpha<=0; above: {[r.classification for r in above]}; "
                 f"alpha=-4: {below[0].classification}")


def check_profile_examples(seed):
    prof = subject_profile(2.0, -1.0, Subject.monomial(1), X_GRID)
    return Check("profile-examples", prof.classification == cx.CONVEX,
                 f"monomial k=1, alpha=-1: {prof.classification}")


def check_kernel_closed_forms(seed):
    errs = []
    for lam, alpha, x, exact in [(0.0, 0.0, 0.7, 0.7), (0.0, -1.0, 0.5, math.log(2)),
                                 (0.5, -2.5, 0.5, 2.0 / 3.0)]:
        errs.append(abs(eval_f_lambda(KernelParams(lam, alpha), x) - exact))
        errs.append(abs(kernel_quad(KernelParams(lam, alpha), x) - exact))
    # the special exponent lam0 = -(alpha + 2)
    for alpha in (-2.2, -2.5, -2.9):
        lam0 = -(alpha + 2)
        for x in (0.1, 0.5, 0.9):
            exact = -((1 / x - 1) ** (alpha + 1)) / (alpha + 1)
            errs.append(abs(kernel_quad(KernelParams(lam0, alpha), x) - exact) / exact)
    worst = max(errs)
    return Check("kernel-closed-forms", worst <= 1e-10, f"max error {worst:.2e}")


def check_mild_weight_pieces(seed):
    ok = True
    notes = []
    for lam, alpha in [(1.0, -1.0), (2.5, -0.3), (0.7, -2.0)]:
        e0, e1 = dg.e2(lam, alpha, 0.0), dg.e2(lam, alpha, 1.0)
        ok &= e0 == -(lam + 1) ** 2 and abs(e1 + alpha * (2 + alpha)) < 1e-12
        ok &= e0 < 0 <= e1 + 1e-15
    ok &= abs(dg.e2(1.0, -1.0, 0.5) + 1.25) < 1e-15
    # d1 -> 0 and d2 -> 0 as x -> 0
    small = [dg.d1(1.0, -1.0, 1e-6), dg.d2(1.0, -1.0, 1e-6)]
    ok &= all(abs(v) < 1e-10 for v in small)
    ok &= abs(dg.d1(1.0, 0.0, 0.5) - 0.0625) < 1e-14
    # d2 negative throughout for -3 <= alpha < -2, lam > lam0
    ok &= max(dg.d2(1.0, -3.0, x) for x in X_GRID) < 0
    # exactly one sign change of d2 for alpha = -0.5
    signs = np.sign([dg.d2(1.0, -0.5, x) for x in 1 - np.geomspace(0.999, 1e-6, 400)])
    ok &= int(np.sum(signs[1:] != signs[:-1])) == 1
    # delta(x) / x -> 0
    ratios = [dg.delta_small(1.0, -1.0, x) / x for x in (1e-2, 1e-3, 1e-4)]
    ok &= ratios[0] > ratios[1] > ratios[2] > 0
    ok &= dg.delta_small(2.0, -2.0, 0.1) > 0
    # delta_1 family vanishes at 0 and its third derivative is positive
    fam0 = dg.delta1_family(1.0, -1.0, 1e-8)
    ok &= all(abs(v) < 1e-6 for v in fam0[:3])
    ok &= min(dg.delta1_family(1.0, -1.0, x)[3] for x in X_GRID) > 0
    ok &= min(dg.delta1_family(1.0, -2.5, x)[3] for x in X_GRID) > 0
    ok &= cx.delta_dlambda(1.0, -1.0, 0.5) > 0 and cx.delta_dlambda(1.0, -2.2, 0.5) > 0
    notes.append(f"delta/x at 1e-2,1e-3,1e-4: {', '.join(f'{v:.2e}' for v in ratios)}")
    return Check("mild-weight-pieces", bool(ok), "; ".join(notes))


def check_strong_weight_pieces(seed):
    ok = True
    worst = 0.0
    for alpha in (-2.2, -2.5, -2.9, -3.0):
        lam0 = -(alpha + 2)
        for x in X_GRID[::4]:
            d_h = -(alpha + 1) / (1 - x) ** 2
            w = (1 - x) ** (alpha + 1)
            d_f0 = (alpha + 1) * (1 - x) ** (alpha - 1) * (1 - x - alpha * x - w) / (1 - w) ** 2
            worst = max(worst, abs(cx.delta(lam0, alpha, x) - (d_h - d_f0)) / max(1.0, abs(d_h)))
            ok &= cx.delta(lam0, alpha, x) > 0 and dg.delta3(alpha, x) > 0
    ok &= abs(dg.delta3(-2.5, 0.5) - (1 - 0.25 * 2 ** 1.5)) < 1e-15
    ok &= abs(dg.delta3(-2.5, 1e-9)) < 1e-12
    ok &= worst < 1e-9
    return Check("strong-weight-pieces", bool(ok), f"Delta(lam0) vs closed D-values: max rel error {worst:.2e}")


def check_limit_pieces(seed):
    ok = True
    details = []
    # alpha < -3 limits
    for lam, alpha in [(1.0, -4.0), (2.0, -4.5)]:
        ratio = dg.kernel_ratio_limit(lam, alpha)
        ok &= abs(ratio - (-(alpha + 1))) < 1e-6
        l1 = cx.extrapolate_to_one(lambda x: dg.delta_split(lam, alpha, x)[0],
                                   cx.correction_exponents(alpha))
        c = lam * (alpha + 1) / (alpha + 2)
        ok &= abs(l1 - c * (1 - c)) < 1e-4
        t1 = cx.extrapolate_to_one(lambda x: dg.delta_split(lam, alpha, x)[2],
                                   cx.correction_exponents(alpha))
        t2 = cx.extrapolate_to_one(lambda x: dg.delta_split(lam, alpha, x)[3],
                                   cx.correction_exponents(alpha))
        ok &= abs(t1) < 1e-3 and abs(t2 + lam * (lam - 1) / ((alpha + 1) * (alpha + 3))) < 1e-3
        details.append(f"lam={lam}, alpha={alpha}: kernel ratio {ratio:.6f}, Delta1 {l1:.6f}, T1 {t1:.1e}, T2 {t2:.6f}")
    # alpha > 0 pieces
    bracket = dg.tail_bracket_limit(1.0, 1.0)
    ok &= abs(bracket + 1 / 3) < 1e-14
    ok &= abs(dg.tail_bracket(1.0, 1.0, 1 - 1e-8) - bracket) < 1e-6
    t5, _ = dg.positive_alpha_terms(1.0, 1.0, 0.999)
    ok &= abs(t5) < 1e-2
    ok &= abs(cx.delta(1.0, -4.0, 0.999) + 0.75) < 1e-2
    details.append(f"tail bracket limit {bracket:.6f}, first term at 0.999={t5:.2e}")
    return Check("limit-pieces", bool(ok), "; ".join(details))


def check_verify_regimes(seed):
    xs = np.linspace(0.01, 0.99, 100)
    r1 = dg.verify_claims(1.0, -1.0, xs)
    r2 = {r.claim_id: r for r in dg.verify_claims(1.0, -2.5, xs)}
    r3 = {r.claim_id: r for r in dg.verify_claims(0.0, -1.0, xs)}
    r4 = {r.claim_id: r for r in dg.verify_claims(1.0, -4.0, xs)}
    ok = (all(r.passed is not False for r in r1) and any(r.passed for r in r1)
          and r2["prop5.delta3_positive"].passed is True
          and r3["delta_zero"].passed is True
          and r4["prop6.kernel_ratio_limit"].passed is True)
    return Check("verify-regimes", ok,
                 f"(1,-1): {sum(r.passed is True for r in r1)} pass, "
                 f"{sum(r.passed is False for r in r1)} fail")


CHECKS = {
    "closed-form-1": check_closed_form_1,
    "closed-form-2": check_closed_form_2,
    "quartic-endpoints": check_quartic_endpoints,
    "cubic-endpoints": check_cubic_endpoints,
    "d-closed-forms": check_d_closed_forms,
    "quartic-profile": check_quartic_profile,
    "cubic-profile": check_cubic_profile,
    "mean-examples": check_mean_examples,
    "kernel-closed-forms": check_kernel_closed_forms,
    "log-convexity": check_log_convexity,
    "sharpness-above": check_sharpness_above,
    "sharpness-below": check_sharpness_below,
    "delta-zero": check_delta_zero,
    "oracle-equivalence": check_oracle_equivalence,
    "proof-battery": check_proof_battery,
    "aggregation": check_aggregation,
    "determinism": check_determinism,
    "mild-weight-pieces": check_mild_weight_pieces,
    "strong-weight-pieces": check_strong_weight_pieces,
    "limit-pieces": check_limit_pieces,
    "verify-regimes": check_verify_regimes,
    "scan-examples": check_scan_examples,
    "profile-examples": check_profile_examples,
}


def run_battery(only=None, seed=0):
    ids = list(CHECKS) if not only else list(only)
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check id(s): {', '.join(unknown)}")
    return [CHECKS[i](seed) for i in ids]
