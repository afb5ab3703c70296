"""Adaptive Gauss-Kronrod quadrature and periodic trapezoid sums.

The integrators here are tuned for the kernel integrals of this package:
integrands of the form ``t**lam * (1 - t)**alpha`` that may blow up at
either end of the interval.  Panels are seeded geometrically towards the
endpoints so that each panel sees only a bounded variation of the
integrand, then refined by bisection wherever the Kronrod error estimate
is too large.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import AccuracyError

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208292415660,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (0-based 1, 3, ..., 19).
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:20:2] = np.concatenate([_WG, _WG[::-1]])

EPS = np.finfo(float).eps


def _panel_sums(func, a, b):
    """Kronrod estimate and error estimate on each panel ``[a[i], b[i]]``."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    t = mid[:, None] + half[:, None] * NODES[None, :]
    y = np.asarray(func(t), dtype=float)
    kron = half * (y @ KRONROD_WEIGHTS)
    gauss = half * (y @ GAUSS_WEIGHTS)
    err = np.abs(kron - gauss)
    # QUADPACK-style sharpening of the raw |K - G| estimate.
    resasc = np.abs(half) * (np.abs(y - (kron / (2 * half))[:, None]) @ KRONROD_WEIGHTS)
    scale = np.where(resasc > 0, np.minimum(1.0, (200.0 * err / np.where(resasc > 0, resasc, 1.0)) ** 1.5), 1.0)
    err = np.where(resasc > 0, resasc * scale, err)
    return kron, np.maximum(err, 50.0 * EPS * np.abs(kron))


def geometric_breaks(a, b, *, left=False, right=False, ratio=0.5, depth=60):
    """Breakpoints on ``[a, b]`` that accumulate geometrically at the flagged ends.

    With ``right=True`` the panel lengths shrink by ``ratio`` towards ``b``
    until they reach ``depth`` halvings; similarly for ``left``.
    """
    pts = {a, b}
    width = b - a
    if left and right:
        mid = a + 0.5 * width
        return np.unique(np.concatenate([
            geometric_breaks(a, mid, left=True, ratio=ratio, depth=depth),
            geometric_breaks(mid, b, right=True, ratio=ratio, depth=depth),
        ]))
    for k in range(1, depth + 1):
        step = width * ratio ** k
        if step <= 4 * EPS * max(abs(a), abs(b), 1e-300):
            break
        if right:
            pts.add(b - step)
        if left:
            pts.add(a + step)
    return np.array(sorted(pts))


def gk_integrate(func, breaks, *, atol=0.0, rtol=1e-12, max_panels=20000):
    """Integrate a vectorised ``func`` over ``[breaks[0], breaks[-1]]``.

    Starts from the panels delimited by ``breaks`` and bisects the panels
    with the largest error estimates until the total estimated error is
    below ``max(atol, rtol * |I|)``.

    Returns ``(value, error_estimate)``.  Raises :class:`AccuracyError`
    when the panel budget runs out.
    """
    rtol = max(rtol, 200 * EPS)
    breaks = np.asarray(breaks, dtype=float)
    a, b = breaks[:-1], breaks[1:]
    vals, errs = _panel_sums(func, a, b)
    while True:
        total = math.fsum(vals)
        err = float(np.sum(errs))
        target = max(atol, rtol * abs(total))
        if err <= target:
            return total, err
        if a.size >= max_panels:
            raise AccuracyError(
                f"quadrature did not converge: estimate {total!r}, error {err:.3g}",
                estimate=total, error=err)
        # Split every panel whose error exceeds its share of the budget.
        share = target / a.size
        bad = errs > share
        if not np.any(bad):
            bad = errs >= np.max(errs)
        mids = 0.5 * (a[bad] + b[bad])
        if np.any((mids <= a[bad]) | (mids >= b[bad])):
            raise AccuracyError(
                f"quadrature panels collapsed: estimate {total!r}, error {err:.3g}",
                estimate=total, error=err)
        new_a = np.concatenate([a[bad], mids])
        new_b = np.concatenate([mids, b[bad]])
        nv, ne = _panel_sums(func, new_a, new_b)
        keep = ~bad
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])


def periodic_mean(func, *, tol=1e-12, n0=16, max_nodes=2 ** 16):
    """Mean of a ``2*pi``-periodic vectorised ``func`` by the trapezoid rule.

    The node count doubles until two successive estimates agree to ``tol``
    (relative to the magnitude of the estimate, or absolute if it is below 1).
    """
    n = n0
    prev = float(np.mean(func(2 * np.pi * np.arange(n) / n)))
    while n < max_nodes:
        n *= 2
        # Reuse the previous nodes: new estimate = mean of old and odd nodes.
        odd = func(2 * np.pi * (np.arange(n // 2) + 0.5) / (n // 2))
        cur = 0.5 * (prev + float(np.mean(odd)))
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise AccuracyError(
        f"angular trapezoid sum did not settle with {n} nodes", estimate=prev)
