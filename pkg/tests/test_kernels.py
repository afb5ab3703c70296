import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logconvex.errors import ConsistencyError, DomainError
from logconvex.kernels import (KernelParams, closed_form_f, eval_derivatives, eval_dh_dlambda,
                               eval_f_lambda, gap_integral, kernel_bundle, kernel_quad,
                               kernel_series)
from logconvex.quadrature import geometric_breaks, gk_integrate, periodic_mean

from conftest import oracle_f


def test_params_reject_negative_lambda():
    with pytest.raises(DomainError):
        KernelParams(-0.5, 0.0)


def test_params_reject_nonfinite():
    with pytest.raises(DomainError):
        KernelParams(1.0, math.nan)


def test_special_exponent_flag():
    assert KernelParams(0.5, -2.5).is_special
    assert not KernelParams(0.5, -2.4).is_special
    assert not KernelParams(0.0, -2.0).is_special


@pytest.mark.parametrize("x", [0.0, 1.0, -0.1, 1.5])
def test_x_outside_domain(x):
    with pytest.raises(DomainError):
        eval_f_lambda(KernelParams(1.0, 0.5), x)


def test_tol_must_be_positive():
    with pytest.raises(DomainError):
        eval_f_lambda(KernelParams(1.0, 0.5), 0.5, tol=0.0)


@pytest.mark.parametrize("lam,alpha,x,exact", [
    (0.0, 0.0, 0.5, 0.5),
    (1.0, 0.0, 0.5, 0.125),
    (0.0, -1.0, 0.5, math.log(2)),
    (0.0, 1.0, 0.5, (1 - 0.25) / 2),
    (0.5, -2.5, 0.5, 2.0 / 3.0),
    (1.0, -3.0, 0.25, 1.0 / 18.0),
])
def test_closed_forms(lam, alpha, x, exact):
    p = KernelParams(lam, alpha)
    assert closed_form_f(p, x) == pytest.approx(exact, rel=1e-14)
    assert kernel_quad(p, x) == pytest.approx(exact, rel=1e-12)


def test_no_closed_form_for_generic_parameters():
    assert closed_form_f(KernelParams(1.3, -0.7), 0.5) is None


@pytest.mark.parametrize("lam,alpha", [(1.0, 1.0), (2.5, -0.5), (1.0, -1.0), (3.0, -2.5),
                                       (1.0, -4.0), (7.0, 2.0), (0.3, -0.9)])
@pytest.mark.parametrize("x", [0.01, 0.3, 0.7, 0.95, 0.999])
def test_kernel_matches_independent_oracle(lam, alpha, x):
    val = eval_f_lambda(KernelParams(lam, alpha), x)
    assert val == pytest.approx(oracle_f(lam, alpha, x), rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(lam=st.floats(0.0, 10.0), alpha=st.floats(-5.0, 3.0), x=st.floats(0.01, 0.85))
def test_series_and_quadrature_agree(lam, alpha, x):
    p = KernelParams(lam, alpha)
    s, q = kernel_series(p, x), kernel_quad(p, x)
    assert s == pytest.approx(q, rel=1e-11)


def test_cross_check_passes_on_consistent_routes():
    p = KernelParams(1.7, -1.3)
    assert eval_f_lambda(p, 0.6, cross_check=True) == pytest.approx(oracle_f(1.7, -1.3, 0.6), rel=1e-10)


def test_cross_check_detects_disagreement(monkeypatch):
    import logconvex.kernels as k
    monkeypatch.setattr(k, "kernel_quad", lambda p, x, rtol=1e-13: 1.0)
    with pytest.raises(ConsistencyError):
        k.eval_f_lambda(KernelParams(1.7, -1.3), 0.61, cross_check=True)


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(0.0, 6.0), alpha=st.floats(-4.0, 2.0), x=st.floats(0.05, 0.95))
def test_kernel_positive_and_increasing(lam, alpha, x):
    p = KernelParams(lam, alpha)
    a, b = eval_f_lambda(p, x), eval_f_lambda(p, min(x + 0.01, 0.99))
    assert 0 < a < b


def test_kernel_decreasing_in_lambda():
    x = 0.7
    vals = [eval_f_lambda(KernelParams(lam, -1.5), x) for lam in (0.0, 0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("lam,alpha,x", [(1.0, 0.5, 0.3), (2.0, -2.5, 0.8), (0.5, -4.0, 0.95)])
def test_derivatives_match_finite_differences(lam, alpha, x):
    p = KernelParams(lam, alpha)
    h1, h2, h3 = eval_derivatives(p, x)
    e = 1e-5 * (1 - x)
    f = lambda t: eval_f_lambda(p, t, 1e-14)
    g = lambda t: eval_derivatives(p, t)
    assert h1 == pytest.approx((f(x + e) - f(x - e)) / (2 * e), rel=1e-7)
    assert h2 == pytest.approx((g(x + e)[0] - g(x - e)[0]) / (2 * e), rel=1e-7)
    assert h3 == pytest.approx((g(x + e)[1] - g(x - e)[1]) / (2 * e), rel=1e-7)


@pytest.mark.parametrize("lam,alpha,x", [(1.0, 0.0, 0.4), (2.0, 1.0, 0.5), (1.5, -2.0, 0.6),
                                         (1.0, -4.0, 0.97)])
def test_dh_dlambda_matches_difference_quotient(lam, alpha, x):
    e = 1e-5
    fd = (eval_f_lambda(KernelParams(lam + e, alpha), x, 1e-14)
          - eval_f_lambda(KernelParams(lam - e, alpha), x, 1e-14)) / (2 * e)
    val = eval_dh_dlambda(KernelParams(lam, alpha), x)
    assert val < 0
    assert val == pytest.approx(fd, rel=1e-7)


def test_bundle_is_consistent():
    p = KernelParams(1.2, -0.4)
    b = kernel_bundle(p, 0.5)
    assert b.h == eval_f_lambda(p, 0.5)
    assert (b.h1, b.h2, b.h3) == eval_derivatives(p, 0.5)


@pytest.mark.parametrize("lam,alpha,x", [(1.0, -1.0, 0.3), (2.0, -4.0, 0.999), (0.5, 2.0, 0.95)])
def test_gap_integral(lam, alpha, x):
    direct = x ** lam * oracle_f(0.0, alpha, x) - oracle_f(lam, alpha, x)
    assert gap_integral(KernelParams(lam, alpha), x) == pytest.approx(direct, rel=1e-8)


# ---------------------------------------------------------------------------
# quadrature primitives

def test_gk_integrates_polynomial_exactly():
    val, err = gk_integrate(lambda t: 7 * t ** 6, [0.0, 1.0])
    assert val == pytest.approx(1.0, rel=1e-15)
    assert err < 1e-13


def test_gk_endpoint_singularity_with_geometric_breaks():
    breaks = geometric_breaks(0.0, 1.0, left=True)
    val, _ = gk_integrate(lambda t: t ** -0.5, breaks)
    assert val == pytest.approx(2.0, rel=1e-11)


def test_geometric_breaks_are_sorted_and_span():
    b = geometric_breaks(0.0, 2.0, left=False, depth=10)
    assert b[0] == 0.0 and b[-1] == 2.0
    assert np.all(np.diff(b) > 0)


def test_periodic_mean_trig():
    val = periodic_mean(lambda th: np.cos(th) ** 2, tol=1e-14)
    assert val == pytest.approx(0.5, abs=1e-14)
