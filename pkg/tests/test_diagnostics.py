
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logconvex.convexity import delta, delta_dlambda
from logconvex.diagnostics import (d1, d2, delta1_family, delta2_from_t, delta3, delta3_prime,
                                   delta_small, delta_split, e2, e2_prime, positive_alpha_terms, tail_bracket,
                                   tail_bracket_limit, kernel_ratio_limit, locate_x_star,
                                   verify_claims)
from logconvex.errors import DomainError, RegimeError

XS = np.linspace(0.01, 0.99, 100)


def fd(func, x, e=1e-6):
    return (func(x + e) - func(x - e)) / (2 * e)


# ---------------------------------------------------------------------------
# the -2 < alpha < 0 regime

@pytest.mark.parametrize("lam,alpha", [(1.0, -1.0), (2.5, -0.3), (0.7, -1.9)])
def test_e2_endpoint_values(lam, alpha):
    assert e2(lam, alpha, 0.0) == -(lam + 1) ** 2
    assert e2(lam, alpha, 1.0) == pytest.approx(-alpha * (2 + alpha), abs=1e-12)
    assert e2(lam, alpha, 1.0) > 0


def test_e2_sample_value():
    assert e2(1.0, -1.0, 0.5) == pytest.approx(-1.25, abs=1e-15)


def test_e2_prime_is_derivative():
    assert e2_prime(1.3, -0.4, 0.3) == pytest.approx(fd(lambda x: e2(1.3, -0.4, x), 0.3), rel=1e-8)


def test_e2_increasing_on_unit_interval():
    for lam, alpha in [(1.0, -1.0), (5.0, -1.9), (0.1, -0.1)]:
        assert all(e2_prime(lam, alpha, x) > 0 for x in XS)


def test_d1_sample_value():
    assert d1(1.0, 0.0, 0.5) == pytest.approx(0.0625, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(lam=st.floats(0.01, 10.0), alpha=st.floats(-2.0, -0.01), x=st.floats(0.01, 0.99))
def test_d1_nonnegative(lam, alpha, x):
    assert d1(lam, alpha, x) >= -1e-10


def test_d1_needs_positive_lambda():
    with pytest.raises(DomainError):
        d1(0.0, -1.0, 0.5)


def test_d2_vanishes_at_zero():
    assert abs(d2(1.0, -1.0, 1e-6)) < 1e-10
    assert abs(d1(1.0, -1.0, 1e-6)) < 1e-10


def test_d2_single_sign_change_for_alpha_between():
    xs = 1 - np.geomspace(0.999, 1e-6, 400)
    signs = np.sign([d2(1.0, -0.5, x) for x in xs])
    assert int(np.sum(signs[1:] != signs[:-1])) == 1
    x_star = locate_x_star(1.0, -0.5)
    assert 0 < x_star < 1
    assert d2(1.0, -0.5, x_star * 0.99) < 0 < d2(1.0, -0.5, min(x_star * 1.01 + 0.001, 0.999999))


def test_x_star_is_one_without_sign_change():
    assert locate_x_star(1.0, -2.5) == 1.0


def test_d2_denominator_domain():
    with pytest.raises(DomainError):
        d2(1.0, 1.0, 0.9)


def test_delta_small_over_x_tends_to_zero():
    r = [delta_small(1.0, -1.0, x) / x for x in (1e-2, 1e-3, 1e-4)]
    assert r[0] > r[1] > r[2] > 0
    assert r[2] < 1e-8


def test_delta_small_has_sign_of_delta_derivative():
    for x in (0.05, 0.2):
        assert delta_small(2.0, -2.0, x) > 0
        assert delta_dlambda(2.0, -2.0, x) > 0


def test_delta_small_outside_regime():
    with pytest.raises(RegimeError):
        delta_small(1.0, -0.5, 0.99)


def test_delta1_family_derivative_chain():
    lam, alpha, x = 1.7, -0.8, 0.4
    for k in range(3):
        assert delta1_family(lam, alpha, x)[k + 1] == pytest.approx(
            fd(lambda t: delta1_family(lam, alpha, t)[k], x), rel=1e-6)


def test_delta1_family_vanishes_at_zero():
    assert all(abs(v) < 1e-6 for v in delta1_family(1.0, -1.0, 1e-8)[:3])


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(0.01, 10.0), alpha=st.floats(-2.0, -0.01), x=st.floats(0.01, 0.99))
def test_delta1_third_derivative_positive(lam, alpha, x):
    assert delta1_family(lam, alpha, x)[3] > 0


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(0.01, 10.0), alpha=st.floats(-2.0, -0.01), x=st.floats(0.01, 0.99))
def test_delta_increasing_in_lambda(lam, alpha, x):
    assert delta_dlambda(lam, alpha, x) > 1e-12


# ---------------------------------------------------------------------------
# the -3 <= alpha < -2 regime

def test_delta3_sample_values():
    assert delta3(-2.5, 0.5) == pytest.approx(1 - 0.25 * 2 ** 1.5, abs=1e-15)
    assert abs(delta3(-2.5, 1e-9)) < 1e-12


def test_delta3_prime_is_derivative():
    assert delta3_prime(-2.7, 0.6) == pytest.approx(fd(lambda x: delta3(-2.7, x), 0.6), rel=1e-7)


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(-3.0, -2.01), x=st.floats(0.01, 0.99))
def test_delta3_positive(alpha, x):
    assert delta3(alpha, x) > 0


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(-3.0, -2.01), extra=st.floats(0.01, 10.0), x=st.floats(0.01, 0.99))
def test_d2_negative(alpha, extra, x):
    assert d2(-(alpha + 2) + extra, alpha, x) < 0


@pytest.mark.parametrize("alpha", [-2.2, -2.5, -3.0])
def test_delta_at_special_exponent_matches_closed_forms(alpha):
    lam0 = -(alpha + 2)
    for x in (0.1, 0.5, 0.9):
        d_h = -(alpha + 1) / (1 - x) ** 2
        w = (1 - x) ** (alpha + 1)
        d_f0 = (alpha + 1) * (1 - x) ** (alpha - 1) * (1 - x - alpha * x - w) / (1 - w) ** 2
        assert delta(lam0, alpha, x) == pytest.approx(d_h - d_f0, rel=1e-9)
        assert delta(lam0, alpha, x) > 0


# ---------------------------------------------------------------------------
# alpha < -3 and alpha > 0

@pytest.mark.parametrize("lam,alpha,x", [(1.0, -4.0, 0.5), (2.0, -4.5, 0.9), (0.5, -3.5, 0.99)])
def test_split_reassembles_delta(lam, alpha, x):
    big1, big2, _, _ = delta_split(lam, alpha, x)
    assert big1 + x * big2 == pytest.approx(delta(lam, alpha, x), rel=1e-9, abs=1e-12)
    assert delta2_from_t(lam, alpha, x) == pytest.approx(big2, rel=1e-8)


def test_split_domain():
    with pytest.raises(DomainError):
        delta_split(1.0, -2.0, 0.5)


@pytest.mark.parametrize("lam,alpha", [(1.0, -4.0), (0.0, -4.0), (2.0, -4.5)])
def test_kernel_ratio_limit(lam, alpha):
    assert kernel_ratio_limit(lam, alpha) == pytest.approx(-(alpha + 1), abs=1e-6)


@pytest.mark.parametrize("lam,alpha,x", [(1.0, 1.0, 0.5), (2.0, 0.5, 0.9), (1.0, 2.0, 0.99)])
def test_positive_alpha_terms_reassemble_delta(lam, alpha, x):
    t5, t6 = positive_alpha_terms(lam, alpha, x)
    assert (t5 + t6) * (1 - x) ** (alpha - 1) == pytest.approx(delta(lam, alpha, x), rel=1e-8)


def test_tail_bracket_limit():
    assert tail_bracket_limit(1.0, 1.0) == pytest.approx(-1 / 3, abs=1e-15)
    assert tail_bracket(1.0, 1.0, 1 - 1e-8) == pytest.approx(-1 / 3, abs=1e-6)


def test_first_term_small_near_one():
    t5, _ = positive_alpha_terms(1.0, 1.0, 0.999)
    assert abs(t5) < 1e-2


def test_positive_alpha_terms_domain():
    with pytest.raises(DomainError):
        positive_alpha_terms(1.0, -1.0, 0.5)


# ---------------------------------------------------------------------------
# claim battery

def test_verify_prop4_regime_all_pass():
    reports = verify_claims(1.0, -1.0, XS)
    applicable = [r for r in reports if r.passed is not None]
    assert applicable and all(r.passed for r in applicable)
    assert [r.claim_id for r in reports] == sorted(r.claim_id for r in reports)


def test_verify_prop5_regime_includes_delta3():
    reports = {r.claim_id: r for r in verify_claims(1.0, -2.5, XS)}
    assert reports["prop5.delta3_positive"].status == "pass"


def test_verify_delta_zero_claim():
    reports = {r.claim_id: r for r in verify_claims(0.0, -1.0, XS)}
    assert reports["delta_zero"].status == "pass"
    assert reports["delta_zero"].worst_violation == 0.0


def test_verify_below_minus_three():
    reports = {r.claim_id: r for r in verify_claims(1.0, -4.0, XS)}
    for claim in ("prop6.kernel_ratio_limit", "prop6.delta_limit", "prop6.split_identity"):
        assert reports[claim].status == "pass"


def test_verify_positive_alpha():
    reports = {r.claim_id: r for r in verify_claims(1.0, 1.0, XS)}
    assert reports["prop6.delta_negative_near_one"].status == "pass"
    assert reports["prop6.two_term_identity"].status == "pass"


def test_verify_unweighted_is_log_linear():
    reports = {r.claim_id: r for r in verify_claims(2.0, 0.0, XS)}
    assert reports["prop4.alpha0_loglinear"].status == "pass"


def test_inapplicable_claims_are_skipped():
    reports = {r.claim_id: r for r in verify_claims(1.0, 1.0, XS)}
    assert reports["prop5.delta3_positive"].status == "skip"
    assert reports["prop5.delta3_positive"].passed is None
