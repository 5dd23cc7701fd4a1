import random

import pytest
from hypothesis import given, settings, strategies as st

from dilogint import DomainError, Tower
from dilogint.obstruction import (CandidateDatum, InconsistencyCertificate, as_log_integrand,
                                  bounded_no_del_search, derivative_pole_growth, log_tower,
                                  pole_profile, polylog_poly_antiderivative)

from corpus import distinct, nonzero, rat

T, X, LAM = log_tower()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(-4, 4, max_denominator=3), min_size=1, max_size=5))
def test_polylog_recurrence(coeffs):
    u = polylog_poly_antiderivative(coeffs)
    target = sum((c * LAM ** n for n, c in enumerate(coeffs)), T.zero())
    assert u.derive() == target


def test_polylog_rejects_nonconstant_coefficients():
    with pytest.raises(DomainError):
        polylog_poly_antiderivative([X])


def test_pole_profile_example():
    z = 1 / LAM ** 2 + 3 / (LAM - 1) + X * LAM
    prof = pole_profile(z)
    assert prof.order(0) == 2 and prof.order(1) == 1
    assert prof.residue(1) == 3 and prof.residue(0) == 0
    assert prof.polynomial == X * LAM


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_residue_additivity(seed):
    rng = random.Random(seed)
    betas = distinct(rng, 2)

    def element():
        return sum((rat(rng) / (LAM - b) ** q for b in betas for q in (1, 2)), T.zero())

    a, b = element(), element()
    pa, pb, pab = pole_profile(a), pole_profile(b), pole_profile(a + b)
    for beta in betas:
        assert pab.residue(T.coerce(beta)) == pa.residue(T.coerce(beta)) + pb.residue(T.coerce(beta))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_growth_property(seed):
    rng = random.Random(seed)
    z = T.zero()
    for beta in distinct(rng, rng.randint(1, 2)):
        z = z + nonzero(rng) * X ** rng.randint(-1, 1) / (LAM - beta) ** rng.randint(1, 3)
    report = derivative_pole_growth(z)
    assert report.holds


def test_growth_also_holds_at_nonconstant_poles():
    report = derivative_pole_growth(1 / (LAM - X) + X / (LAM - 1 / X) ** 2)
    assert report.holds and report.derivative_profile.order(X) == 2


@pytest.mark.parametrize("pair,expected", [
    (([1], [0, 1]), 1 / LAM),
    (([0, 0, 1], [1]), LAM ** 2),
    (([1, 1], [-1, 1]), (1 + LAM) / (LAM - 1)),
])
def test_integrand_from_coefficient_lists(pair, expected):
    assert as_log_integrand(pair) == expected


def test_search_inconsistent_for_one_over_log():
    y = Tower.rational("Y").gen("Y")
    res = bounded_no_del_search(1 / y, (2, 3))
    assert isinstance(res, InconsistencyCertificate) and res.replays()
    assert res.shape[0] > 0 and res.shape[1] > 0


@pytest.mark.parametrize("text", ["Y", "Y^2", "0"])
def test_search_finds_polylog_antiderivatives(text):
    from dilogint.expr.parser import elaborate
    ty = Tower.rational("Y")
    ty, H = elaborate(text, ty)
    res = bounded_no_del_search(H, (2, 3))
    assert isinstance(res, CandidateDatum) and res.verdict
    target = as_log_integrand(H, res.tower)
    assert res.antiderivative.derive() == target


def test_search_needs_large_enough_bounds():
    y = Tower.rational("Y").gen("Y")
    with pytest.raises(ValueError):
        bounded_no_del_search(y ** 5, (2, 1))
