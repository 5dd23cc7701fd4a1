import random

import pytest

from dilogint import InferenceFailed, Kind, StructuralError, Tower, TowerError
from dilogint.liouville import (DExpressionData, build_antiderivative, check_del_expression,
                                del_expression_value, infer_r_constants, infer_symmetric_constants,
                                ko_decompose, log_of)

from corpus import nonzero, rat


@pytest.fixture
def two_term():
    t = Tower.rational("z")
    z = t.gen("z")
    t, l1 = t.extend(Kind.LOG, 1 + z)
    z = t.coerce(z)
    t, l2 = t.extend(Kind.LOG, z * (1 - z) * (1 - z - z ** 2))
    z = t.coerce(z)
    g1, g2 = 1 - z - z ** 2, z
    r1, r2 = -t.coerce(l1), l2
    w = z ** 3 / (1 + z)
    return t, DExpressionData(dilog=[(r1, g1), (r2, g2)], w=w)


def test_r_constants_two_term(two_term):
    t, d = two_term
    (r1, g1), (_, g2) = d.dilog
    c, row = infer_r_constants(r1, [g1, g2])
    assert c == -1 and list(row) == [0, 1]


def test_symmetric_inference(two_term):
    _, d = two_term
    c, m = infer_symmetric_constants(d)
    assert list(c) == [-1, 1]
    assert [list(r) for r in m] == [[0, 1], [1, 1]]


def test_antiderivative_differentiates_back(two_term):
    _, d = two_term
    v = del_expression_value(d)
    t, u = build_antiderivative(d, v)
    assert u.derive() == t.coerce(v)
    assert check_del_expression(v, d)


def test_symmetry_under_permutation(two_term):
    _, d = two_term
    v = del_expression_value(d)
    swapped = DExpressionData(dilog=d.dilog[::-1], w=d.w)
    verdict = check_del_expression(v, swapped)
    assert verdict
    assert [list(r) for r in verdict.data.c_matrix] == [[1, 1], [1, 0]]


def test_wrong_constants_rejected_with_diagnostic(two_term):
    _, d = two_term
    v = del_expression_value(d)
    bad = d.with_constants([-1, 1], [[1, 1], [1, 1]])
    verdict = check_del_expression(v, bad)
    assert not verdict
    assert verdict.diagnostic.equation == "r_1'"


def test_wrong_integrand_rejected(two_term):
    t, d = two_term
    v = del_expression_value(d) + 1
    verdict = check_del_expression(v, d)
    assert not verdict and verdict.diagnostic.equation == "integrand"


def test_nonsymmetric_matrix_refused():
    t = Tower.rational("x")
    x = t.gen("x")
    with pytest.raises(StructuralError):
        DExpressionData(dilog=[(x, x), (x, x + 1)], c=[0, 0], c_matrix=[[0, 1], [2, 0]])


def test_not_in_span():
    t = Tower.rational("x")
    x = t.gen("x")
    t, lx = t.extend(Kind.LOG, x)
    with pytest.raises(InferenceFailed):
        infer_r_constants(lx ** 2, [t.coerce(x)])
    d = DExpressionData(dilog=[(t.coerce(x), t.coerce(x))])
    verdict = check_del_expression(del_expression_value(d), d)
    assert not verdict and verdict.diagnostic.equation == "r_1'"


@pytest.mark.parametrize("g", [0, 1])
def test_degenerate_g(g):
    t = Tower.rational("x")
    d = DExpressionData(dilog=[(t.gen("x"), t.coerce(g))])
    with pytest.raises(StructuralError):
        check_del_expression(t.zero(), d)


def test_li_requires_log_monomial():
    t = Tower.rational("x")
    d = DExpressionData(li=[(1, t.gen("x"))])
    with pytest.raises(TowerError):
        check_del_expression(t.zero(), d)


def test_li_and_erf_terms():
    t = Tower.rational("x")
    x = t.gen("x")
    t, _ = t.extend(Kind.LOG, x)
    t, _ = t.extend(Kind.EXP, -t.coerce(x) ** 2)
    x = t.coerce(x)
    d = DExpressionData(li=[(2, x)], erf=[(3, x)], w=x ** 2)
    v = del_expression_value(d)
    assert check_del_expression(v, d)
    tu, u = build_antiderivative(d, v)
    assert u.derive() == tu.coerce(v)


def test_exp_datum_converse():
    rng = random.Random(3)
    t = Tower.rational("x")
    x = t.gen("x")
    t, ex = t.extend(Kind.EXP, x)
    x = t.coerce(x)
    for _ in range(10):
        c, dd = nonzero(rng), rat(rng)
        d = DExpressionData(dilog=[(c * x + dd, 1 - ex)], w=x ** 2 * ex)
        v = del_expression_value(d)
        verdict = check_del_expression(v, d)
        assert verdict and verdict.data.c[0] == c
        tu, u = build_antiderivative(d, v)
        assert u.derive() == tu.coerce(v)


def test_log_of_exp_is_argument():
    t = Tower.rational("x")
    t, e = t.extend(Kind.EXP, t.gen("x"))
    t2, l = log_of(t, e)
    assert t2 is t and l == t.gen("x")


def test_ko_decompose():
    t = Tower.rational("x")
    x = t.gen("x")
    t, lx = t.extend(Kind.LOG, x)
    res = ko_decompose(3 * lx + t.coerce(x) ** 2)
    assert list(res.constants) == [3] and res.remainder == t.coerce(x) ** 2
    t, l1 = t.extend(Kind.LOG, 1 + t.coerce(x))
    with pytest.raises(InferenceFailed):
        ko_decompose(t.coerce(lx) * l1)
