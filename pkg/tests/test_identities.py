import random

import pytest

from dilogint import DecompositionFailed, DomainError, Kind, Tower
from dilogint.algebra import RootProvider, UnsplittableError
from dilogint.identities import (RelationCandidate, NoRelationFound, check_S1_S2, decompose_pair,
                                 default_theta, invert_dilog, independence_probe, ratio_pairs,
                                 reduce_dilog, verify_log_identity)

from corpus import random_element, shape_corpus, theta_tower


@pytest.fixture(scope="module")
def th():
    return theta_tower()


def test_shape_theta_over_theta_minus_one(th):
    t, x, theta = th
    s = decompose_pair(theta / (theta - 1), theta=theta)
    assert s.eta == 1 and s.xi == -1
    assert [str(r) for r in s.roots] == ["0", "1"]
    assert s.a == (1, -1) and s.b == (0, -1)
    assert (s.m, s.n) == (1, 2) and s.is_consistent()


def test_shape_reciprocal(th):
    t, x, theta = th
    s = decompose_pair(1 / theta, theta=theta)
    assert s.xi == 1 and s.a == (-1, 0) and s.b == (-1, 1)


def test_shape_nonconstant_roots(th):
    t, x, theta = th
    s = decompose_pair((theta - x) / (theta - 2 * x), theta=theta)
    assert s.xi == -x and s.is_consistent()


def test_shape_needs_roots():
    t, x, theta = theta_tower()
    f = 1 / (theta ** 2 - 2)
    with pytest.raises(UnsplittableError):
        decompose_pair(f, theta=theta)


@pytest.mark.parametrize("value", [0, 1])
def test_shape_rejects_trivial(th, value):
    t, _, theta = th
    with pytest.raises(DecompositionFailed):
        decompose_pair(t.coerce(value), theta=theta)


@pytest.mark.parametrize("seed", range(4))
def test_identities_on_corpus(seed):
    t, x, theta, fs = shape_corpus(8, seed=100 + seed)
    rng = random.Random(seed)
    for f in fs:
        s = decompose_pair(f, theta=theta)
        vs = [random_element(rng, t, terms=2, depth=1) for _ in range(s.t)]
        assert verify_log_identity(s, vs, "i").residual == 0
        assert verify_log_identity(s, [x + k for k in range(s.t)], "ii").residual == 0


def test_identity_ii_constants(th):
    t, x, theta = th
    s = decompose_pair((theta - x) / (theta - 2 * x), theta=theta)
    cert = verify_log_identity(s, [t.one(), t.one()], "ii")
    assert cert.residual == 0 and set(cert.constants) == {("c", 1), ("c", 2)}


def test_s_checks_need_degree_condition(th):
    t, x, theta = th
    s = decompose_pair(theta * (theta - 3) / (theta - 4), theta=theta)
    with pytest.raises(DecompositionFailed):
        check_S1_S2(s)
    assert all(check_S1_S2(decompose_pair(1 / theta, theta=theta)))


@pytest.mark.parametrize("make", [lambda th: 1 / th, lambda th: th / (th - 1),
                                  lambda th: (th - 1) ** 2 / (th + 1) ** 2])
def test_reduce_dilog_certificates(th, make):
    t, x, theta = th
    _, dec, cert = reduce_dilog(make(theta), theta=theta)
    assert cert.holds
    labels = [label for _, label, _ in dec.terms]
    assert labels[0] in {"0", "dilog(eta)", "-log(xi)*log(eta)"}


def test_root_table_shape():
    from sympy import sqrt, QQ
    L = QQ.algebraic_field(sqrt(2))
    t = Tower.rational("x", domain=L)
    t, theta = t.extend(Kind.LOG, t.gen("x"))
    shape_poly = t.as_ratfunc(theta ** 2 - 2, theta.tower.index(t.monomials[-1])).num
    s2 = t.field.ground_new(L.from_sympy(sqrt(2)))
    provider = RootProvider([(shape_poly, [s2, -s2])])
    shape = decompose_pair(1 / (theta ** 2 - 2) + 1, provider, theta)
    assert shape.is_consistent() and shape.t == 4
    assert verify_log_identity(shape, [t.one()] * shape.t, "i").residual == 0


def test_default_theta():
    t = Tower.rational("x")
    x = t.gen("x")
    assert default_theta(t, 0, 1)[1] == x
    t2, th = default_theta(t, x, 2 * x)
    assert t2.monomials[-1].kind is Kind.LOG


@pytest.mark.parametrize("pair", [(0, 1), (2, -3), ("x", "2*x"), ("x", "x^2+1")])
def test_invert_dilog(pair):
    from dilogint.expr.parser import elaborate
    t = Tower.rational("x")
    t, a = elaborate(str(pair[0]), t)
    t, b = elaborate(str(pair[1]), t)
    _, identity, cert = invert_dilog(a, b)
    assert cert.holds


def test_invert_dilog_distinct():
    t = Tower.rational("x")
    with pytest.raises(DomainError):
        invert_dilog(t.coerce(1), t.coerce(1))


def test_ratio_pairs():
    assert ratio_pairs(3) == [(0, 1), (0, 2), (1, 2)]


def test_probe_two_alphas_is_vacuous():
    t = Tower.rational("x")
    res = independence_probe([t.coerce(0), t.coerce(1)], bounds=(1, 1))
    assert isinstance(res, NoRelationFound) and not res


def test_probe_small_bounds():
    t = Tower.rational("x")
    res = independence_probe([t.coerce(a) for a in (0, 1, 2)], bounds=(1, 1))
    assert isinstance(res, (NoRelationFound, RelationCandidate))
    if isinstance(res, RelationCandidate):
        assert res.certificate.holds
