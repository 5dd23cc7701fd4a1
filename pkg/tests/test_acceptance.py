"""Acceptance suite: one test per criterion, all checks exact."""

import random
from fractions import Fraction
from pathlib import Path

from dilogint import Kind, Tower
from dilogint.expr.datum import load_datum
from dilogint.expr.parser import elaborate
from dilogint.identities import (NoRelationFound, check_S1_S2, decompose_pair, invert_dilog,
                                 independence_probe, reduce_dilog, verify_log_identity)
from dilogint.liouville import (build_antiderivative, check_del_expression, del_expression_value,
                                infer_r_constants)
from dilogint.obstruction import (CandidateDatum, InconsistencyCertificate, bounded_no_del_search,
                                  derivative_pole_growth, log_tower)

from corpus import distinct, mixed_tower, nonzero, rat, random_element, shape_corpus

FIXTURES = Path(__file__).parent / "fixtures"

TARGET = ("-(1-z-z^2)^(-1)*(-1-2*z)*log(1+z) + log(z*(1-z)*(1-z-z^2))/z"
            " + (2*z^3+3*z^2)/(1+z)^2")


def test_criterion_01_two_term_datum_round_trip():
    for name in ("two_term.datum", "two_term_inferred.datum"):
        t, d = load_datum((FIXTURES / name).read_text())
        t, v = elaborate(TARGET, t)
        verdict = check_del_expression(v, d)
        assert verdict, verdict.diagnostic
        assert list(verdict.data.c) == [-1, 1]
        assert [list(r) for r in verdict.data.c_matrix] == [[0, 1], [1, 1]]
        tu, u = build_antiderivative(verdict.data, v)
        assert u.derive() == tu.coerce(v)


def _w_in_x_ex(rng, t, x, ex):
    def poly():
        return sum((rat(rng) * x ** i * ex ** j for i in range(4) for j in range(4 - i)
                    if rng.random() < 0.3), t.coerce(rat(rng)))
    den = poly()
    while not den:
        den = poly()
    return poly() / den


def test_criterion_02_exp_dilog_both_directions():
    rng = random.Random(32)
    base = Tower.rational("x")
    x0 = base.gen("x")
    t, ex = base.extend(Kind.EXP, x0)
    t, l2 = t.extend(Kind.DILOG, ex)
    x, ex = t.coerce(x0), t.coerce(ex)
    log1 = t.gen(t.find(Kind.LOG, 1 - ex))
    for _ in range(50):
        c, dd = nonzero(rng), rat(rng)
        r = c * x + dd
        w = _w_in_x_ex(rng, t, x, ex)
        u = c * l2 + w + r * log1
        assert u.derive() == r * (1 - ex).derive() / (1 - ex) + w.derive()
        # the datum pairs r with g = 1 - e^x, so (1-g)'/(1-g) = 1 carries c
        found, row = infer_r_constants(r, [1 - ex])
        assert found == c and list(row) == [0]


def test_criterion_03_log_identity_i():
    t, x, theta, fs = shape_corpus(100, seed=3)
    rng = random.Random(3)
    for f in fs:
        shape = decompose_pair(f, theta=theta)
        assert shape.is_consistent()
        vs = [random_element(rng, t) for _ in range(shape.t)]
        cert = verify_log_identity(shape, vs, "i")
        assert cert.residual == 0
    shape = decompose_pair((theta - x) / (theta - 2 * x), theta=theta)
    assert {str(r) for r in shape.roots} == {"x", "2*x"}
    cert = verify_log_identity(shape, [x, x ** 2 + 1], "i")
    assert cert.residual == 0


def test_criterion_04_S1_S2_constant():
    t, x, theta, fs = shape_corpus(100, seed=3)
    checked = 0
    for f in fs + [(theta - x) / (theta - 2 * x)]:
        shape = decompose_pair(f, theta=theta)
        if shape.degree_condition():
            s = check_S1_S2(shape)
            assert s.s1_constant and s.s2_constant, f
            checked += 1
    assert checked >= 50


def test_criterion_05_reduce_dilog():
    t, x, theta, fs = shape_corpus(120, seed=5)
    admissible = [f for f in fs if decompose_pair(f, theta=theta).degree_condition()][:48]
    admissible += [1 / theta, theta / (theta - 1)]
    assert len(admissible) == 50
    for f in admissible:
        _, dec, cert = reduce_dilog(f, theta=theta)
        assert cert.residual == 0 and cert.holds, f


def test_criterion_06_invert_dilog():
    rng = random.Random(6)
    t = Tower.rational("x")
    x = t.gen("x")
    pairs = [tuple(t.coerce(q) for q in distinct(rng, 2)) for _ in range(10)]
    for _ in range(10):
        a, b = distinct(rng, 2)
        pairs.append((a * x + rat(rng), b * x ** 2 + rat(rng)))
    pairs[-1] = (x, 2 * x)
    for aj, ak in pairs:
        _, identity, cert = invert_dilog(aj, ak)
        assert cert.residual == 0 and cert.holds
        assert identity.derive() == 0 or cert.replay() == 0


def _constant_pole_element(rng, t, x, lam):
    z = sum((rat(rng) * x ** rng.randint(0, 2) * lam ** p for p in range(rng.randint(0, 2))),
            t.zero())
    for beta in distinct(rng, rng.randint(1, 3)):
        order = rng.randint(1, 3)
        for q in range(1, order + 1):
            coeff = nonzero(rng) * x ** rng.randint(-1, 2) if q == order else rat(rng)
            z = z + coeff / (lam - beta) ** q
    return z


def test_criterion_07_pole_growth():
    rng = random.Random(7)
    t, x, lam = log_tower()
    for _ in range(200):
        z = _constant_pole_element(rng, t, x, lam)
        report = derivative_pole_growth(z)
        assert report.orders_increment and report.no_simple_poles, z


def test_criterion_08_obstruction():
    ty = Tower.rational("Y")
    y = ty.gen("Y")
    res = bounded_no_del_search(1 / y, (2, 3))
    assert isinstance(res, InconsistencyCertificate)
    assert res.replays()
    row, rhs = res.replay()
    assert not row and rhs != 0
    res = bounded_no_del_search(y, (2, 3))
    assert isinstance(res, CandidateDatum)
    assert res.verdict
    lx = res.tower.gen(res.tower.find(Kind.LOG, res.tower.gen("x")))
    assert res.antiderivative.derive() == lx


def test_criterion_09_derivation_laws():
    rng = random.Random(9)
    t = mixed_tower()
    c = t.gen("c")
    for _ in range(500):
        a, b = random_element(rng, t), random_element(rng, t)
        p, q = rat(rng), rat(rng)
        assert (a * b).derive() == a.derive() * b + a * b.derive()
        assert (p * a + q * b).derive() == p * a.derive() + q * b.derive()
        assert (c * a).derive() == c * a.derive() and t.coerce(p).derive() == 0


def test_criterion_10_independence_probe():
    t = Tower.rational("x")
    alphas = [t.coerce(a) for a in (0, 1, 2)]
    res = independence_probe(alphas, bounds=(2, 2))
    assert isinstance(res, NoRelationFound)
    assert res.unknowns > 0 and res.equations > 0
