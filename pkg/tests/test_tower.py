import random

import pytest
from hypothesis import given, settings, strategies as st

from dilogint import Kind, Tower, TowerError
from dilogint.tower import common_tower

from corpus import mixed_tower, random_element, rat

T = mixed_tower()
seeds = st.integers(min_value=0, max_value=10**9)


def pair(seed):
    rng = random.Random(seed)
    return rng, random_element(rng, T), random_element(rng, T)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_leibniz(seed):
    _, a, b = pair(seed)
    assert (a * b).derive() == a.derive() * b + a * b.derive()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_linearity(seed):
    rng, a, b = pair(seed)
    p, q = rat(rng), rat(rng)
    assert (p * a + q * b).derive() == p * a.derive() + q * b.derive()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_constants_are_killed(seed):
    _, a, _ = pair(seed)
    c = T.gen("c")
    assert c.derive() == 0
    assert (c * a).derive() == c * a.derive()


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_quotient_rule(seed):
    _, a, b = pair(seed)
    if b:
        assert (a / b).derive() == (a.derive() * b - a * b.derive()) / b ** 2


def test_monomial_derivatives():
    t = Tower.rational("x")
    x = t.gen("x")
    t, e = t.extend(Kind.EXP, x ** 2)
    assert e.derive() == 2 * t.coerce(x) * e
    t, l = t.extend(Kind.LOG, t.coerce(x) + 1)
    assert l.derive() == 1 / (t.coerce(x) + 1)
    t, d = t.extend(Kind.DILOG, t.coerce(x))
    log1 = t.gen(t.find(Kind.LOG, (1 - t.coerce(x)).value))
    assert d.derive() == -log1 / t.coerce(x)


def test_prerequisites_are_inserted():
    t = Tower.rational("x")
    x = t.gen("x")
    t, li = t.extend(Kind.LI, x)
    lx = t.find(Kind.LOG, x.lift(t).value)
    assert lx is not None
    assert li.derive() == 1 / t.gen(lx)
    t, erf = t.extend(Kind.ERF, t.coerce(x))
    ex = t.find(Kind.EXP, (-t.coerce(x) ** 2).value)
    assert ex is not None
    assert erf.derive() == t.gen(ex)


def test_extend_is_idempotent():
    t = Tower.rational("x")
    t1, a = t.extend(Kind.LOG, t.gen("x"))
    t2, b = t1.extend(Kind.LOG, t1.gen("x"))
    assert t2 is t1 and a == b


def test_constant_argument_gives_constant():
    t = Tower.rational("x", constants=["c"])
    t, e = t.extend(Kind.EXP, t.gen("c"))
    assert e.is_constant() and e.derive() == 0


@pytest.mark.parametrize("kind,arg", [(Kind.LOG, 0), (Kind.DILOG, 0), (Kind.DILOG, 1), (Kind.LI, 0)])
def test_bad_arguments(kind, arg):
    with pytest.raises(TowerError):
        Tower.rational("x").extend(kind, arg)


def test_common_tower_merges_prefixes():
    t = Tower.rational("x")
    t1, a = t.extend(Kind.LOG, t.gen("x"))
    t2, b = t1.extend(Kind.EXP, t1.gen("x"))
    u = common_tower(a, b)
    assert u.extends(t1) and (u.coerce(a) + u.coerce(b)).derive() == a.derive().lift(u) + b.derive()
