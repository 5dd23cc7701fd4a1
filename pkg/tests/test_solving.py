from fractions import Fraction

from hypothesis import given, settings, strategies as st

from dilogint import Kind, Tower
from dilogint.linsolve import LinearSystem
from dilogint.solving import LinForm, linear_system, reduce_logs, solve_constants


def log_tower():
    t = Tower.rational("x")
    x = t.gen("x")
    t, lx = t.extend(Kind.LOG, x)
    return t, t.coerce(x), lx


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(-5, 5, max_denominator=3), min_size=3, max_size=3))
def test_recovers_constants(cs):
    t, x, lx = log_tower()
    basis = [x, lx, x * lx]
    target = sum((c * b for c, b in zip(cs, basis)), t.zero())
    form = LinForm.known(target)
    for n, b in enumerate(basis):
        form = form - LinForm.unknown(n, b)
    sol = solve_constants(form, range(3))
    assert sol.consistent
    assert [sol.values[n] for n in range(3)] == cs
    assert all(r == 0 for r in sol.residuals())


def test_inconsistency_replays():
    t, x, lx = log_tower()
    form = LinForm.known(lx) - LinForm.unknown("c", x)
    sol = solve_constants(form, ["c"])
    assert not sol.consistent
    row, rhs = sol.system.replay(sol.result.witness)
    assert not row and rhs


def test_symbolic_constants():
    t = Tower.rational("x", constants=["a"])
    a, x = t.gen("a"), t.gen("x")
    form = LinForm.known((a + 1) * x) - LinForm.unknown("c", x)
    sol = solve_constants(form, ["c"])
    assert sol.symbolic and sol.values["c"] == a + 1


def test_joint_forms():
    t, x, lx = log_tower()
    f1 = LinForm.known(2 * x) - LinForm.unknown("c", x)
    f2 = LinForm.known(3 * lx) - LinForm.unknown("c", lx) - LinForm.unknown("d", lx)
    sol = solve_constants([f1, f2], ["c", "d"])
    assert sol.values == {"c": 2, "d": 1}


def test_linear_system_shape():
    t, x, lx = log_tower()
    form = LinForm.known(x + lx) - LinForm.unknown("c", x)
    system, symbolic = linear_system(form, ["c"], t)
    assert not symbolic and system.shape == (2, 1)


def test_reciprocal_logs_cancel():
    t = Tower.rational("x")
    x = t.gen("x")
    t, l1 = t.extend(Kind.LOG, 1 / x)
    t, l2 = t.extend(Kind.LOG, t.coerce(x))
    _, (r,) = reduce_logs(t, [l1 + l2])
    assert r == 0


def test_power_log_is_a_multiple():
    t = Tower.rational("x")
    x = t.gen("x")
    t, l1 = t.extend(Kind.LOG, x)
    t, l2 = t.extend(Kind.LOG, t.coerce(x) ** 2)
    t2, (r,) = reduce_logs(t, [l2 - 2 * l1])
    assert r == 0


def test_reduce_logs_constants():
    t = Tower.rational("x")
    x = t.gen("x")
    t, a = t.extend(Kind.LOG, t.coerce(6))
    t, b = t.extend(Kind.LOG, t.coerce(2))
    t, c = t.extend(Kind.LOG, t.coerce(3))
    t, lx = t.extend(Kind.LOG, t.coerce(x))
    t, lmx = t.extend(Kind.LOG, -t.coerce(x))
    t2, (r1, r2) = reduce_logs(t, [a - b - c, lx - lmx])
    assert r1 == 0
    log_m1 = t2.gen(t2.find(Kind.LOG, -1))
    assert r2 == -log_m1


def test_reduce_logs_of_exp():
    t = Tower.rational("x")
    x = t.gen("x")
    t, e = t.extend(Kind.EXP, x)
    t, l = t.extend(Kind.LOG, e * t.coerce(x))
    t2, (r,) = reduce_logs(t, [l])
    lx = t2.gen(t2.find(Kind.LOG, x))
    assert r == t2.coerce(x) + lx


def test_system_check_and_replay():
    s = LinearSystem(unknowns=["a", "b"])
    s.add({"a": Fraction(1), "b": Fraction(1)}, Fraction(2))
    s.add({"a": Fraction(1), "b": Fraction(-1)}, Fraction(0))
    res = s.solve()
    assert res.consistent and s.check(res.values)
    assert res.values == {"a": 1, "b": 1}
