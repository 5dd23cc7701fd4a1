"""Dilogarithmic-elementary integrability data.

A datum describes a candidate integrand

    v = sum r_i g_i'/g_i + sum a_j u_j'/log(u_j) + sum b_k v_k' exp(-v_k^2) + w'

together with constants ``c_i`` and a symmetric matrix ``c_il`` such that

    r_i' = c_i (1-g_i)'/(1-g_i) + sum_l c_il g_l'/g_l.

:func:`check_del_expression` verifies both conditions exactly,
:func:`build_antiderivative` produces the antiderivative in the extended
tower, and :func:`ko_decompose` splits an element linearly over the
primitive generators of a tower.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Sequence

from .errors import InferenceFailed, StructuralError, TowerError
from .solving import LinForm, reduce_logs, solve_constants
from .tower import Kind, Tower, TowerElem, common_tower


@dataclass(frozen=True)
class DExpressionData:
    """Dilog, li and erf terms plus remainder, with optional constants.

    ``c`` and ``c_matrix`` may be left as ``None``; the checker then infers
    them.  A supplied ``c_matrix`` must be symmetric.
    """

    dilog: tuple = ()            # ((r_i, g_i), ...)
    li: tuple = ()               # ((a_j, u_j), ...)
    erf: tuple = ()              # ((b_k, v_k), ...)
    w: TowerElem | None = None
    c: tuple | None = None
    c_matrix: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "dilog", tuple(tuple(p) for p in self.dilog))
        object.__setattr__(self, "li", tuple(tuple(p) for p in self.li))
        object.__setattr__(self, "erf", tuple(tuple(p) for p in self.erf))
        if self.c is not None:
            object.__setattr__(self, "c", tuple(self.c))
        if self.c_matrix is not None:
            m = tuple(tuple(row) for row in self.c_matrix)
            n = len(self.dilog)
            if len(m) != n or any(len(row) != n for row in m):
                raise StructuralError(f"c-matrix must be {n}x{n}")
            for i, l in product(range(n), repeat=2):
                if m[i][l] != m[l][i]:
                    raise StructuralError(f"c-matrix is not symmetric at ({i + 1},{l + 1})")
            object.__setattr__(self, "c_matrix", m)
        if self.c is not None and len(self.c) != len(self.dilog):
            raise StructuralError("one c_i is needed per dilog term")

    @property
    def size(self) -> int:
        return len(self.dilog)

    def elements(self) -> list:
        out = [x for pair in self.dilog + self.li + self.erf for x in pair]
        if self.w is not None:
            out.append(self.w)
        for x in (self.c or ()):
            out.append(x)
        for row in (self.c_matrix or ()):
            out.extend(row)
        return [x for x in out if isinstance(x, TowerElem)]

    def tower(self, *extra) -> Tower:
        return common_tower(*self.elements(), *extra)

    def with_constants(self, c, c_matrix) -> "DExpressionData":
        return replace(self, c=tuple(c), c_matrix=tuple(tuple(r) for r in c_matrix))


@dataclass(frozen=True)
class Diagnostic:
    """The first equation that failed, both sides printed canonically."""

    equation: str
    lhs: str
    rhs: str
    reason: str = ""

    def __str__(self):
        text = f"{self.equation}: {self.lhs} != {self.rhs}"
        return f"{text} ({self.reason})" if self.reason else text


@dataclass(frozen=True)
class Verdict:
    """Accept or reject; rejection carries a :class:`Diagnostic`."""

    accepted: bool
    diagnostic: Diagnostic | None = None
    data: DExpressionData | None = None

    def __bool__(self):
        return self.accepted


@dataclass(frozen=True)
class KOResult:
    """``y = sum(c_i * theta_i) + eta`` with constant ``c_i`` and ``eta`` in the base."""

    generators: tuple
    constants: tuple
    remainder: TowerElem


# -- checking ----------------------------------------------------------------

def _require_constant(x, what: str) -> None:
    if isinstance(x, TowerElem) and x.derive():
        raise StructuralError(f"{what} must be a constant, got {x}")


def _check_structure(d: DExpressionData, t: Tower) -> None:
    for i, (_, g) in enumerate(d.dilog, 1):
        g = t.coerce(g)
        if g == 0 or g == 1:
            raise StructuralError(f"dilog term {i}: g must not be 0 or 1")
    for j, (a, u) in enumerate(d.li, 1):
        _require_constant(a, f"li coefficient a_{j}")
        if t.find(Kind.LOG, t.coerce(u)) is None and t.exp_argument(u) is None:
            raise TowerError(f"li term {j}: log({t.coerce(u)}) is not a monomial of the tower")
    for k, (b, v) in enumerate(d.erf, 1):
        _require_constant(b, f"erf coefficient b_{k}")
        if t.find(Kind.EXP, -t.coerce(v) ** 2) is None:
            raise TowerError(f"erf term {k}: exp({-t.coerce(v) ** 2}) is not a monomial of the tower")
    for x in d.c or ():
        _require_constant(x, "c_i")
    for row in d.c_matrix or ():
        for x in row:
            _require_constant(x, "c_il")


def del_expression_value(d: DExpressionData, t: Tower | None = None) -> TowerElem:
    """The right-hand side ``sum r g'/g + sum a u'/log u + sum b v' e^{-v^2} + w'``."""
    t = t or d.tower()
    acc = t.zero()
    for r, g in d.dilog:
        acc = acc + t.coerce(r) * t.log_derivative(g)
    for a, u in d.li:
        u = t.coerce(u)
        log_u = t.exp_argument(u)
        if log_u is None:
            log_u = t.gen(t.find(Kind.LOG, u))
        acc = acc + t.coerce(a) * u.derive() / log_u
    for b, v in d.erf:
        v = t.coerce(v)
        acc = acc + t.coerce(b) * v.derive() * t.gen(t.find(Kind.EXP, -v ** 2))
    if d.w is not None:
        acc = acc + t.coerce(d.w).derive()
    return acc


def _equal_modulo_logs(t: Tower, a: TowerElem, b: TowerElem) -> bool:
    if a == b:
        return True
    _, (diff,) = reduce_logs(t, [a - b])
    return not diff


def check_del_expression(v: TowerElem, d: DExpressionData) -> Verdict:
    """Decide whether ``d`` is a valid dilogarithmic-elementary datum for ``v``.

    Missing constants are inferred jointly with a symmetric matrix.  The
    verdict's ``data`` holds the datum with the constants used.
    """
    t = d.tower(v)
    _check_structure(d, t)
    v = t.coerce(v)
    for i, (r, g) in enumerate(d.dilog, 1):
        if not t.coerce(g).derive():
            return Verdict(False, Diagnostic(f"dilog term {i}", "g'", "0",
                                             "g is constant, so the term is degenerate"))
    rhs = del_expression_value(d, t)
    if not _equal_modulo_logs(t, v, rhs):
        return Verdict(False, Diagnostic("integrand", str(v), str(rhs),
                                         "v differs from the expression built from the datum"))
    if d.c is None or d.c_matrix is None:
        try:
            c, m = infer_symmetric_constants(d)
        except InferenceFailed as exc:
            i = getattr(exc, "index", None)
            lhs = str(t.coerce(d.dilog[i][0]).derive()) if i is not None else "r'"
            return Verdict(False, Diagnostic(f"r_{i + 1}'" if i is not None else "r equations", lhs,
                                             "c (1-g)'/(1-g) + sum c_l g_l'/g_l", str(exc)))
        d = d.with_constants(c, m)
        t = d.tower(v)
    gs = [t.coerce(g) for _, g in d.dilog]
    for i, (r, g) in enumerate(d.dilog):
        lhs = t.coerce(r).derive()
        rhs_i = _r_equation_rhs(t, gs[i], gs, d.c[i], d.c_matrix[i])
        if not _equal_modulo_logs(t, lhs, rhs_i):
            return Verdict(False, Diagnostic(f"r_{i + 1}'", str(lhs), str(rhs_i)), d)
    return Verdict(True, None, d)


def _r_equation_rhs(t: Tower, g, gs, c, row) -> TowerElem:
    acc = t.coerce(c) * t.log_derivative(1 - g)
    for c_l, g_l in zip(row, gs):
        acc = acc + t.coerce(c_l) * t.log_derivative(g_l)
    return acc


# -- constant inference ------------------------------------------------------

def _r_form(t: Tower, r, g, gs, c_name, row_names) -> LinForm:
    form = LinForm.known(t.coerce(r).derive())
    form = form - LinForm.unknown(c_name, t.log_derivative(1 - t.coerce(g)))
    for name, g_l in zip(row_names, gs):
        form = form - LinForm.unknown(name, t.log_derivative(g_l))
    return form


def infer_r_constants(r: TowerElem, g_list: Sequence[TowerElem], g: TowerElem | None = None):
    """Constants ``c, (c_1..c_n)`` with ``r' = c (1-g)'/(1-g) + sum c_l g_l'/g_l``.

    ``g`` defaults to the first entry of ``g_list`` (the term that ``r``
    multiplies).  Raises :class:`InferenceFailed` when ``r'`` is outside the
    span.
    """
    g_list = list(g_list)
    if not g_list and g is None:
        raise StructuralError("at least one g is required")
    g = g_list[0] if g is None else g
    t = common_tower(*[x for x in (r, g, *g_list) if isinstance(x, TowerElem)])
    gs = [t.coerce(x) for x in g_list]
    names = [("c_l", l) for l in range(len(gs))]
    sol = solve_constants(_r_form(t, r, g, gs, "c", names), ["c", *names], t, reduce=True)
    if not sol.consistent:
        raise InferenceFailed("r' is not in the span of (1-g)'/(1-g) and the g_l'/g_l")
    return sol.values["c"], tuple(sol.values[n] for n in names)


def infer_symmetric_constants(d: DExpressionData):
    """Joint inference of ``c_i`` and a symmetric ``c_il`` for every dilog term."""
    n = d.size
    if n == 0:
        return (), ()
    t = d.tower()
    gs = [t.coerce(g) for _, g in d.dilog]

    def sym(i, l):
        return ("c", min(i, l), max(i, l))

    forms = [
        _r_form(t, r, gs[i], gs, ("c", i), [sym(i, l) for l in range(n)])
        for i, (r, _) in enumerate(d.dilog)
    ]
    unknowns = [("c", i) for i in range(n)] + [sym(i, l) for i in range(n) for l in range(i, n)]
    sol = solve_constants(forms, unknowns, t, reduce=True)
    if not sol.consistent:
        for i, form in enumerate(forms):
            if not solve_constants(form, None, t, reduce=True).consistent:
                exc = InferenceFailed(f"r_{i + 1}' is not in the span of the log-derivatives")
                exc.index = i
                raise exc
        raise InferenceFailed("no symmetric choice of c_il satisfies all r equations")
    c = tuple(sol.values[("c", i)] for i in range(n))
    m = tuple(tuple(sol.values[sym(i, l)] for l in range(n)) for i in range(n))
    return c, m


# -- antiderivative ----------------------------------------------------------

def build_antiderivative(d: DExpressionData, v: TowerElem | None = None) -> tuple[Tower, TowerElem]:
    """Antiderivative of the integrand described by ``d``.

    Builds ``-sum c_i dilog(g_i) + 1/2 sum c_il log g_i log g_l + sum e_i log g_i
    + sum a_j li(u_j) + sum b_k erf(v_k) + w`` where ``e_i`` is the constant
    ``r_i - c_i log(1-g_i) - sum_l c_il log g_l``.  Constants are inferred
    when the datum omits them.
    """
    if d.c is None or d.c_matrix is None:
        c, m = infer_symmetric_constants(d)
        d = d.with_constants(c, m)
    t = d.tower(*([v] if v is not None else []))
    _check_structure(d, t)
    n = d.size
    logs, one_minus = [], []
    for _, g in d.dilog:
        t, lg = log_of(t, t.coerce(g))
        t, l1 = log_of(t, 1 - t.coerce(g))
        logs.append(lg)
        one_minus.append(l1)
    u = t.zero()
    for i, (r, g) in enumerate(d.dilog):
        t, dl = t.extend(Kind.DILOG, t.coerce(g))
        ci, row = t.coerce(d.c[i]), d.c_matrix[i]
        e_i = t.coerce(r) - ci * one_minus[i]
        for l in range(n):
            e_i = e_i - t.coerce(row[l]) * logs[l]
        if e_i.derive():
            raise InferenceFailed(f"e_{i + 1} = {e_i} is not constant; the r_{i + 1} equation fails")
        u = t.coerce(u) - ci * dl + e_i * logs[i]
        for l in range(n):
            u = u + t.coerce(row[l]) * logs[i] * logs[l] / 2
    for a, x in d.li:
        t, g = t.extend(Kind.LI, t.coerce(x))
        u = t.coerce(u) + t.coerce(a) * g
    for b, x in d.erf:
        t, g = t.extend(Kind.ERF, t.coerce(x))
        u = t.coerce(u) + t.coerce(b) * g
    if d.w is not None:
        u = t.coerce(u) + t.coerce(d.w)
    return t, t.coerce(u)


def log_of(t: Tower, h: TowerElem) -> tuple[Tower, TowerElem]:
    """A logarithm of ``h``: the argument itself when ``h = exp(a)``, else a log monomial."""
    h = t.coerce(h)
    for i, m in enumerate(t.monomials):
        if m.kind is Kind.EXP and h.value == t.gens[i]:
            return t, t.arg(i)
    return t.extend(Kind.LOG, h)


# -- Kolchin-Ostrowski -------------------------------------------------------

def primitive_suffix(t: Tower) -> int:
    """Start of the longest suffix of generators whose derivatives lie below that suffix."""
    start = len(t.monomials)
    for i in range(len(t.monomials) - 1, -1, -1):
        m = t.monomials[i]
        if m.constant or m.kind in (Kind.INDETERMINATE, Kind.CONSTANT):
            break
        candidate = i
        if all(max(t.involved(t.derivative_of(j).value), default=-1) < candidate
               for j in range(candidate, len(t.monomials)) if not t.monomials[j].constant):
            start = candidate
        else:
            break
    return start


def ko_decompose(y: TowerElem, t: Tower | None = None, over: int | None = None) -> KOResult:
    """Linear split of ``y`` over generators ``t.monomials[over:]``.

    The default ``over`` is :func:`primitive_suffix`.  Each generator in the
    split must have its derivative in the base ``t.monomials[:over]``.
    """
    t = t or y.tower
    y = t.coerce(y)
    start = primitive_suffix(t) if over is None else over
    top = range(start, len(t.monomials))
    for j in top:
        m = t.monomials[j]
        if m.constant:
            raise StructuralError(f"{m} is constant and cannot be split over")
        if max(t.involved(t.derivative_of(j).value), default=-1) >= start:
            raise StructuralError(f"derivative of {m} is not in the base field")
    num, den = y.value.numer, y.value.denom
    if any(e for monom in den.monoms() for j, e in enumerate(monom) if j >= start):
        raise InferenceFailed(f"{y} has a denominator involving a top generator")
    coeffs = {j: t.field.ring.zero for j in top}
    rest = t.field.ring.zero
    for monom, c in num.terms():
        hi = [(j, e) for j, e in enumerate(monom) if e and j >= start]
        if not hi:
            rest += t.field.ring({monom: c})
            continue
        if len(hi) > 1 or hi[0][1] != 1:
            raise InferenceFailed(f"{y} is not linear in the top generators")
        j = hi[0][0]
        low = list(monom)
        low[j] = 0
        coeffs[j] += t.field.ring({tuple(low): c})
    constants = []
    for j in top:
        c = TowerElem(t, t.field(coeffs[j]) / t.field(den))
        if c.derive():
            raise InferenceFailed(f"coefficient {c} of {t.monomials[j]} is not constant")
        constants.append(c)
    eta = TowerElem(t, t.field(rest) / t.field(den))
    return KOResult(tuple(t.monomials[j] for j in top), tuple(constants), eta)
