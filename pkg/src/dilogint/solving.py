"""Unknown-constant solving and logarithm relations inside a tower.

``LinForm`` is ``known + sum(u * coeff_u)`` with ``u`` ranging over named
unknown constants.  Setting it to zero and comparing coefficients of the
non-constant monomials yields a linear system over the constant field.

Structurally distinct log monomials can be dependent (``log(-x)`` versus
``log(x)``); :func:`reduce_logs` rewrites every log monomial over a basis of
logs of irreducible factors, so identities that only hold modulo those
relations can be checked exactly.  Branch constants such as ``log(-1)`` are
kept as constant monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Hashable, Iterable

from sympy import QQ, factorint

from .errors import StructuralError
from .linsolve import Inconsistency, LinearSystem, Solution
from .tower import Kind, Tower, TowerElem, common_tower


class LinForm:
    """Immutable linear combination of tower elements with unknown constant coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict = {}
        for k, v in (terms or {}).items():
            if v:
                self.terms[k] = v

    @classmethod
    def known(cls, v: TowerElem) -> "LinForm":
        return cls({None: v})

    @classmethod
    def unknown(cls, name: Hashable, coeff: TowerElem) -> "LinForm":
        return cls({name: coeff})

    @property
    def tower(self) -> Tower:
        return common_tower(*self.terms.values()) if self.terms else None

    def unknowns(self) -> list:
        return [k for k in self.terms if k is not None]

    def __add__(self, other):
        if not isinstance(other, LinForm):
            other = LinForm.known(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return LinForm(out)

    def __neg__(self):
        return LinForm({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LinForm):
            other = LinForm.known(other)
        return self + (-other)

    def scale(self, c) -> "LinForm":
        return LinForm({k: v * c for k, v in self.terms.items()})

    def derive(self) -> "LinForm":
        """Derivative; unknowns are constants."""
        return LinForm({k: v.derive() for k, v in self.terms.items()})

    def lift(self, tower: Tower) -> "LinForm":
        return LinForm({k: tower.coerce(v) for k, v in self.terms.items()})

    def substitute(self, values: dict) -> TowerElem:
        t = self.tower
        acc = t.zero()
        for k, v in self.terms.items():
            acc = acc + (v if k is None else v * t.coerce(values.get(k, 0)))
        return acc

    def __repr__(self):
        return " + ".join(f"{k or 1}*({v})" for k, v in self.terms.items()) or "0"


def linear_system(form: LinForm, unknowns: Iterable | None = None, tower: Tower | None = None):
    """Coefficient system for ``form == 0``.

    Returns ``(system, symbolic)``; entries are ground-domain numbers when no
    constant monomial occurs, otherwise constant-field elements.
    """
    t = tower or form.tower
    unknowns = list(unknowns) if unknowns is not None else form.unknowns()
    system = LinearSystem(unknowns=unknowns)
    if t is None or not form.terms:
        return system, False
    comps = {k: t.coerce(v).value for k, v in form.terms.items()}
    den = None
    for val in comps.values():
        den = val.denom if den is None else den.lcm(val.denom)
    mask = [m.constant for m in t.monomials]
    expanded = {}
    symbolic = False
    for k, val in comps.items():
        num = val.numer * den.exquo(val.denom)
        terms = num.terms()
        expanded[k] = terms
        if not symbolic:
            symbolic = any(e and mask[i] for monom, _ in terms for i, e in enumerate(monom))
    rows: dict = {}
    rhs: dict = {}
    ring = t.field.ring
    for k, terms in expanded.items():
        for monom, coeff in terms:
            key = tuple(0 if mask[i] else e for i, e in enumerate(monom))
            if symbolic:
                cpart = tuple(e if mask[i] else 0 for i, e in enumerate(monom))
                c = t.field(ring({cpart: coeff}))
            else:
                c = coeff
            if k is None:
                rhs[key] = rhs[key] - c if key in rhs else -c
            else:
                row = rows.setdefault(key, {})
                row[k] = row[k] + c if k in row else c
    zero = t.field.zero if symbolic else t.domain.zero
    for key in sorted(set(rows) | set(rhs)):
        system.add(rows.get(key, {}), rhs.get(key, zero), label=key)
    return system, symbolic


@dataclass
class ConstantSolve:
    """Outcome of solving ``form == 0`` (for every form) in the unknown constants."""

    tower: Tower
    forms: list
    system: LinearSystem
    result: Solution | Inconsistency
    symbolic: bool
    values: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.result.consistent

    def residuals(self) -> list[TowerElem]:
        return [f.lift(self.tower).substitute(self.values) if f.terms else self.tower.zero()
                for f in self.forms]


def solve_constants(forms, unknowns: Iterable | None = None, tower: Tower | None = None,
                    *, reduce: bool = False, track: bool = True) -> ConstantSolve:
    """Solve ``forms == 0`` jointly for the unknown constants.

    With ``reduce`` the components are first rewritten over a log basis, so
    relations such as ``log(x^2) = 2*log(x)`` are taken into account.
    """
    if isinstance(forms, LinForm):
        forms = [forms]
    forms = list(forms)
    towers = [f.tower for f in forms if f.terms]
    if tower is not None:
        towers.append(tower)
    if not towers:
        raise StructuralError("cannot solve empty forms without a tower")
    t = common_tower(*[x.one() for x in towers])
    forms = [f.lift(t) for f in forms]
    if unknowns is None:
        unknowns = list(dict.fromkeys(u for f in forms for u in f.unknowns()))
    else:
        unknowns = list(unknowns)
    work = forms
    if reduce:
        keys = [(n, k) for n, f in enumerate(forms) for k in f.terms]
        t, reduced = reduce_logs(t, [forms[n].terms[k] for n, k in keys])
        rebuilt = [dict() for _ in forms]
        for (n, k), v in zip(keys, reduced):
            rebuilt[n][k] = v
        work = [LinForm(d) for d in rebuilt]
    parts = [linear_system(f, unknowns, t) for f in work]
    symbolic = any(sym for _, sym in parts)
    system = LinearSystem(unknowns=unknowns)
    for n, (sub, sym) in enumerate(parts):
        for row, rhs, label in zip(sub.rows, sub.rhs, sub.labels):
            if symbolic and not sym:
                row = {u: t.field.ground_new(c) for u, c in row.items()}
                rhs = t.field.ground_new(rhs)
            system.add(row, rhs, label=(n, label))
    zero = t.field.zero if symbolic else t.domain.zero
    result = system.solve(zero=zero, track=track)
    values = {}
    if result.consistent:
        for u in unknowns:
            v = result.values.get(u, zero)
            values[u] = t.coerce(v if symbolic else t.field.ground_new(v))
    return ConstantSolve(t, forms, system, result, symbolic, values)


# -- logarithm relations -----------------------------------------------------

class _LogBasis:
    """Per-tower table of representative log monomials keyed by monic irreducibles."""

    def __init__(self, tower: Tower):
        self.tower = tower
        self.reps: dict = {}          # monic irreducible -> (generator index, constant ratio)
        for i, m in enumerate(tower.monomials):
            if m.kind is not Kind.LOG or m.constant:
                continue
            unit, consts, parts = _factor(tower, tower.arg(i).value)
            if len(parts) == 1 and parts[0][1] == 1:
                ratio = tower.field.ground_new(unit) * _product(tower, consts)
                old = self.reps.get(parts[0][0])
                if old is None or (old[1] != 1 and ratio == 1):
                    self.reps[parts[0][0]] = (i, ratio)


def _factor(t: Tower, value):
    """Split ``value`` as ``unit * prod(c**e) * prod(p**e)``.

    ``unit`` is a ground-domain number, the ``c`` are monic irreducibles in
    constant monomials only and the ``p`` are monic irreducibles involving a
    non-constant monomial.
    """
    return _factor_cached(t.field, tuple(m.constant for m in t.monomials), value)


@lru_cache(maxsize=4096)
def _factor_cached(fld, mask, value):
    unit = fld.domain.one
    consts, parts = [], []
    for poly, sign in ((value.numer, 1), (value.denom, -1)):
        coeff, facs = poly.factor_list()
        unit = unit * coeff if sign > 0 else unit / coeff
        for p, e in facs:
            lc = p.LC
            pm = p.quo_ground(lc)
            unit = unit * lc ** e if sign > 0 else unit / lc ** e
            variables = {i for monom in pm.monoms() for i, x in enumerate(monom) if x}
            (consts if all(mask[i] for i in variables) else parts).append((pm, sign * e))
    return unit, tuple(consts), tuple(parts)


def _product(t: Tower, factors) -> object:
    acc = t.field.one
    for p, e in factors:
        acc = acc * t.field(p) ** e
    return acc


def _constant_log_terms(t: Tower, value) -> dict:
    """Additive decomposition of ``log(value)`` for a constant ``value``.

    Keys are ``-1``, rational primes, other ground numbers (non-rational
    domains) or monic irreducibles in the constant monomials.
    """
    out: dict = {}

    def bump(key, e):
        out[key] = out.get(key, 0) + e
        if not out[key]:
            del out[key]

    unit, consts, _ = _factor(t, value)
    for pm, e in consts:
        bump(pm, e)
    if unit != 1:
        if t.domain == QQ:
            q = Fraction(int(unit.numerator), int(unit.denominator))
            if q < 0:
                bump(-1, 1)
            for p, e in factorint(abs(q.numerator)).items():
                bump(p, e)
            for p, e in factorint(q.denominator).items():
                bump(p, -e)
        else:
            bump(unit, 1)
    return out


def _materialize(t: Tower, terms: dict, scale=1):
    acc = t.zero()
    for key, e in terms.items():
        t, g = t.extend(Kind.LOG, _key_value(t, key))
        acc = t.coerce(acc) + g * (e * scale)
    return t, acc


def reduce_logs(tower: Tower, elems: Iterable[TowerElem]) -> tuple[Tower, list[TowerElem]]:
    """Rewrite log monomials in ``elems`` over the basis of irreducible log arguments."""
    t = tower
    elems = [t.coerce(e) for e in elems]
    for _ in range(64):
        involved = set()
        for e in elems:
            involved |= t.involved(e.value)
        logs = [i for i in sorted(involved) if t.monomials[i].kind is Kind.LOG]
        basis = _LogBasis(t)
        mapping = {}
        for i in logs:
            t, repl = _log_normal_form(t, basis, i)
            if repl is not None:
                mapping[i] = repl
        if not mapping:
            break
        elems = [_substitute(t, t.coerce(e), {i: t.coerce(r).value for i, r in mapping.items()})
                 for e in elems]
    return t, elems


def _log_normal_form(t: Tower, basis: _LogBasis, i: int):
    """Return (tower, replacement) for log monomial ``i``; None when it is already a basis element."""
    value = t.arg(i).value
    unit, consts, parts = _factor(t, value)
    if t.monomials[i].constant:
        terms = _constant_log_terms(t, value)
        if _is_self(t, terms, i):
            return t, None
        return _materialize(t, terms)
    if len(parts) == 1 and parts[0][1] == 1:
        rep = basis.reps.get(parts[0][0])
        if rep is not None and rep[0] == i:
            return t, None
    const_terms = _constant_log_terms(t, t.field.ground_new(unit) * _product(t, consts))
    acc = t.zero()
    for pm, e in parts:
        exp_index = _single_exp(t, pm)
        if exp_index is not None:
            acc = acc + t.arg(exp_index) * e
            continue
        if pm not in basis.reps:
            t, g = t.extend(Kind.LOG, t.field(pm))
            basis.reps[pm] = (list(t.gens).index(g.value), t.field.one)
        j, ratio = basis.reps[pm]
        acc = t.coerce(acc) + t.gen(j) * e
        if ratio != 1:
            for key, k in _constant_log_terms(t, t.coerce(ratio).value).items():
                const_terms[key] = const_terms.get(key, 0) - k * e
    t, c = _materialize(t, {k: v for k, v in const_terms.items() if v})
    return t, t.coerce(acc) + c


def _is_self(t: Tower, terms: dict, i: int) -> bool:
    if len(terms) != 1:
        return False
    (key, e), = terms.items()
    if e != 1:
        return False
    return t.arg(i).value == _key_value(t, key)


def _key_value(t: Tower, key):
    if isinstance(key, int):
        return t.field(key)
    if hasattr(key, "ring"):
        return t.field(key)
    return t.field.ground_new(key)


def _single_exp(t: Tower, pm) -> int | None:
    """Index of an exp monomial when ``pm`` is exactly that generator."""
    terms = pm.terms()
    if len(terms) != 1:
        return None
    monom, _ = terms[0]
    if sum(monom) != 1:
        return None
    j = monom.index(1)
    return j if t.monomials[j].kind is Kind.EXP else None


def _substitute(t: Tower, e: TowerElem, mapping: dict) -> TowerElem:
    """Evaluate ``e`` with generators ``mapping[i]`` in place of ``t.gens[i]``."""
    if not mapping:
        return e
    gens = t.gens
    field_ = t.field
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            base = mapping[i] if i in mapping else gens[i]
            cache[key] = base ** k
        return cache[key]

    def ev(poly):
        acc = field_.zero
        for monom, coeff in poly.terms():
            term = field_.ground_new(coeff)
            for i, k in enumerate(monom):
                if k:
                    term = term * power(i, k)
            acc += term
        return acc

    return TowerElem(t, ev(e.value.numer) / ev(e.value.denom))
