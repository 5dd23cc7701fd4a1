"""Differential towers F(t1, ..., tn) of transcendental monomials.

Every element of a tower is stored as a canonical sympy ``FracElement`` in
the rational function field generated by all monomials (constant symbols
included).  Because the generators are asserted algebraically independent,
the derivation is fixed by the derivative of each generator:

    D(f) = sum_i  (d f / d t_i) * t_i'

A monomial whose defining argument is constant (``log(2)``, ``dilog(3)``,
an explicit constant symbol) has derivative zero and counts as a constant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.fields import FracElement, FracField, field as make_field

from .algebra import Poly, RatFunc
from .errors import StructuralError, TowerError


class Kind(enum.Enum):
    CONSTANT = "const"
    INDETERMINATE = "indeterminate"
    LOG = "log"
    EXP = "exp"
    DILOG = "dilog"
    LI = "li"
    ERF = "erf"


FUNCTION_KINDS = {
    "log": Kind.LOG,
    "exp": Kind.EXP,
    "dilog": Kind.DILOG,
    "li": Kind.LI,
    "erf": Kind.ERF,
}


@dataclass(frozen=True)
class Monomial:
    """One generator.  ``arg`` lives in the field that existed at creation."""

    kind: Kind
    symbol: str
    arg: FracElement | None = None
    name: str | None = None
    constant: bool = False

    def __repr__(self):
        if self.kind in (Kind.CONSTANT, Kind.INDETERMINATE):
            return self.name
        return f"{self.kind.value}({self.arg.as_expr()})"


def _lift(value: FracElement, field: FracField) -> FracElement:
    """Move ``value`` into ``field``; padding exponents is enough when its symbols are a prefix."""
    src = value.field
    if src == field:
        return value
    n, m = len(src.symbols), len(field.symbols)
    if src.domain == field.domain and n <= m and field.symbols[:n] == src.symbols:
        pad = (0,) * (m - n)
        ring = field.ring
        num = ring.from_dict({e + pad: c for e, c in value.numer.items()})
        den = ring.from_dict({e + pad: c for e, c in value.denom.items()})
        return field.raw_new(num, den)
    return value.set_field(field)


class Tower:
    """An immutable tower; :meth:`extend` returns a new tower sharing structure."""

    def __init__(self, monomials: Sequence[Monomial], derivs: Sequence[FracElement], domain=QQ):
        self.monomials = tuple(monomials)
        self.domain = domain
        symbols = [m.symbol for m in self.monomials]
        self.field: FracField = make_field(",".join(symbols), domain)[0] if symbols else make_field([], domain)[0]
        self.gens = tuple(self.field.gens) if symbols else ()
        self._derivs = tuple(_lift(d, self.field) for d in derivs)
        self._index = {m: i for i, m in enumerate(self.monomials)}
        self._const_mask = tuple(m.constant for m in self.monomials)
        self._arg_index = None
        self._algebraic = bool(getattr(domain, "is_AlgebraicField", False))

    # -- construction -------------------------------------------------
    @classmethod
    def rational(cls, var: str = "x", constants: Iterable[str] = (), derivative=1, domain=QQ) -> "Tower":
        """``QQ(constants)(var)`` with ``var' = derivative`` (a rational number)."""
        t = cls((), (), domain)
        for c in constants:
            t = t.add_constant(c)
        if var:
            t, _ = t.add_indeterminate(var, derivative)
        return t

    @classmethod
    def constants_only(cls, constants: Iterable[str] = (), domain=QQ) -> "Tower":
        return cls.rational(None, constants, domain=domain)

    def _with(self, mono: Monomial, deriv) -> "Tower":
        new = Tower(self.monomials + (mono,), self._derivs + (deriv,), self.domain)
        return new

    def _fresh_symbol(self) -> str:
        return f"_m{len(self.monomials)}"

    def add_constant(self, name: str) -> "Tower":
        for m in self.monomials:
            if m.name == name:
                if m.kind is Kind.CONSTANT:
                    return self
                raise TowerError(f"name {name!r} already used by {m}")
        _check_name(name)
        mono = Monomial(Kind.CONSTANT, name, None, name, True)
        return self._with(mono, self.field.zero)

    def add_indeterminate(self, name: str, derivative=1) -> tuple["Tower", "TowerElem"]:
        """Adjoin an indeterminate with declared derivative in the current field."""
        for m in self.monomials:
            if m.name == name:
                if m.kind is Kind.INDETERMINATE:
                    return self, self.gen(m)
                raise TowerError(f"name {name!r} already used by {m}")
        _check_name(name)
        d = self.coerce(derivative).value
        mono = Monomial(Kind.INDETERMINATE, name, None, name, False)
        t = self._with(mono, d)
        return t, t.gen(mono)

    def extend(self, kind: Kind | str, arg) -> tuple["Tower", "TowerElem"]:
        """Adjoin ``kind(arg)``; idempotent on structurally equal arguments.

        Prerequisite monomials are inserted first: ``log(1-g)`` for
        ``dilog(g)``, ``log(u)`` for ``li(u)`` and ``exp(-v^2)`` for ``erf(v)``.
        """
        if isinstance(kind, str):
            kind = FUNCTION_KINDS[kind]
        if kind in (Kind.CONSTANT, Kind.INDETERMINATE):
            raise TowerError("use add_constant / add_indeterminate")
        a = self.coerce(arg)
        t = self
        if isinstance(arg, TowerElem) and arg.tower is not self:
            t, a = _unify_tower(self, a)
        value = a.value
        existing = t.find(kind, value)
        if existing is not None:
            return t, t.gen(existing)
        if kind is Kind.LOG or kind is Kind.LI:
            if not value:
                raise TowerError(f"{kind.value} of 0")
        if kind is Kind.DILOG:
            if not value or value == t.field.one:
                raise TowerError(f"dilog of {value.as_expr()} (argument must avoid 0 and 1)")
        if kind is Kind.DILOG and t._exp_argument(t.field.one - value) is None:
            t, _ = t.extend(Kind.LOG, t.field.one - value)
        elif kind is Kind.LI and t._exp_argument(value) is None:
            t, _ = t.extend(Kind.LOG, value)
        elif kind is Kind.ERF:
            t, _ = t.extend(Kind.EXP, -value * value)
        value = _lift(value, t.field)
        const = t._is_constant_value(value)
        mono = Monomial(kind, t._fresh_symbol(), value, None, const)
        if const:
            deriv = t.field.zero
        elif kind is Kind.EXP:
            deriv = t._derive_value(value)
        else:
            deriv = t._monomial_derivative(kind, value)
        t2 = t._with(mono, deriv)
        if kind is Kind.EXP and not const:
            # (e^u)' = u' e^u involves the new generator itself
            t2._derivs = t2._derivs[:-1] + (t2._derivs[-1] * t2.gens[-1],)
        return t2, t2.gen(mono)

    def _monomial_derivative(self, kind: Kind, value: FracElement) -> FracElement:
        dv = self._derive_value(value)
        one = self.field.one
        if kind is Kind.LOG:
            return dv / value
        if kind is Kind.DILOG:
            return -(dv / value) * self._log_value(one - value)
        if kind is Kind.LI:
            return dv / self._log_value(value)
        if kind is Kind.ERF:
            e = self.gen(self.find(Kind.EXP, -value * value)).value
            return dv * e
        raise TowerError(kind)

    def _exp_argument(self, value: FracElement) -> FracElement | None:
        for i, m in enumerate(self.monomials):
            if m.kind is Kind.EXP and value == self.gens[i]:
                return _lift(m.arg, self.field)
        return None

    def exp_argument(self, v) -> "TowerElem | None":
        """``a`` when ``v`` is the monomial ``exp(a)`` of this tower, else None."""
        a = self._exp_argument(self.coerce(v).value)
        return None if a is None else TowerElem(self, a)

    def _log_value(self, value: FracElement) -> FracElement:
        """``log(value)``: the exponent when ``value`` is an exp monomial, else the log monomial."""
        a = self._exp_argument(value)
        if a is not None:
            return a
        return self.gens[self.index(self.find(Kind.LOG, value))]

    def find(self, kind: Kind, value) -> Monomial | None:
        value = self.coerce(value).value
        if self._arg_index is None:
            self._arg_index = {
                (m.kind, _lift(m.arg, self.field)): m for m in self.monomials if m.arg is not None
            }
        return self._arg_index.get((kind, value))

    def arg(self, mono) -> "TowerElem":
        """Defining argument of a function monomial, lifted into this tower."""
        m = self.monomials[self.index(mono)]
        if m.arg is None:
            raise StructuralError(f"{m} has no argument")
        return TowerElem(self, _lift(m.arg, self.field))

    # -- element access -----------------------------------------------
    def gen(self, mono: Monomial | int | str) -> "TowerElem":
        return TowerElem(self, self.gens[self.index(mono)])

    def index(self, mono: Monomial | int | str) -> int:
        if isinstance(mono, int):
            return mono
        if isinstance(mono, str):
            for i, m in enumerate(self.monomials):
                if m.name == mono:
                    return i
            raise StructuralError(f"unknown name {mono!r}")
        try:
            return self._index[mono]
        except KeyError:
            raise StructuralError(f"{mono} is not a monomial of this tower") from None

    def monomial(self, i: int) -> Monomial:
        return self.monomials[i]

    def name_lookup(self, name: str) -> Monomial | None:
        for m in self.monomials:
            if m.name == name:
                return m
        return None

    @property
    def indeterminates(self) -> list[Monomial]:
        return [m for m in self.monomials if m.kind is Kind.INDETERMINATE]

    @property
    def constant_names(self) -> list[str]:
        return [m.name for m in self.monomials if m.kind is Kind.CONSTANT]

    def derivative_of(self, mono) -> "TowerElem":
        return TowerElem(self, self._derivs[self.index(mono)])

    def coerce(self, v) -> "TowerElem":
        if isinstance(v, TowerElem):
            if v.tower is self:
                return v
            if _is_prefix(v.tower, self):
                return TowerElem(self, _lift(v.value, self.field))
            raise StructuralError("element belongs to an unrelated tower")
        if isinstance(v, FracElement):
            return TowerElem(self, _lift(v, self.field))
        if isinstance(v, Fraction):
            return TowerElem(self, self.field(QQ(v.numerator, v.denominator)))
        return TowerElem(self, self.field(v))

    def lift(self, v) -> "TowerElem":
        return self.coerce(v)

    def zero(self) -> "TowerElem":
        return TowerElem(self, self.field.zero)

    def one(self) -> "TowerElem":
        return TowerElem(self, self.field.one)

    def extends(self, other: "Tower") -> bool:
        return _is_prefix(other, self)

    # -- derivation ---------------------------------------------------
    def involved(self, value: FracElement) -> set[int]:
        out: set[int] = set()
        for poly in (value.numer, value.denom):
            for monom in poly.monoms():
                for i, e in enumerate(monom):
                    if e:
                        out.add(i)
        return out

    def _is_constant_value(self, value: FracElement) -> bool:
        return all(self._const_mask[i] for i in self.involved(value))

    def _derive_value(self, value: FracElement) -> FracElement:
        result = self.field.zero
        for i in sorted(self.involved(value)):
            if self._const_mask[i]:
                continue
            d = self._derivs[i]
            if d is None:
                raise TowerError(f"derivative of {self.monomials[i]} unavailable")
            if not d:
                continue
            result += self._partial(value, i) * d
        return result

    def _partial(self, value: FracElement, i: int) -> FracElement:
        if not self._algebraic:
            return value.diff(self.gens[i])
        # FracElement.diff trips over algebraic ground domains; use the quotient rule
        gen = self.field.ring.gens[i]
        num, den = value.numer, value.denom
        return self.field.new(num.diff(gen) * den - num * den.diff(gen), den * den)

    def derive(self, v) -> "TowerElem":
        v = self.coerce(v)
        return TowerElem(self, self._derive_value(v.value))

    def is_constant(self, v) -> bool:
        return self._is_constant_value(self.coerce(v).value)

    def log_derivative(self, h) -> "TowerElem":
        h = self.coerce(h)
        if not h.value:
            from .errors import DomainError
            raise DomainError("logarithmic derivative of 0")
        return TowerElem(self, self._derive_value(h.value) / h.value)

    def level(self, v) -> int:
        """Number of non-constant monomials up to the highest one involved."""
        idx = [i for i in self.involved(self.coerce(v).value) if not self._const_mask[i]]
        if not idx:
            return 0
        top = max(idx)
        return sum(1 for i in range(top + 1) if not self._const_mask[i])

    def top_monomial(self, v) -> Monomial | None:
        idx = [i for i in self.involved(self.coerce(v).value) if not self._const_mask[i]]
        return self.monomials[max(idx)] if idx else None

    # -- univariate views ---------------------------------------------
    def as_ratfunc(self, v, mono) -> RatFunc:
        """View ``v`` as a rational function in ``mono`` over the other generators."""
        v = self.coerce(v)
        i = self.index(mono)
        var = self.monomials[i].symbol
        num = self._as_poly(v.value.numer, i, var)
        den = self._as_poly(v.value.denom, i, var)
        # a reduced multivariate fraction is already coprime in any one variable
        return RatFunc(num, den, coprime=True)

    def _as_poly(self, poly, i: int, var: str) -> Poly:
        ring = self.field.ring
        buckets: dict[int, dict] = {}
        for monom, coeff in poly.terms():
            rest = monom[:i] + (0,) + monom[i + 1:]
            buckets.setdefault(monom[i], {})[rest] = coeff
        n = max(buckets) + 1 if buckets else 0
        coeffs = [self.field(ring(buckets[k])) if k in buckets else self.field.zero for k in range(n)]
        return Poly(coeffs, var, self.field)

    def from_ratfunc(self, r: RatFunc | Poly, mono) -> "TowerElem":
        if isinstance(r, Poly):
            r = RatFunc(r)
        g = self.gens[self.index(mono)]
        return TowerElem(self, _eval_poly(r.num, g) / _eval_poly(r.den, g))

    def poly_var(self, mono) -> str:
        return self.monomials[self.index(mono)].symbol

    def __repr__(self):
        return f"Tower({', '.join(repr(m) for m in self.monomials)})"


def _eval_poly(p: Poly, g):
    acc = g.field.zero
    for c in reversed(p.coeffs):
        acc = acc * g + c
    return acc


def _check_name(name: str) -> None:
    if not name.isidentifier() or name.startswith("_") or name in FUNCTION_KINDS:
        raise TowerError(f"invalid symbol name {name!r}")


def _is_prefix(small: Tower, big: Tower) -> bool:
    if small is big:
        return True
    n = len(small.monomials)
    if n > len(big.monomials) or small.domain != big.domain:
        return False
    pairs = list(zip(small.monomials, big.monomials))
    if all(a is b for a, b in pairs):
        return True
    # towers built independently by the same steps are interchangeable
    return all(a == b for a, b in pairs) and all(
        _lift(d, big.field) == e for d, e in zip(small._derivs, big._derivs))


def _unify_tower(t: Tower, e: "TowerElem") -> tuple[Tower, "TowerElem"]:
    if _is_prefix(e.tower, t):
        return t, t.coerce(e)
    if _is_prefix(t, e.tower):
        return e.tower, e
    raise StructuralError("elements from unrelated towers")


def common_tower(*elems) -> Tower:
    towers = [e.tower for e in elems if isinstance(e, TowerElem)]
    if not towers:
        raise StructuralError("no tower given")
    best = towers[0]
    for t in towers[1:]:
        if _is_prefix(best, t):
            best = t
        elif not _is_prefix(t, best):
            raise StructuralError("elements from unrelated towers")
    return best


class TowerElem:
    """Canonical element of a tower.  Arithmetic lifts into the larger tower."""

    __slots__ = ("tower", "value")

    def __init__(self, tower: Tower, value: FracElement):
        self.tower = tower
        self.value = value

    def _pair(self, other):
        if isinstance(other, TowerElem):
            if other.tower is self.tower:
                return self.tower, self.value, other.value
            t = common_tower(self, other)
            return t, t.coerce(self).value, t.coerce(other).value
        return self.tower, self.value, self.tower.coerce(other).value

    def __add__(self, other):
        t, a, b = self._pair(other)
        return TowerElem(t, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        t, a, b = self._pair(other)
        return TowerElem(t, a - b)

    def __rsub__(self, other):
        t, a, b = self._pair(other)
        return TowerElem(t, b - a)

    def __mul__(self, other):
        t, a, b = self._pair(other)
        return TowerElem(t, a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        t, a, b = self._pair(other)
        if not b:
            raise ZeroDivisionError("division by zero tower element")
        return TowerElem(t, a / b)

    def __rtruediv__(self, other):
        t, a, b = self._pair(other)
        if not a:
            raise ZeroDivisionError("division by zero tower element")
        return TowerElem(t, b / a)

    def __neg__(self):
        return TowerElem(self.tower, -self.value)

    def __pow__(self, n: int):
        if n < 0 and not self.value:
            raise ZeroDivisionError("negative power of zero")
        return TowerElem(self.tower, self.value ** n)

    def __eq__(self, other):
        if isinstance(other, TowerElem):
            try:
                _, a, b = self._pair(other)
            except StructuralError:
                return False
            return a == b
        if isinstance(other, (int, Fraction)):
            return self.value == self.tower.coerce(other).value
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return bool(self.value)

    def derive(self) -> "TowerElem":
        return self.tower.derive(self)

    def is_constant(self) -> bool:
        return self.tower.is_constant(self)

    @property
    def level(self) -> int:
        return self.tower.level(self)

    def lift(self, tower: Tower) -> "TowerElem":
        return tower.coerce(self)

    def __str__(self):
        from .expr.printer import format_elem
        return format_elem(self)

    def __repr__(self):
        return f"TowerElem({self})"
