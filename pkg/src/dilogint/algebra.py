"""Exact univariate polynomials and rational functions over a coefficient field.

Coefficients are elements of a sympy ``FracField`` (rational functions in
named symbols over QQ or a simple algebraic extension).  The univariate
algorithms (Euclid, Yun, partial fractions, Taylor shifts) live here; the
coefficient field only has to provide exact field arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from sympy.polys.fields import FracField, field as make_field

from .errors import DomainError, StructuralError, UnsplittableError


class Poly:
    """Dense univariate polynomial ``sum(coeffs[i] * var**i)``.

    The zero polynomial has degree -1.  Instances are immutable.
    """

    __slots__ = ("coeffs", "var", "field")

    def __init__(self, coeffs: Iterable, var: str, field: FracField):
        cs = [field(c) if not _in_field(c, field) else c for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var
        self.field = field

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, var, field):
        return cls((), var, field)

    @classmethod
    def one(cls, var, field):
        return cls((field.one,), var, field)

    @classmethod
    def constant(cls, c, var, field):
        return cls((c,), var, field)

    @classmethod
    def linear(cls, root, var, field):
        """The monic factor ``var - root``."""
        return cls((-field(root) if not _in_field(root, field) else -root, field.one), var, field)

    @classmethod
    def from_roots(cls, roots: Iterable, var, field):
        p = cls.one(var, field)
        for r in roots:
            p = p * cls.linear(r, var, field)
        return p

    # -- basic queries ------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                parts.append(f"({c})")
            elif c == self.field.one:
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise StructuralError(f"expected a Poly, got {type(other).__name__}")
        if other.var != self.var:
            raise StructuralError(f"mixed variables {self.var!r} and {other.var!r}")
        if other.field != self.field:
            raise StructuralError("polynomials over different coefficient fields")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly((self.field(other),), self.var, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = other.coeffs + (z,) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)], self.var, self.field)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var, self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(self.field(other) if not _in_field(other, self.field) else other)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.var, self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out, self.var, self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative power of a polynomial")
        result = Poly.one(self.var, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        return Poly([c * a for a in self.coeffs], self.var, self.field)

    def divmod(self, other: "Poly"):
        self._check(other)
        if other.is_zero():
            raise DomainError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        inv = 1 / other.lc
        quo = [self.field.zero] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c * inv
            quo[i - dq] = q
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= q * b
        return Poly(quo, self.var, self.field), Poly(rem[:dq] if dq > 0 else [], self.var, self.field)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exquo(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise DomainError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "Poly") -> bool:
        return not (other % self)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.var, self.field)

    def __call__(self, value):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def shift(self, alpha) -> "Poly":
        """Return ``p(var + alpha)`` (Taylor shift)."""
        out = Poly.zero(self.var, self.field)
        step = Poly((alpha, self.field.one), self.var, self.field)
        for c in reversed(self.coeffs):
            out = out * step + c
        return out

    def map_coeffs(self, fn, field=None) -> "Poly":
        return Poly([fn(c) for c in self.coeffs], self.var, field or self.field)


def _in_field(c, field) -> bool:
    return getattr(c, "field", None) == field


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    a._check(b)
    while b:
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.var, a.field)
    return (a * b).exquo(poly_gcd(a, b)).monic()


def squarefree_decompose(a: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm.

    Returns monic, pairwise coprime, squarefree parts with strictly
    increasing multiplicities; their product equals ``a`` up to ``a.lc``.
    """
    if a.is_zero():
        raise DomainError("squarefree decomposition of the zero polynomial")
    a = a.monic()
    if a.degree == 0:
        return []
    da = a.derivative()
    c = poly_gcd(a, da)
    w = a.exquo(c)
    y = da.exquo(c)
    z = y - w.derivative()
    parts = []
    i = 1
    while w.degree > 0:
        g = poly_gcd(w, z)
        if g.degree > 0:
            parts.append((g, i))
        w = w.exquo(g)
        y = z.exquo(g)
        z = y - w.derivative()
        i += 1
    return parts


class RatFunc:
    """Normalized quotient of two polynomials: monic denominator, coprime parts."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, coprime: bool = False):
        if den is None:
            den = Poly.one(num.var, num.field)
        num._check(den)
        if den.is_zero():
            raise DomainError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.one(num.var, num.field)
            return
        g = Poly.one(num.var, num.field) if coprime else poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exquo(g), den.exquo(g)
        lc = den.lc
        self.num = num.scale(1 / lc)
        self.den = den.monic()

    @property
    def var(self):
        return self.num.var

    @property
    def field(self):
        return self.num.field

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.is_one():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        return RatFunc(Poly.constant(self.field(other), self.var, self.field))

    def __add__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise DomainError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return RatFunc(self.num ** n, self.den ** n)
        return RatFunc(self.den ** -n, self.num ** -n)

    def derivative(self) -> "RatFunc":
        """Formal derivative with respect to the variable (coefficients constant)."""
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def normalize(self) -> "RatFunc":
        return RatFunc(self.num, self.den)


# -- partial fractions ------------------------------------------------------

@dataclass(frozen=True)
class PartialFractions:
    """``poly_part + sum(coeff / (var - root)**order)``."""

    poly_part: Poly
    terms: tuple  # of (root, order, coefficient)

    def recombine(self) -> RatFunc:
        p = self.poly_part
        acc = RatFunc(p)
        for root, order, coeff in self.terms:
            lin = Poly.linear(root, p.var, p.field)
            acc = acc + RatFunc(Poly.constant(coeff, p.var, p.field), lin ** order)
        return acc

    def coefficient(self, root, order):
        for r, q, c in self.terms:
            if r == root and q == order:
                return c
        return self.poly_part.field.zero


def _check_factorization(den: Poly, roots: Sequence[tuple]) -> None:
    prod = Poly.one(den.var, den.field)
    for root, mult in roots:
        prod = prod * Poly.linear(root, den.var, den.field) ** mult
    if prod != den:
        q, r = den.divmod(prod)
        residual = q if not r else den
        raise UnsplittableError(residual, f"denominator not split by the supplied roots; unsplit factor {residual}")


def partial_fractions(r: RatFunc, roots: Sequence[tuple]) -> PartialFractions:
    """Split ``r`` over the complete linear factorization ``roots`` of its denominator.

    ``roots`` is a sequence of ``(root, multiplicity)`` pairs.
    """
    roots = list(roots.items()) if isinstance(roots, dict) else list(roots)
    _check_factorization(r.den, roots)
    poly_part, rem = r.num.divmod(r.den)
    terms = []
    var, fld = r.var, r.field
    for root, mult in roots:
        cofactor = r.den.exquo(Poly.linear(root, var, fld) ** mult)
        n_s = rem.shift(root)
        d_s = cofactor.shift(root)
        series = _series_quotient(n_s, d_s, mult)
        for k, c in enumerate(series):
            if c:
                terms.append((root, mult - k, c))
    terms.sort(key=lambda t: (_root_index(roots, t[0]), -t[1]))
    return PartialFractions(poly_part, tuple(terms))


def _root_index(roots, root):
    for i, (r, _) in enumerate(roots):
        if r == root:
            return i
    return len(roots)


def _series_quotient(num: Poly, den: Poly, order: int) -> list:
    """First ``order`` power-series coefficients of ``num/den`` at 0 (den(0) != 0)."""
    z = num.field.zero
    a = list(num.coeffs) + [z] * order
    d = list(den.coeffs) + [z] * order
    inv = 1 / d[0]
    out = []
    for k in range(order):
        acc = a[k]
        for i in range(1, k + 1):
            acc -= d[i] * out[k - i]
        out.append(acc * inv)
    return out


# -- roots ------------------------------------------------------------------

class RootProvider:
    """Table of known complete root lists plus a built-in splitter.

    The built-in splitter finds every root lying in the coefficient field
    itself (rational roots, roots such as ``x`` or ``2*x`` over QQ(x), and
    quadratics with square discriminant) by factoring over the ground
    domain.  Anything else must be registered with :meth:`add`.
    """

    def __init__(self, table: Iterable[tuple[Poly, Sequence]] = ()):
        self._table: list[tuple[Poly, tuple]] = []
        for poly, roots in table:
            self.add(poly, roots)

    def add(self, poly: Poly, roots: Sequence) -> None:
        poly = poly.monic()
        roots = tuple(roots)
        for r in roots:
            if poly(r):
                raise DomainError(f"{r} is not a root of {poly}")
        if len(roots) != poly.degree or Poly.from_roots(roots, poly.var, poly.field) != poly:
            raise DomainError(f"root list for {poly} is not complete")
        self._table.append((poly, roots))

    def __len__(self):
        return len(self._table)

    def split(self, p: Poly) -> list:
        """All roots (with repetition) of a squarefree polynomial ``p``."""
        p = p.monic()
        if p.degree <= 0:
            return []
        if p.degree == 1:
            return [-p.coeffs[0]]
        found, residual = _field_roots(p)
        if residual.degree > 0:
            for poly, roots in self._table:
                poly = _lift_poly(poly, residual)
                if poly is None or poly.degree > residual.degree:
                    continue
                if poly.divides(residual):
                    found.extend(_lift_value(r, residual.field) for r in roots)
                    residual = residual.exquo(poly)
                    if residual.degree <= 0:
                        break
        if residual.degree > 0:
            raise UnsplittableError(residual.monic())
        return found


def _lift_value(v, fld):
    if _in_field(v, fld):
        return v
    set_field = getattr(v, "set_field", None)
    return set_field(fld) if set_field else fld(v)


def _lift_poly(poly: Poly, like: Poly) -> Poly | None:
    if poly.field == like.field and poly.var == like.var:
        return poly
    try:
        return Poly([_lift_value(c, like.field) for c in poly.coeffs], like.var, like.field)
    except Exception:
        return None


def _field_roots(p: Poly):
    """Roots of ``p`` in its coefficient field, found by ground-domain factoring."""
    K = p.field
    syms = tuple(str(s) for s in K.symbols)
    if p.var in syms:
        F = K
    else:
        F = make_field(",".join(syms + (p.var,)), K.domain)[0]
    Y = F.gens[[str(s) for s in F.symbols].index(p.var)]
    flat = F.zero
    for i, c in enumerate(p.coeffs):
        flat += c.set_field(F) * Y ** i
    numer = flat.numer
    try:
        _, factors = numer.factor_list()
    except Exception:
        return [], p
    idx = [str(s) for s in F.symbols].index(p.var)
    found = []
    residual = Poly.one(p.var, K)
    for fac, mult in factors:
        deg = fac.degree(idx)
        if deg <= 0:
            continue
        if deg == 1:
            c1 = F.zero
            c0 = F.zero
            for monom, coeff in fac.terms():
                rest = monom[:idx] + (0,) + monom[idx + 1:]
                term = F.ring({rest: coeff})
                if monom[idx] == 1:
                    c1 += F(term)
                else:
                    c0 += F(term)
            root = (-c0 / c1).set_field(K)
            found.extend([root] * mult)
        else:
            residual = residual * _to_poly(F(fac), idx, F, K, p.var) ** mult
    return found, residual.monic() if residual.degree > 0 else residual


def _to_poly(elem, idx, F, K, var) -> Poly:
    coeffs: dict[int, object] = {}
    for monom, coeff in elem.numer.terms():
        rest = monom[:idx] + (0,) + monom[idx + 1:]
        coeffs[monom[idx]] = coeffs.get(monom[idx], F.zero) + F(F.ring({rest: coeff}))
    den = elem.denom
    n = max(coeffs) + 1 if coeffs else 0
    return Poly([(coeffs.get(i, F.zero) / F(den)).set_field(K) for i in range(n)], var, K)


def resolve_roots(p: Poly, provider: RootProvider | None = None) -> list[tuple[object, int]]:
    """Distinct roots of ``p`` with multiplicities, reconstructing ``p`` up to its lc."""
    if p.is_zero():
        raise DomainError("roots of the zero polynomial")
    provider = provider or RootProvider()
    out: list[tuple[object, int]] = []
    for part, mult in squarefree_decompose(p):
        for root in provider.split(part):
            if part(root):
                raise DomainError(f"provider returned a non-root {root} of {part}")
            if any(r == root for r, _ in out):
                raise DomainError(f"repeated root {root}")
            out.append((root, mult))
    return out
