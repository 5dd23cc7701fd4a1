"""Labeled-section files: dilog data, identity shapes and root tables.

A datum file is a list of ``key: value`` lines; ``#`` starts a comment::

    var: z
    r: -log(1+z)
    g: 1-z-z^2
    r: log(z*(1-z)*(1-z-z^2))
    g: z
    c: -1 | 0, 1
    c: 1 | 1, 1
    w: z^3/(1+z)

``r``/``g``, ``a``/``u`` and ``b``/``v`` lines pair up in order.  Each ``c``
line gives ``c_i | c_i1, ..., c_in``; without ``c`` lines the constants are
inferred.  ``const:`` declares constant symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import Poly, RootProvider
from ..errors import ParseError, TowerError
from ..liouville import DExpressionData
from ..tower import Tower, TowerElem
from .parser import elaborate, parse
from .printer import format_elem

DATUM_KEYS = {"var", "const", "r", "g", "a", "u", "b", "v", "w", "c"}
SHAPE_KEYS = {"var", "const", "f", "theta", "v", "identity"}


@dataclass(frozen=True)
class _Line:
    key: str
    value: str
    line: int
    column: int


def _sections(text: str, allowed: set) -> list[_Line]:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if ":" not in body:
            raise ParseError("expected 'key: value'", n, 1)
        key, value = body.split(":", 1)
        name = key.strip()
        if name not in allowed:
            raise ParseError(f"unknown section {name!r}", n, len(key) - len(key.lstrip()) + 1)
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        out.append(_Line(name, value.strip(), n, col))
    return out


def _expr(tower: Tower, text: str, line: int, column: int) -> tuple[Tower, TowerElem]:
    try:
        return elaborate(parse(text), tower)
    except ParseError as exc:
        raise ParseError(exc.message, line + exc.line - 1,
                         exc.column + (column - 1 if exc.line == 1 else 0)) from None
    except TowerError as exc:
        raise TowerError(f"line {line}: {exc}") from None


def _split_list(value: str) -> list[tuple[str, int]]:
    """Comma separated items with their offsets inside ``value``."""
    out, start = [], 0
    for part in value.split(","):
        lead = len(part) - len(part.lstrip())
        if part.strip():
            out.append((part.strip(), start + lead))
        start += len(part) + 1
    return out


def session_tower(lines, var: str = "x", constants=(), domain=None) -> Tower:
    for ln in lines:
        if ln.key == "var":
            var = ln.value
        elif ln.key == "const":
            constants = [c for c, _ in _split_list(ln.value)]
    kwargs = {"domain": domain} if domain is not None else {}
    return Tower.rational(var, constants=constants, **kwargs)


def load_datum(text: str, tower: Tower | None = None, **session) -> tuple[Tower, DExpressionData]:
    """Parse a datum file; expressions are elaborated into one tower."""
    lines = _sections(text, DATUM_KEYS)
    t = tower or session_tower(lines, **session)
    groups: dict[str, list] = {k: [] for k in "rgaubvw"}
    cols: list = []
    for ln in lines:
        if ln.key in ("var", "const"):
            continue
        if ln.key == "c":
            head, sep, tail = ln.value.partition("|")
            if not sep:
                raise ParseError("c rows are written 'c_i | c_i1, ..., c_in'", ln.line, ln.column)
            t, ci = _expr(t, head.strip(), ln.line, ln.column)
            row = []
            base = ln.column + len(head) + 1
            for item, off in _split_list(tail):
                t, e = _expr(t, item, ln.line, base + off)
                row.append(e)
            cols.append((ci, row, ln))
            continue
        t, e = _expr(t, ln.value, ln.line, ln.column)
        groups[ln.key].append((e, ln))
    pairs = {}
    for left, right in (("r", "g"), ("a", "u"), ("b", "v")):
        if len(groups[left]) != len(groups[right]):
            ln = (groups[left] + groups[right])[-1][1]
            raise ParseError(f"every {left}: line needs a matching {right}: line", ln.line, 1)
        pairs[left] = [(t.coerce(x), t.coerce(y)) for (x, _), (y, _) in zip(groups[left], groups[right])]
    if len(groups["w"]) > 1:
        raise ParseError("only one w: line is allowed", groups["w"][1][1].line, 1)
    w = t.coerce(groups["w"][0][0]) if groups["w"] else None
    c = m = None
    if cols:
        n = len(pairs["r"])
        if len(cols) != n or any(len(row) != n for _, row, _ in cols):
            raise ParseError(f"expected {n} c rows with {n} entries each", cols[-1][2].line, 1)
        c = [t.coerce(ci) for ci, _, _ in cols]
        m = [[t.coerce(e) for e in row] for _, row, _ in cols]
    return t, DExpressionData(dilog=pairs["r"], li=pairs["a"], erf=pairs["b"], w=w, c=c, c_matrix=m)


def dump_datum(d: DExpressionData, var: str = "x") -> str:
    """Datum file text for ``d`` (inverse of :func:`load_datum` up to tower order)."""
    lines = [f"var: {var}"]
    for r, g in d.dilog:
        lines += [f"r: {format_elem(r)}", f"g: {format_elem(g)}"]
    for a, u in d.li:
        lines += [f"a: {_fmt(a)}", f"u: {format_elem(u)}"]
    for b, v in d.erf:
        lines += [f"b: {_fmt(b)}", f"v: {format_elem(v)}"]
    if d.c is not None:
        for ci, row in zip(d.c, d.c_matrix):
            lines.append(f"c: {_fmt(ci)} | " + ", ".join(_fmt(x) for x in row))
    if d.w is not None:
        lines.append(f"w: {format_elem(d.w)}")
    return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    return format_elem(x) if isinstance(x, TowerElem) else str(x)


@dataclass(frozen=True)
class ShapeSpec:
    tower: Tower
    f: TowerElem
    theta: TowerElem | None
    vs: tuple
    identity: str


def load_shape(text: str, tower: Tower | None = None, **session) -> ShapeSpec:
    """Parse a shape file: ``f:``, optional ``theta:``, ``v:`` lines and ``identity: i|ii|both``."""
    lines = _sections(text, SHAPE_KEYS)
    t = tower or session_tower(lines, **session)
    f = theta = None
    vs = []
    identity = "both"
    for ln in lines:
        if ln.key in ("var", "const"):
            continue
        if ln.key == "identity":
            if ln.value not in ("i", "ii", "both"):
                raise ParseError("identity must be i, ii or both", ln.line, ln.column)
            identity = ln.value
            continue
        t, e = _expr(t, ln.value, ln.line, ln.column)
        if ln.key == "f":
            f = e
        elif ln.key == "theta":
            theta = e
        else:
            vs.append(e)
    if f is None:
        raise ParseError("shape file needs an f: line", 1, 1)
    return ShapeSpec(t, t.coerce(f), t.coerce(theta) if theta is not None else None,
                     tuple(t.coerce(v) for v in vs), identity)


def load_root_table(text: str, tower: Tower, var: str = "y") -> RootProvider:
    """Root table lines ``polynomial in y ; root, root, ...`` over ``tower``."""
    provider = RootProvider()
    ty, _ = tower.add_indeterminate(var)
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        poly_text, sep, roots_text = body.partition(";")
        if not sep:
            raise ParseError("expected 'polynomial ; root, root, ...'", n, 1)
        tp, p = _expr(ty, poly_text.strip(), n, 1)
        poly = tp.as_ratfunc(p, var)
        if poly.den.degree != 0:
            raise ParseError("table entry must be a polynomial", n, 1)
        coeffs = [(c / poly.den.lc).set_field(tower.field) for c in poly.num.coeffs]
        roots = []
        for item, off in _split_list(roots_text):
            _, r = _expr(tower, item, n, len(poly_text) + 2 + off)
            roots.append(r.value)
        provider.add(Poly(coeffs, var, tower.field), roots)
    return provider
