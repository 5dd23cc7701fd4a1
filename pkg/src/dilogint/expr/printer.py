"""Canonical text for tower elements.

Terms are ordered by ascending total degree, ties broken by the exponent
vector read from the newest generator down.  Output re-parses with
:func:`dilogint.expr.parser.parse` into the same element.
"""

from __future__ import annotations

from fractions import Fraction

from ..tower import Kind, Tower, TowerElem


def format_elem(e: TowerElem) -> str:
    return _format_value(e.tower, e.value)


def _format_value(tower: Tower, value) -> str:
    num, den = value.numer, value.denom
    if not num:
        return "0"
    den_terms = den.terms()
    if len(den_terms) == 1 and not any(den_terms[0][0]):
        scale = den_terms[0][1]
        terms = [(m, c / scale) for m, c in num.terms()]
        return _format_sum(tower, terms)
    num_s = _format_sum(tower, num.terms())
    if len(num.terms()) > 1:
        num_s = f"({num_s})"
    den_s = _format_sum(tower, den_terms)
    if not _is_atom(den_terms):
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"


def _is_atom(terms) -> bool:
    if len(terms) != 1:
        return False
    monom, coeff = terms[0]
    nonzero = [e for e in monom if e]
    if not nonzero:
        return _coeff_is_plain_int(coeff)
    return coeff == 1 and len(nonzero) == 1


def _coeff_is_plain_int(c) -> bool:
    try:
        q = Fraction(int(c.numerator), int(c.denominator))
    except AttributeError:
        return False
    return q.denominator == 1 and q >= 0


def _sort_key(monom):
    return (sum(monom), tuple(reversed(monom)))


def _format_sum(tower: Tower, terms) -> str:
    terms = sorted(terms, key=lambda t: _sort_key(t[0]))
    out = ""
    for k, (monom, coeff) in enumerate(terms):
        s = _format_term(tower, monom, coeff)
        if k == 0:
            out = s
        elif s.startswith("-"):
            out += s
        else:
            out += "+" + s
    return out


def _format_term(tower: Tower, monom, coeff) -> str:
    factors = []
    for i, e in enumerate(monom):
        if not e:
            continue
        g = _format_monomial(tower, i)
        factors.append(g if e == 1 else f"{g}^{e}")
    sign, mag = _format_coeff(tower, coeff)
    body = "*".join(factors)
    if not factors:
        return sign + mag
    if mag == "1":
        return sign + body
    return f"{sign}{mag}*{body}"


def _format_coeff(tower: Tower, c) -> tuple[str, str]:
    dom = tower.domain
    if getattr(dom, "is_AlgebraicField", False):
        expr = dom.to_sympy(c)
        re, im = expr.as_real_imag()
        re_q, im_q = Fraction(str(re)), Fraction(str(im))
        if im_q == 0:
            return _split_rational(re_q)
        if re_q == 0:
            sign, mag = _split_rational(im_q)
            return sign, "i" if mag == "1" else f"{mag}*i"
        im_s = _split_rational(im_q)
        im_part = "i" if im_s[1] == "1" else f"{im_s[1]}*i"
        return "", f"({_rat(re_q)}{'-' if im_s[0] else '+'}{im_part})"
    return _split_rational(Fraction(int(c.numerator), int(c.denominator)))


def _split_rational(q: Fraction) -> tuple[str, str]:
    return ("-" if q < 0 else ""), _rat(abs(q))


def _rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _format_monomial(tower: Tower, i: int) -> str:
    m = tower.monomials[i]
    if m.kind in (Kind.CONSTANT, Kind.INDETERMINATE):
        return m.name
    return f"{m.kind.value}({_format_value(tower, tower.arg(i).value)})"
