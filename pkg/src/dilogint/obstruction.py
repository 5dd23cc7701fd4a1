"""Pole analysis in Q(x)(log x) and a bounded search for D-expressions.

Write ``lam = log x``.  Functions here cover

* the antiderivative of ``P(lam)`` for constant-coefficient ``P`` via
  ``R_0 = x``, ``R_n = x*lam^n - n*R_{n-1}``;
* pole profiles of elements of ``Q(x)(lam)`` viewed as rational functions
  of ``lam``, and the fact that differentiation raises every pole order by
  one;
* :func:`bounded_no_del_search`, which either finds a dilog datum for
  ``H(lam)`` inside a degree-capped ansatz or returns a replayable
  certificate that none exists there.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .algebra import PartialFractions, Poly, RatFunc, RootProvider, partial_fractions, resolve_roots
from .errors import DomainError, IdentityViolation, StructuralError
from .liouville import DExpressionData, Verdict, build_antiderivative, check_del_expression
from .linsolve import LinearSystem
from .solving import LinForm, solve_constants
from .tower import Kind, Tower, TowerElem


def log_tower(var: str = "x") -> tuple[Tower, TowerElem, TowerElem]:
    """``Q(x)(log x)`` together with ``x`` and ``lam``."""
    t = Tower.rational(var)
    x = t.gen(var)
    t, lam = t.extend(Kind.LOG, x)
    return t, t.coerce(x), lam


def _lambda_index(t: Tower) -> int:
    x = t.indeterminates
    if not x:
        raise StructuralError("tower has no indeterminate")
    i = t.find(Kind.LOG, t.gen(x[0]))
    if i is None:
        raise StructuralError("tower does not contain log of its indeterminate")
    return t.index(i)


# -- R_n recurrence ------------------------------------------------------------

def polylog_poly_antiderivative(P, tower: Tower | None = None) -> TowerElem:
    """Antiderivative of ``P(log x)`` for ``P`` with constant coefficients.

    ``P`` is a coefficient list (low to high), a :class:`Poly` or an element
    of ``Q(x)(log x)`` that is polynomial in ``lam`` with constant
    coefficients.
    """
    if tower is None:
        tower = P.tower if isinstance(P, TowerElem) else log_tower()[0]
    t = tower
    li = _lambda_index(t)
    x = t.gen(t.indeterminates[0])
    lam = t.gen(li)
    coeffs = _lambda_coeffs(t, P, li)
    out = t.zero()
    R = x
    for n, c in enumerate(coeffs):
        if n:
            R = x * lam ** n - n * R
        if c:
            out = out + c * R
    return out


def _lambda_coeffs(t: Tower, P, li: int) -> list[TowerElem]:
    if isinstance(P, TowerElem):
        r = t.as_ratfunc(t.coerce(P), li)
        if r.den.degree != 0:
            raise DomainError("P must be a polynomial in log x")
        coeffs = [TowerElem(t, c / r.den.lc) for c in r.num.coeffs]
    elif isinstance(P, Poly):
        coeffs = [t.coerce(c) for c in P.coeffs]
    else:
        coeffs = [t.coerce(c) for c in P]
    for c in coeffs:
        if c.derive():
            raise DomainError(f"coefficient {c} is not constant; outside the R_n recurrence")
    return coeffs


# -- poles ------------------------------------------------------------------

@dataclass(frozen=True)
class Pole:
    location: TowerElem
    order: int
    top: TowerElem
    residue: TowerElem


@dataclass(frozen=True)
class PoleProfile:
    """Poles in ``lam`` with their leading and order-one coefficients."""

    poles: tuple
    polynomial: TowerElem
    expansion: PartialFractions

    def at(self, beta) -> Pole | None:
        for p in self.poles:
            if p.location == beta:
                return p
        return None

    def order(self, beta) -> int:
        p = self.at(beta)
        return p.order if p else 0

    def residue(self, beta) -> TowerElem:
        p = self.at(beta)
        return p.residue if p else self.polynomial.tower.zero()


def pole_profile(z: TowerElem, provider: RootProvider | None = None) -> PoleProfile:
    """Partial fractions of ``z`` in ``lam = log x`` with coefficients in the base."""
    t = z.tower
    li = _lambda_index(t)
    r = t.as_ratfunc(z, li)
    roots = resolve_roots(r.den, provider) if r.den.degree > 0 else []
    pf = partial_fractions(r, roots)
    poles = []
    for root, mult in roots:
        top = pf.coefficient(root, mult)
        for order in range(mult, 0, -1):
            if pf.coefficient(root, order):
                top = pf.coefficient(root, order)
                break
        else:
            continue
        poles.append(Pole(TowerElem(t, root), order, TowerElem(t, top),
                          TowerElem(t, pf.coefficient(root, 1))))
    return PoleProfile(tuple(poles), t.from_ratfunc(pf.poly_part, li), pf)


@dataclass(frozen=True)
class GrowthReport:
    profile: PoleProfile
    derivative_profile: PoleProfile
    orders_increment: bool
    no_simple_poles: bool

    @property
    def holds(self) -> bool:
        return self.orders_increment and self.no_simple_poles


def derivative_pole_growth(z: TowerElem, provider: RootProvider | None = None) -> GrowthReport:
    """Compare the pole profile of ``z`` with that of ``z'``."""
    t = z.tower
    lam = t.gen(_lambda_index(t))
    prof = pole_profile(z, provider)
    for p in prof.poles:
        if not (lam - p.location).derive():
            raise DomainError(f"pole {p.location} has derivative 1/x")
    dprof = pole_profile(z.derive(), provider)
    increments = len(dprof.poles) == len(prof.poles) and all(
        dprof.order(p.location) == p.order + 1 for p in prof.poles)
    no_simple = all(p.order >= 2 for p in dprof.poles)
    return GrowthReport(prof, dprof, increments, no_simple)


# -- bounded search -----------------------------------------------------------

@dataclass(frozen=True)
class InconsistencyCertificate:
    """The ansatz has no solution; ``witness`` combines rows into ``0 = contradiction``."""

    bounds: tuple
    shape: tuple
    system: LinearSystem
    witness: dict
    contradiction: object
    candidates: tuple = ()

    def replay(self) -> tuple[dict, object]:
        return self.system.replay(self.witness)

    def replays(self) -> bool:
        row, rhs = self.replay()
        return not row and bool(rhs)


@dataclass(frozen=True)
class CandidateDatum:
    """A datum found by the search, checked and integrated."""

    v: TowerElem
    datum: DExpressionData
    verdict: Verdict
    tower: Tower
    antiderivative: TowerElem


def as_log_integrand(H, t: Tower | None = None) -> TowerElem:
    """``H(log x)`` in ``Q(x)(log x)``.

    ``H`` may be an element of a log tower already, a rational function of a
    single indeterminate (such as ``Y``) with rational coefficients, or a
    ``(numerator, denominator)`` pair of coefficient lists.
    """
    if t is None:
        t = log_tower()[0]
    if isinstance(H, TowerElem):
        src = H.tower
        ys = src.indeterminates
        if ys and src.find(Kind.LOG, src.gen(ys[0])) is not None:
            return t.coerce(H)
        if len(ys) != 1 or src.involved(H.value) - {src.index(ys[0])}:
            raise DomainError("H must be a rational function of one variable with rational coefficients")
        r = src.as_ratfunc(H, ys[0])
        H = ([_ground(c) for c in r.num.coeffs], [_ground(c) for c in r.den.coeffs])
    num, den = H if isinstance(H, tuple) else (H, [1])
    lam = t.gen(_lambda_index(t))
    return _horner(t, num, lam) / _horner(t, den, lam)


def _ground(c):
    num, den = c.numer, c.denom
    if any(any(m) for m in num.monoms()) or any(any(m) for m in den.monoms()):
        raise DomainError("H must have rational coefficients")
    return (num.LC if num else 0) / den.LC


def _horner(t: Tower, coeffs, lam: TowerElem) -> TowerElem:
    acc = t.zero()
    for c in reversed(list(coeffs)):
        acc = acc * lam + t.coerce(t.field.ground_new(c) if not isinstance(c, int) else c)
    return acc


def _candidate_gs(t: Tower, x: TowerElem, lam: TowerElem, betas) -> list[TowerElem]:
    out = []
    for beta in betas:
        for s, a, b in product((1, -1), (-1, 0, 1), (-1, 0, 1)):
            g = s * x ** a * (lam - beta) ** b
            if g.derive() and g != 1 and all(g != h for h in out):
                out.append(g)
    return out


def _ansatz(x: TowerElem, lam: TowerElem, betas, M: int, N: int) -> list[TowerElem]:
    lam_part = [lam ** p for p in range(M + 1)]
    lam_part += [(lam - beta) ** -q for beta in betas for q in range(1, M + 1)]
    return [x ** i * e for i in range(-N, N + 1) for e in lam_part]


def bounded_no_del_search(H, bounds: Sequence[int] = (2, 3), extra_betas: Sequence = (),
                          provider: RootProvider | None = None):
    """Search for a D-expression of ``H(log x)`` within a bounded ansatz.

    ``bounds = (M, N)`` cap the powers of ``lam`` (and pole orders) at ``M``
    and the powers of ``x`` at ``N``.  Candidate ``g`` are ``+-x^a (lam-beta)^b``
    with ``a, b`` in ``{-1, 0, 1}`` and ``beta`` among the poles of ``H``,
    ``0`` and ``extra_betas``.  The remainder ``w`` and every ``r_i`` range
    over ``x^i * {lam^p, (lam-beta)^-q}``.
    """
    M, N = bounds
    if M <= 0 or N <= 0:
        raise ValueError("bounds must be positive")
    t, x, lam = log_tower()
    v = as_log_integrand(H, t)
    prof = pole_profile(v, provider)
    r = t.as_ratfunc(v, _lambda_index(t))
    poly_deg = r.num.degree - r.den.degree
    if any(p.location.derive() for p in prof.poles):
        raise DomainError("poles of H must be constant")
    if (v and poly_deg > M) or any(p.order > M for p in prof.poles):
        raise ValueError(f"bounds {tuple(bounds)} are too small to express H")
    betas = [t.zero()]
    for beta in [p.location for p in prof.poles] + [t.coerce(b) for b in extra_betas]:
        if all(beta != b for b in betas):
            betas.append(beta)
    basis = _ansatz(x, lam, betas, M, N)
    wnames = [("w", p) for p in range(len(basis))]
    form_v = LinForm.known(v)
    for name, e in zip(wnames, basis):
        form_v = form_v - LinForm.unknown(name, e.derive())
    first = solve_constants(form_v, wnames, t, track=False)
    if first.consistent:
        w = _combine(t, first.values, wnames, basis)
        return _candidate(t, v, DExpressionData(w=w))
    gs = _candidate_gs(t, x, lam, betas)
    n = len(gs)
    rnames = [[("r", i, p) for p in range(len(basis))] for i in range(n)]
    cnames = [("c", i) for i in range(n)]
    sym = {(i, l): ("cc", min(i, l), max(i, l)) for i in range(n) for l in range(n)}
    logd = [t.log_derivative(g) for g in gs]
    logd1 = [t.log_derivative(1 - g) for g in gs]
    dbasis = [e.derive() for e in basis]
    forms = [form_v]
    for i in range(n):
        for name, e in zip(rnames[i], basis):
            forms[0] = forms[0] - LinForm.unknown(name, e * logd[i])
        fi = LinForm.unknown(cnames[i], -logd1[i])
        for name, de in zip(rnames[i], dbasis):
            fi = fi + LinForm.unknown(name, de)
        for l in range(n):
            fi = fi - LinForm.unknown(sym[i, l], logd[l])
        forms.append(fi)
    unknowns = wnames + [u for row in rnames for u in row] + cnames + sorted(set(sym.values()))
    sol = solve_constants(forms, unknowns, t)
    if not sol.consistent:
        return InconsistencyCertificate(
            bounds=(M, N), shape=sol.system.shape, system=sol.system,
            witness=dict(sol.result.witness), contradiction=sol.result.contradiction,
            candidates=tuple(gs))
    values = sol.values
    w = _combine(t, values, wnames, basis)
    keep = [i for i in range(n)
            if any(values[u] for u in rnames[i]) or values[cnames[i]]
            or any(values[sym[i, l]] for l in range(n))]
    datum = DExpressionData(
        dilog=[(_combine(t, values, rnames[i], basis), gs[i]) for i in keep],
        w=w,
        c=[values[cnames[i]] for i in keep],
        c_matrix=[[values[sym[i, l]] for l in keep] for i in keep],
    )
    return _candidate(t, v, datum)


def _combine(t: Tower, values: dict, names, basis) -> TowerElem:
    acc = t.zero()
    for name, e in zip(names, basis):
        c = values[name]
        if c:
            acc = acc + c * e
    return acc


def _candidate(t: Tower, v: TowerElem, datum: DExpressionData) -> CandidateDatum:
    verdict = check_del_expression(v, datum)
    if not verdict:
        raise IdentityViolation(f"search produced a datum the checker rejects: {verdict.diagnostic}")
    tower, u = build_antiderivative(verdict.data, v)
    if u.derive() != tower.coerce(v):
        raise IdentityViolation("antiderivative of the found datum does not differentiate back")
    return CandidateDatum(v, verdict.data, verdict, tower, u)
