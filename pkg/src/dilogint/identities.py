"""Logarithmic and dilogarithmic identities for ``f`` in ``F(theta)``.

Write ``f = eta*P/Q`` and ``1 - f = xi*R/Q`` with ``P, Q, R`` monic in
``theta``.  Over the roots ``alpha_1..alpha_t`` of ``P``, ``Q`` and ``R``
(in that order) this gives exponent vectors ``a`` and ``b`` with

    f = eta * prod (theta - alpha_j)^a_j,    1 - f = xi * prod (theta - alpha_j)^b_j.

Identities are checked at derivative level.  Unknown constants are solved
by linear algebra after rewriting logs over a basis of irreducible factors,
and the result is an :class:`IdentityCertificate` that can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import Poly, RootProvider, resolve_roots
from .errors import DecompositionFailed, DomainError, IdentityViolation, StructuralError
from .solving import LinForm, reduce_logs, solve_constants
from .tower import Kind, Monomial, Tower, TowerElem, common_tower


@dataclass(frozen=True)
class PartialFractionShape:
    """Factored forms of ``f`` and ``1 - f`` over the roots of ``P``, ``Q`` and ``R``."""

    tower: Tower
    theta: Monomial
    f: TowerElem
    eta: TowerElem
    xi: TowerElem
    roots: tuple
    a: tuple
    b: tuple
    m: int
    n: int
    P: Poly
    Q: Poly
    R: Poly

    @property
    def t(self) -> int:
        return len(self.roots)

    @property
    def theta_elem(self) -> TowerElem:
        return self.tower.gen(self.theta)

    def linear(self, j: int) -> TowerElem:
        """``theta - alpha_j`` (0-based index)."""
        return self.theta_elem - self.roots[j]

    def recombine(self) -> tuple[TowerElem, TowerElem]:
        t = self.tower
        f = t.coerce(self.eta)
        g = t.coerce(self.xi)
        for j in range(self.t):
            f = f * self.linear(j) ** self.a[j]
            g = g * self.linear(j) ** self.b[j]
        return f, g

    def is_consistent(self) -> bool:
        f, g = self.recombine()
        return f == self.f and g == 1 - self.f

    def degree_condition(self) -> bool:
        return self.P.degree <= self.Q.degree


@dataclass
class IdentityCertificate:
    """Solved constants plus the derivative residual of ``lhs - rhs``.

    ``lhs`` and ``rhs`` already have the solved constants substituted, so
    :meth:`replay` only differentiates and rewrites logs.
    """

    tower: Tower
    lhs: TowerElem
    rhs: TowerElem
    constants: dict = field(default_factory=dict)
    residual: TowerElem | None = None
    terms: tuple = ()

    def replay(self) -> TowerElem:
        t = common_tower(self.lhs, self.rhs)
        diff = t.coerce(self.lhs).derive() - t.coerce(self.rhs).derive()
        _, (reduced,) = reduce_logs(t, [diff])
        return reduced

    @property
    def holds(self) -> bool:
        return self.residual is not None and not self.residual and not self.replay()


# -- shapes ------------------------------------------------------------------

def _top(t: Tower, f: TowerElem) -> int:
    involved = t.involved(f.value)
    candidates = [i for i in involved if not t.monomials[i].constant]
    if not candidates:
        raise DecompositionFailed("f is constant")
    return max(candidates)


def _theta_index(t: Tower, theta) -> int:
    if isinstance(theta, TowerElem):
        for i, g in enumerate(t.gens):
            if g == t.coerce(theta).value:
                return i
        raise StructuralError(f"{theta} is not a generator")
    return t.index(theta)


def decompose_pair(f: TowerElem, provider: RootProvider | None = None, theta=None) -> PartialFractionShape:
    """Shape of ``f`` and ``1 - f`` in ``theta`` (default: the newest monomial of ``f``)."""
    t = f.tower
    if f == 0 or f == 1:
        raise DecompositionFailed("f must not be 0 or 1")
    i = _theta_index(t, theta) if theta is not None else _top(t, f)
    mono = t.monomials[i]
    r = t.as_ratfunc(f, i)
    if r.num.degree <= 0 and r.den.degree <= 0:
        raise DecompositionFailed(f"f does not depend on {mono}")
    for poly in (r.num, r.den):
        for c in poly.coeffs:
            if i in t.involved(c):
                raise StructuralError("coefficient depends on theta")
    lc_n, lc_d = r.num.lc, r.den.lc
    Q = r.den.monic()
    P = r.num.monic()
    eta = lc_n / lc_d
    S = Q - P.scale(eta)
    if S.is_zero():
        raise DecompositionFailed("f equals 1")
    xi = S.lc
    R = S.monic()
    roots, a, b = [], [], []
    for root, mult in resolve_roots(P, provider) if P.degree > 0 else []:
        roots.append(root)
        a.append(mult)
        b.append(0)
    m = len(roots)
    for root, mult in resolve_roots(Q, provider) if Q.degree > 0 else []:
        roots.append(root)
        a.append(-mult)
        b.append(-mult)
    n = len(roots)
    for root, mult in resolve_roots(R, provider) if R.degree > 0 else []:
        roots.append(root)
        a.append(0)
        b.append(mult)
    if any(x == y for x, y in combinations(roots, 2)):
        raise DomainError("roots of P, Q and R are not distinct")
    shape = PartialFractionShape(
        tower=t, theta=mono, f=f, eta=TowerElem(t, eta), xi=TowerElem(t, xi),
        roots=tuple(TowerElem(t, x) for x in roots), a=tuple(a), b=tuple(b),
        m=m, n=n, P=P, Q=Q, R=R,
    )
    if not shape.is_consistent():
        raise DecompositionFailed("recombination check failed")
    return shape


# -- log helpers ---------------------------------------------------------------

def _log(t: Tower, h: TowerElem) -> tuple[Tower, TowerElem]:
    """``log(h)`` with ``log(1) = 0``."""
    h = t.coerce(h)
    if h == 1:
        return t, t.zero()
    return t.extend(Kind.LOG, h)


def _dilog(t: Tower, g: TowerElem) -> tuple[Tower, TowerElem]:
    """``dilog(g)``; for ``g = 1`` a constant symbol ``zeta2`` stands in."""
    g = t.coerce(g)
    if g == 1:
        if t.name_lookup("zeta2") is None:
            t = t.add_constant("zeta2")
        return t, t.gen("zeta2")
    return t.extend(Kind.DILOG, g)


# -- logarithmic identities --------------------------------------------------------

def _pairs(tsize: int):
    return [(j, k) for j in range(tsize) for k in range(tsize) if j != k]


def verify_log_identity(shape: PartialFractionShape, vs, which: str = "i") -> IdentityCertificate:
    """Check the logarithmic identities for the coefficients ``v_1..v_t``.

    ``which="i"`` is the exact derivative form; ``which="ii"`` uses
    ``log(alpha_j - alpha_k)``, ``log eta`` and ``log xi`` and solves for the
    constants ``c_k``.
    """
    t = shape.tower
    vs = list(vs)
    if len(vs) != shape.t:
        raise StructuralError(f"need {shape.t} coefficients v_k")
    t = common_tower(t.one(), *[x for x in vs if isinstance(x, TowerElem)])
    vs = [t.coerce(x) for x in vs]
    al = [t.coerce(x) for x in shape.roots]
    a, b = shape.a, shape.b
    eta, xi = t.coerce(shape.eta), t.coerce(shape.xi)
    if which == "i":
        lhs = t.zero()
        for j, k in _pairs(shape.t):
            diff = al[j] - al[k]
            if not diff:
                raise DomainError("repeated roots")
            lhs = lhs + (a[k] * b[j] - a[j] * b[k]) * (diff.derive() / diff) * vs[k]
        rhs = t.zero()
        for k in range(shape.t):
            rhs = rhs + (b[k] * t.log_derivative(eta) - a[k] * t.log_derivative(xi)) * vs[k]
        return IdentityCertificate(t, lhs, rhs, {}, lhs - rhs)
    if which != "ii":
        raise ValueError("which must be 'i' or 'ii'")
    lhs = t.zero()
    for j, k in _pairs(shape.t):
        coeff = a[k] * b[j] - a[j] * b[k]
        if coeff:
            t, lg = _log(t, al[j] - al[k])
            lhs = t.coerce(lhs) + coeff * lg * vs[k]
    t, log_eta = _log(t, eta)
    t, log_xi = _log(t, xi)
    known = t.zero()
    for k in range(shape.t):
        known = known + (b[k] * log_eta - a[k] * log_xi) * t.coerce(vs[k])
    names = [("c", k + 1) for k in range(shape.t)]
    form = LinForm.known(t.coerce(lhs) - known)
    for name, v in zip(names, vs):
        form = form - LinForm.unknown(name, t.coerce(v))
    sol = solve_constants(form, names, t, reduce=True)
    if not sol.consistent:
        raise IdentityViolation("no constants c_k satisfy identity (ii)")
    rhs = known
    for name, v in zip(names, vs):
        rhs = rhs + sol.values[name] * t.coerce(v)
    tt = sol.tower
    _, (res,) = reduce_logs(tt, [tt.coerce(lhs) - tt.coerce(rhs)])
    return IdentityCertificate(tt, tt.coerce(lhs), tt.coerce(rhs), dict(sol.values), res)


# -- S1 and S2 ------------------------------------------------------------------

@dataclass(frozen=True)
class SCheck:
    s1: TowerElem
    s2: TowerElem
    s1_constant: bool
    s2_constant: bool

    def __iter__(self):
        return iter((self.s1_constant, self.s2_constant))


def _zero_mod_logs(t: Tower, e: TowerElem) -> bool:
    if not e:
        return True
    _, (r,) = reduce_logs(t, [e])
    return not r


def check_S1_S2(shape: PartialFractionShape) -> SCheck:
    """Build ``S_1`` and ``S_2`` and decide whether their derivatives vanish."""
    if not shape.degree_condition():
        raise DecompositionFailed("degree condition deg P <= deg Q fails")
    t = shape.tower
    eta, xi = shape.eta, shape.xi
    t, log_eta = _log(t, eta)
    t, log_xi = _log(t, xi)
    t, l2_eta = _dilog(t, eta)
    sa, sb = sum(shape.a), sum(shape.b)
    log_eta, log_xi = t.coerce(log_eta), t.coerce(log_xi)
    s1 = sa * l2_eta + sa * log_eta * log_xi - sb * log_eta ** 2 / 2
    s2 = sa * log_xi - sb * log_eta
    return SCheck(s1, s2, _zero_mod_logs(t, s1.derive()), _zero_mod_logs(t, s2.derive()))


# -- dilog decomposition --------------------------------------------------------

@dataclass(frozen=True)
class DilogDecomposition:
    """``dilog(f)`` rewritten over ratios of the linear factors.

    ``terms`` lists ``(coefficient, label, element)`` for every summand of
    ``rhs``; the additive constant ``c`` is left out.
    """

    shape: PartialFractionShape
    lhs: TowerElem
    rhs: TowerElem
    terms: tuple


def _eta_term(t: Tower, shape: PartialFractionShape, log_eta, log_xi):
    """The summand that integrates ``-(eta'/eta) log(xi)``."""
    eta = t.coerce(shape.eta)
    if eta == 1:
        return t, t.zero(), "0"
    if shape.P.degree == shape.Q.degree:
        t, l2 = _dilog(t, eta)
        return t, l2, "dilog(eta)"
    return t, -t.coerce(log_xi) * t.coerce(log_eta), "-log(xi)*log(eta)"


def reduce_dilog(f: TowerElem, provider: RootProvider | None = None, theta=None):
    """Decompose ``dilog(f)`` and certify the identity at derivative level.

    Returns ``(tower, decomposition, certificate)``.  The constants ``d_k``
    and ``e`` are solved; the additive constant is dropped.
    """
    shape = decompose_pair(f, provider, theta)
    if not shape.degree_condition():
        raise DecompositionFailed("degree condition deg P <= deg Q fails")
    t = shape.tower
    size, a, b = shape.t, shape.a, shape.b
    logs = []
    for j in range(size):
        t, lg = _log(t, shape.linear(j))
        logs.append(lg)
    t, lhs = _dilog(t, shape.f)
    t, log_eta = _log(t, shape.eta)
    t, log_xi = _log(t, shape.xi)
    t, eta_term, eta_label = _eta_term(t, shape, log_eta, log_xi)
    terms = [(1, eta_label, eta_term)]
    known = t.coerce(eta_term)
    for j, k in _pairs(size):
        if a[j] * b[k]:
            t, l2 = _dilog(t, t.coerce(shape.linear(j)) / t.coerce(shape.linear(k)))
            known = t.coerce(known) - a[j] * b[k] * l2
            terms.append((-a[j] * b[k], f"dilog((theta-alpha_{j + 1})/(theta-alpha_{k + 1}))", l2))
    logs = [t.coerce(x) for x in logs]
    log_eta = t.coerce(log_eta)
    for j in range(size):
        for k in range(size):
            if a[j] * b[k]:
                known = known - a[j] * b[k] * logs[k] ** 2 / 2
    for k in range(size):
        if b[k]:
            known = known - b[k] * logs[k] * log_eta
    lhs = t.coerce(lhs)
    names = [("d", k + 1) for k in range(size)]
    form = LinForm.known(lhs.derive() - known.derive())
    if log_eta:
        form = form + LinForm.unknown("e", log_eta.derive())
    for name, lg in zip(names, logs):
        form = form - LinForm.unknown(name, lg.derive())
    unknowns = names + (["e"] if log_eta else [])
    sol = solve_constants(form, unknowns, t, reduce=True)
    if not sol.consistent:
        raise IdentityViolation("no constants d_k, e make the dilog decomposition hold")
    tt = sol.tower
    rhs = tt.coerce(known)
    if log_eta:
        rhs = rhs - sol.values["e"] * tt.coerce(log_eta)
    for name, lg in zip(names, logs):
        rhs = rhs + sol.values[name] * tt.coerce(lg)
    cert = _certify(tt, lhs, rhs, sol.values)
    dec = DilogDecomposition(shape, cert.lhs, cert.rhs, tuple(terms))
    return cert.tower, dec, cert


def _certify(t: Tower, lhs: TowerElem, rhs: TowerElem, constants: dict) -> IdentityCertificate:
    t = common_tower(t.one(), lhs, rhs)
    lhs, rhs = t.coerce(lhs), t.coerce(rhs)
    t2, (res,) = reduce_logs(t, [lhs.derive() - rhs.derive()])
    return IdentityCertificate(t, lhs, rhs, dict(constants), res)


# -- inversion relation ---------------------------------------------------------

def default_theta(t: Tower, *values) -> tuple[Tower, TowerElem]:
    """The variable ``theta`` used when none is given.

    Constant values sit below the indeterminate itself; otherwise
    ``theta = log x`` is adjoined above them.
    """
    x = t.indeterminates
    if not x:
        raise StructuralError("tower has no indeterminate")
    xg = t.gen(x[0])
    if all(t.coerce(v).is_constant() for v in values):
        return t, xg
    return t.extend(Kind.LOG, xg)


def invert_dilog(alpha_j: TowerElem, alpha_k: TowerElem, theta: TowerElem | None = None):
    """Certify the inversion relation between the two ratio dilogs.

    Returns ``(tower, identity, certificate)`` where ``identity`` is the
    derivative-zero combination with ``d`` substituted.
    """
    t = common_tower(*[v for v in (alpha_j, alpha_k, theta) if isinstance(v, TowerElem)])
    alpha_j, alpha_k = t.coerce(alpha_j), t.coerce(alpha_k)
    if alpha_j == alpha_k:
        raise DomainError("alpha_j and alpha_k must differ")
    if theta is None:
        t, theta = default_theta(t, alpha_j, alpha_k)
    theta = t.coerce(theta)
    lj_arg, lk_arg = theta - t.coerce(alpha_j), theta - t.coerce(alpha_k)
    t, lj = _log(t, lj_arg)
    t, lk = _log(t, lk_arg)
    t, d1 = _dilog(t, t.coerce(lj_arg) / t.coerce(lk_arg))
    t, d2 = _dilog(t, t.coerce(lk_arg) / t.coerce(lj_arg))
    lj, lk = t.coerce(lj), t.coerce(lk)
    known = t.coerce(d1) + d2 - lj * lk + (lj ** 2 + lk ** 2) / 2
    form = LinForm.known(known.derive()) - LinForm.unknown("d", (lj - lk).derive())
    sol = solve_constants(form, ["d"], t, reduce=True)
    if not sol.consistent:
        raise IdentityViolation("no constant d satisfies the inversion relation")
    tt = sol.tower
    identity = tt.coerce(known) - sol.values["d"] * (tt.coerce(lj) - tt.coerce(lk))
    cert = _certify(tt, identity, tt.zero(), sol.values)
    return cert.tower, identity, cert


# -- independence probe -------------------------------------------------------------

@dataclass(frozen=True)
class NoRelationFound:
    """The bounded linear system has no solution."""

    unknowns: int
    equations: int
    witness: object = None

    def __bool__(self):
        return False


@dataclass(frozen=True)
class RelationCandidate:
    """Constants ``c_jk`` and an ansatz element ``v`` satisfying the relation."""

    constants: dict
    v: TowerElem
    certificate: IdentityCertificate

    def __bool__(self):
        return True


def ratio_pairs(size: int) -> list[tuple[int, int]]:
    """Index pairs ``(j, k)`` with ``k > j`` (0-based)."""
    return list(combinations(range(size), 2))


def independence_probe(alphas, bounds=(2, 2), theta: TowerElem | None = None):
    """Look for a relation among the ratio dilogs within a bounded ansatz.

    ``bounds = (M, N)`` caps the total log degree of ``v`` at ``M`` and its
    rational part at ``theta^N`` and ``(theta - alpha_j)^-N``.
    """
    M, N = bounds
    if M <= 0 or N <= 0:
        raise ValueError("bounds must be positive")
    alphas = list(alphas)
    size = len(alphas)
    pairs = ratio_pairs(size)
    if size < 2:
        raise StructuralError("need at least two alphas")
    if size == 2:
        return NoRelationFound(0, 0)
    t = common_tower(*[v for v in (*alphas, theta) if isinstance(v, TowerElem)])
    alphas = [t.coerce(v) for v in alphas]
    if any(x == y for x, y in combinations(alphas, 2)):
        raise DomainError("alphas must be distinct")
    if theta is None:
        t, theta = default_theta(t, *alphas)
    theta = t.coerce(theta)
    _check_theta(t, theta)
    lins = [theta - t.coerce(a) for a in alphas]
    logs = []
    for lin in lins:
        t, lg = _log(t, lin)
        logs.append(lg)
    dilogs = {}
    for j, k in pairs:
        t, dl = _dilog(t, t.coerce(lins[j]) / t.coerce(lins[k]))
        dilogs[j, k] = dl
    theta = t.coerce(theta)
    logs = [t.coerce(x) for x in logs]
    lins = [t.coerce(x) for x in lins]
    rational = [theta ** p for p in range(N + 1)]
    rational += [lin ** -q for lin in lins for q in range(1, N + 1)]
    log_monos = _log_monomials(t, logs, M)
    form = LinForm.known(t.coerce(dilogs[pairs[0]]).derive())
    unknowns = []
    for jk in pairs[1:]:
        name = ("c", jk[0] + 1, jk[1] + 1)
        unknowns.append(name)
        form = form - LinForm.unknown(name, t.coerce(dilogs[jk]).derive())
    basis = {}
    for p, lm in enumerate(log_monos):
        for q, rat in enumerate(rational):
            name = ("v", p, q)
            basis[name] = lm * rat
            unknowns.append(name)
            form = form - LinForm.unknown(name, (lm * rat).derive())
    sol = solve_constants(form, unknowns, t, reduce=True)
    if not sol.consistent:
        return NoRelationFound(len(unknowns), sol.system.shape[0], sol.result)
    tt = sol.tower
    v = tt.zero()
    for name, elem in basis.items():
        v = v + sol.values[name] * tt.coerce(elem)
    rhs = v
    for jk in pairs[1:]:
        rhs = rhs + sol.values[("c", jk[0] + 1, jk[1] + 1)] * tt.coerce(dilogs[jk])
    cert = _certify(tt, tt.coerce(dilogs[pairs[0]]), rhs, sol.values)
    consts = {k: v for k, v in sol.values.items() if k[0] == "c"}
    return RelationCandidate(consts, v, cert)


def _log_monomials(t: Tower, logs, M: int) -> list[TowerElem]:
    out = [t.one()]
    frontier = [(t.one(), 0)]
    for _ in range(M):
        nxt = []
        for elem, start in frontier:
            for i in range(start, len(logs)):
                e = elem * logs[i]
                out.append(e)
                nxt.append((e, i))
        frontier = nxt
    return out


def _check_theta(t: Tower, theta: TowerElem) -> None:
    d = theta.derive()
    top = max(t.involved(theta.value), default=-1)
    below = set(range(top))
    if t.involved(d.value) <= below or t.involved((d / theta).value) <= below:
        return
    raise StructuralError("theta' or theta'/theta must lie in the base field")
