"""Command line front end.

Exit codes: 0 for success or acceptance, 1 for rejection, an
inconsistency or no relation found, 2 for usage, parse and input errors.
Results go to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from sympy import QQ, I

from .. import identities, liouville, obstruction
from ..errors import (DecompositionFailed, DomainError, IdentityViolation, InferenceFailed,
                      KernelError, ParseError, StructuralError, TowerError)
from ..tower import Tower, TowerElem
from .datum import dump_datum, load_datum, load_root_table, load_shape
from .parser import elaborate
from .printer import format_elem

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2


class Report:
    """Ordered key/value tree rendered as text or as flat ``key: value`` lines."""

    def __init__(self):
        self.items: list[tuple[str, object]] = []
        self.text: list[str] = []

    def put(self, key: str, value) -> None:
        self.items.append((key, value))

    def say(self, line: str) -> None:
        self.text.append(line)

    def render(self, fmt: str) -> str:
        if fmt == "text":
            return "\n".join(self.text)
        return "\n".join(f"{k}: {_render(v)}" for k, v in self.items)


def _render(v) -> str:
    if isinstance(v, TowerElem):
        return format_elem(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


class Session:
    """Tower state shared by the expressions of one invocation."""

    def __init__(self, args):
        self.var = args.var
        self.constants = [c.strip() for c in (args.const or "").split(",") if c.strip()]
        self.domain = QQ.algebraic_field(I) if args.gaussian else QQ
        self.tower = Tower.rational(self.var, constants=self.constants, domain=self.domain)
        self.provider = None
        table = os.environ.get("DILOG_ROOTS")
        if table:
            self.provider = load_root_table(Path(table).read_text(), self.tower)

    def expr(self, text: str) -> TowerElem:
        self.tower, e = elaborate(text, self.tower)
        return e

    def exprs(self, text: str) -> list[TowerElem]:
        return [self.expr(p) for p in text.split(",") if p.strip()]

    @property
    def session_kwargs(self) -> dict:
        return {"var": self.var, "constants": self.constants, "domain": self.domain}


def _bounds(text: str) -> tuple[int, int]:
    try:
        m, n = (int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("bounds are written M,N") from None
    if m <= 0 or n <= 0:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return m, n


# -- commands ------------------------------------------------------------------

def cmd_derive(s: Session, args, out: Report) -> int:
    e = s.expr(args.expr)
    d = e.derive()
    out.put("input", e)
    out.put("derivative", d)
    out.say(format_elem(d))
    return EXIT_OK


def _put_constants(out: Report, d: liouville.DExpressionData) -> None:
    for i, (ci, row) in enumerate(zip(d.c or (), d.c_matrix or ()), 1):
        out.put(f"constants.c.{i}", ci)
        for l, x in enumerate(row, 1):
            out.put(f"constants.c_matrix.{i}.{l}", x)


def cmd_check_del(s: Session, args, out: Report) -> int:
    t, d = load_datum(Path(args.datum).read_text(), **s.session_kwargs)
    t, v = elaborate(args.target, t)
    verdict = liouville.check_del_expression(v, d)
    out.put("result", "accept" if verdict else "reject")
    if verdict:
        out.say("accept")
        _put_constants(out, verdict.data)
        for i, ci in enumerate(verdict.data.c, 1):
            out.say(f"c_{i} = {format_elem(ci)} | " +
                    ", ".join(format_elem(x) for x in verdict.data.c_matrix[i - 1]))
        return EXIT_OK
    diag = verdict.diagnostic
    out.put("diagnostic.equation", diag.equation)
    out.put("diagnostic.lhs", diag.lhs)
    out.put("diagnostic.rhs", diag.rhs)
    out.put("diagnostic.reason", diag.reason)
    out.say("reject")
    print(f"reject: {diag}", file=sys.stderr)
    return EXIT_REJECT


def cmd_integrate(s: Session, args, out: Report) -> int:
    _, d = load_datum(Path(args.datum).read_text(), **s.session_kwargs)
    v = liouville.del_expression_value(d)
    t, u = liouville.build_antiderivative(d, v)
    ok = u.derive() == t.coerce(v)
    out.put("integrand", v)
    out.put("antiderivative", u)
    out.put("verified", ok)
    out.say(format_elem(u))
    if not ok:
        print("antiderivative does not differentiate back to the integrand", file=sys.stderr)
        return EXIT_REJECT
    return EXIT_OK


def _put_certificate(out: Report, cert: identities.IdentityCertificate, prefix: str = "") -> None:
    for name, value in cert.constants.items():
        label = name if isinstance(name, str) else "_".join(str(p) for p in name)
        out.put(f"{prefix}constants.{label}", value)
    out.put(f"{prefix}residual", cert.residual)


def cmd_reduce_dilog(s: Session, args, out: Report) -> int:
    f = s.expr(args.expr)
    theta = s.expr(args.theta) if args.theta else None
    _, dec, cert = identities.reduce_dilog(f, s.provider, theta)
    sh = dec.shape
    out.put("shape.eta", sh.eta)
    out.put("shape.xi", sh.xi)
    for j, (root, a, b) in enumerate(zip(sh.roots, sh.a, sh.b), 1):
        out.put(f"shape.alpha.{j}", root)
        out.put(f"shape.a.{j}", a)
        out.put(f"shape.b.{j}", b)
    out.put("lhs", dec.lhs)
    out.put("rhs", dec.rhs)
    _put_certificate(out, cert)
    out.say(f"{format_elem(dec.lhs)} = {format_elem(dec.rhs)} + c")
    for name, value in cert.constants.items():
        out.say(f"{name[0]}_{name[1]} = {format_elem(value)}" if isinstance(name, tuple)
                else f"{name} = {format_elem(value)}")
    return EXIT_OK if not cert.residual else EXIT_REJECT


def cmd_invert_dilog(s: Session, args, out: Report) -> int:
    a, b = s.expr(args.alpha), s.expr(args.beta)
    theta = s.expr(args.theta) if args.theta else None
    _, identity, cert = identities.invert_dilog(a, b, theta)
    out.put("identity", identity)
    _put_certificate(out, cert)
    out.say(f"{format_elem(identity)} = constant")
    out.say(f"d = {format_elem(cert.constants['d'])}")
    return EXIT_OK if not cert.residual else EXIT_REJECT


def cmd_verify_log_identity(s: Session, args, out: Report) -> int:
    sf = load_shape(Path(args.shape).read_text(), **s.session_kwargs)
    shape = identities.decompose_pair(sf.f, s.provider, sf.theta)
    vs = list(sf.vs) or [sf.tower.one()] * shape.t
    which = ("i", "ii") if sf.identity == "both" else (sf.identity,)
    status = EXIT_OK
    for w in which:
        cert = identities.verify_log_identity(shape, vs, w)
        _put_certificate(out, cert, prefix=f"identity_{w}.")
        out.say(f"identity ({w}): residual {format_elem(cert.residual)}")
        if cert.residual:
            status = EXIT_REJECT
    return status


def cmd_obstruct(s: Session, args, out: Report) -> int:
    ty = Tower.rational("Y")
    ty, H = elaborate(args.h, ty)
    extras = [e for e in s.exprs(args.beta)] if args.beta else []
    res = obstruction.bounded_no_del_search(H, args.bounds, extras, s.provider)
    out.put("bounds", f"{args.bounds[0]},{args.bounds[1]}")
    if isinstance(res, obstruction.InconsistencyCertificate):
        row, rhs = res.replay()
        out.put("result", "inconsistent")
        out.put("system.equations", res.shape[0])
        out.put("system.unknowns", res.shape[1])
        out.put("witness.rows", len(res.witness))
        for k in sorted(res.witness):
            out.put(f"witness.{k}", res.witness[k])
        out.put("contradiction", f"0 = {rhs}")
        out.put("replays", res.replays())
        out.say(f"no D-expression within bounds {args.bounds[0]},{args.bounds[1]}: "
                f"{res.shape[0]} equations, {res.shape[1]} unknowns, "
                f"witness of {len(res.witness)} rows gives 0 = {rhs}")
        return EXIT_REJECT
    out.put("result", "datum")
    text = dump_datum(res.datum)
    for n, line in enumerate(text.splitlines(), 1):
        out.put(f"datum.{n}", line)
    out.put("antiderivative", res.antiderivative)
    out.say(text.rstrip())
    out.say(f"antiderivative: {format_elem(res.antiderivative)}")
    return EXIT_OK


def cmd_probe(s: Session, args, out: Report) -> int:
    alphas = s.exprs(args.alphas)
    theta = s.expr(args.theta) if args.theta else None
    res = identities.independence_probe(alphas, args.bounds, theta)
    if isinstance(res, identities.NoRelationFound):
        out.put("result", "no-relation")
        out.put("system.unknowns", res.unknowns)
        out.put("system.equations", res.equations)
        out.say(f"no relation found within bounds {args.bounds[0]},{args.bounds[1]} "
                f"({res.equations} equations, {res.unknowns} unknowns)")
        return EXIT_REJECT
    out.put("result", "relation")
    for name, value in res.constants.items():
        out.put(f"constants.c_{name[1]}{name[2]}", value)
    out.put("v", res.v)
    out.say(f"relation candidate: v = {format_elem(res.v)}")
    return EXIT_OK


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dilogint", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--var", default="x", help="name of the indeterminate (default x)")
    p.add_argument("--const", default="", help="comma separated constant symbols")
    p.add_argument("--gaussian", action="store_true", help="use QQ(i) as ground field")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("derive", help="differentiate an expression")
    c.add_argument("expr")
    c.set_defaults(func=cmd_derive)

    c = sub.add_parser("check-del", help="check a dilog datum against an integrand")
    c.add_argument("--target", required=True)
    c.add_argument("--datum", required=True)
    c.set_defaults(func=cmd_check_del)

    c = sub.add_parser("integrate", help="antiderivative from a datum")
    c.add_argument("--datum", required=True)
    c.set_defaults(func=cmd_integrate)

    c = sub.add_parser("reduce-dilog", help="decompose dilog(f)")
    c.add_argument("expr")
    c.add_argument("--theta")
    c.set_defaults(func=cmd_reduce_dilog)

    c = sub.add_parser("invert-dilog", help="inversion relation of ratio dilogs")
    c.add_argument("--alpha", required=True)
    c.add_argument("--beta", required=True)
    c.add_argument("--theta")
    c.set_defaults(func=cmd_invert_dilog)

    c = sub.add_parser("verify-log-identity", help="logarithmic identities for a shape file")
    c.add_argument("--shape", required=True)
    c.set_defaults(func=cmd_verify_log_identity)

    c = sub.add_parser("obstruct", help="bounded search for a D-expression of H(log x)")
    c.add_argument("--h", required=True, help="rational function of Y")
    c.add_argument("--bounds", type=_bounds, default=(2, 3))
    c.add_argument("--beta", help="extra pole locations, comma separated")
    c.set_defaults(func=cmd_obstruct)

    c = sub.add_parser("probe-independence", help="bounded search for a ratio dilog relation")
    c.add_argument("--alphas", required=True)
    c.add_argument("--bounds", type=_bounds, default=(2, 2))
    c.add_argument("--theta")
    c.set_defaults(func=cmd_probe)
    return p


_USAGE_ERRORS = (ParseError, StructuralError, TowerError, DomainError, DecompositionFailed,
                 ValueError, OSError)


_EXPR_OPTIONS = {"--target", "--alpha", "--beta", "--theta", "--h", "--alphas"}


def _glue_expression_options(argv: list[str]) -> list[str]:
    """Turn ``--target -x`` into ``--target=-x`` so leading minus signs survive argparse."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _EXPR_OPTIONS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_expression_options(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = Report()
    try:
        session = Session(args)
        code = args.func(session, args, out)
    except (InferenceFailed, IdentityViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rendered = out.render(args.format)
    if rendered:
        print(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
