"""Batch front-end: run declaration scripts and replay certificates.

Scripts are sequences of s-expressions::

    (decl x u nat)                 ; context binding, annotation optional (u)
    (def-opaque P r T body)        ; body checked against T, then P : T is bound
    (def-transparent f body)       ; f is inlined wherever it is used later
    (check t T) (infer t) (convert t u) (normalize t) (consistent)

Each command prints one report line. Exit status: 0 when everything succeeded,
1 when something was rejected, 2 on resource exhaustion or internal errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .syntax import KEYWORDS, Atom, Elaborator, ParseError, SExpr, SList, parse_annot, read_all, read_one
from .term import Annot, Context, Term

OK, REJECTED, RESOURCE = 0, 1, 2
DEFAULT_FUEL = 100_000
COMMANDS = ("check", "infer", "convert", "normalize", "consistent")
RESERVED = KEYWORDS | {"nat", "star", "box", "triangle", "eq", "+", "S", "_"}


# -- script model ------------------------------------------------------------------


@dataclass(frozen=True)
class Decl:
    name: str
    annot: Annot | None
    type: SExpr
    line: int


@dataclass(frozen=True)
class DefOpaque:
    name: str
    annot: Annot | None
    type: SExpr
    body: SExpr
    line: int


@dataclass(frozen=True)
class DefTransparent:
    name: str
    body: SExpr
    line: int


@dataclass(frozen=True)
class Command:
    kind: str
    payload: tuple
    line: int


Item = Decl | DefOpaque | DefTransparent | Command


def _name(x: SExpr) -> str:
    if not isinstance(x, Atom) or x.text in RESERVED or x.text.isdigit():
        raise ParseError("expected a name", x.line, x.col)
    return x.text


def _split_annot(args):
    """Optional annotation in front of the remaining arguments."""
    if args and parse_annot(args[0]) is not None:
        return parse_annot(args[0]), args[1:]
    return None, args


def parse_item(sx: SExpr) -> Item:
    if not isinstance(sx, SList) or not sx.items or not isinstance(sx.items[0], Atom):
        raise ParseError("expected a script item", sx.line, sx.col)
    head, args = sx.items[0].text, sx.items[1:]
    if head == "decl":
        if not args:
            raise ParseError("decl needs a name and a type", sx.line, sx.col)
        name = _name(args[0])
        annot, rest = _split_annot(args[1:])
        if len(rest) != 1:
            raise ParseError("decl takes a name, an optional annotation and a type", sx.line, sx.col)
        return Decl(name, annot, rest[0], sx.line)
    if head == "def-opaque":
        if not args:
            raise ParseError("def-opaque needs a name, a type and a body", sx.line, sx.col)
        name = _name(args[0])
        annot, rest = _split_annot(args[1:])
        if len(rest) != 2:
            raise ParseError("def-opaque takes a name, an optional annotation, a type and a body", sx.line, sx.col)
        return DefOpaque(name, annot, rest[0], rest[1], sx.line)
    if head == "def-transparent":
        if len(args) != 2:
            raise ParseError("def-transparent takes a name and a body", sx.line, sx.col)
        return DefTransparent(_name(args[0]), args[1], sx.line)
    arity = {"check": 2, "infer": 1, "convert": 2, "normalize": 1, "consistent": 0}
    if head in arity:
        if len(args) != arity[head]:
            raise ParseError(f"{head} takes {arity[head]} argument(s)", sx.line, sx.col)
        return Command(head, tuple(args), sx.line)
    raise ParseError(f"unknown item {head!r}", sx.line, sx.col)


def parse(source: str) -> list[Item]:
    """Parse a whole script; raises :class:`ParseError` with a position."""
    return [parse_item(sx) for sx in read_all(source)]


# -- running ------------------------------------------------------------------------


@dataclass
class Options:
    fuel: int = DEFAULT_FUEL
    emit_cert: Path | None = None
    verify_cert: Path | None = None
    explain: bool = False
    strict_iota_elim: bool = False


class Session:
    """A growing context plus transparent definitions."""

    def __init__(self):
        self.ctx = Context()
        self.defs: dict[str, Term] = {}

    def lookup(self, name: str):
        if name in self.ctx:
            return self.ctx[self.ctx.index(name)].sort
        return None

    def elaborate(self, sx: SExpr, default: Annot = Annot.U) -> Term:
        return Elaborator(self.lookup, self.defs, default).term(sx)

    def fresh(self, name: str, line: int) -> None:
        if name in self.ctx or name in self.defs:
            raise ParseError(f"{name!r} is already defined", line)


def _fmt_err(e) -> str:
    return e.describe() if hasattr(e, "describe") else str(e)


def context_script(ctx: Context) -> str:
    from .printer import show

    return "".join(f"(decl {b.name} {b.annot} {show(b.type)})\n" for b in ctx)


def load_context(source: str) -> Session:
    """Build a context from declarations without type checking (used by certificate replay)."""
    s = Session()
    for item in parse(source):
        if isinstance(item, Decl):
            s.fresh(item.name, item.line)
            s.ctx = s.ctx.extend(item.name, item.annot or Annot.U, s.elaborate(item.type))
        elif isinstance(item, DefOpaque):
            s.fresh(item.name, item.line)
            s.ctx = s.ctx.extend(item.name, item.annot or Annot.R, s.elaborate(item.type, Annot.R))
        elif isinstance(item, DefTransparent):
            s.fresh(item.name, item.line)
            s.defs[item.name] = s.elaborate(item.body)
    return s


def run(items: list[Item], opts: Options, out) -> int:
    from .congruence import ConversionFuelExhausted, convertible, is_consistent, state_for
    from .printer import show
    from .reduce import normalize
    from .typecheck import TypeError as KernelTypeError
    from .typecheck import check, check_binding, infer

    s = Session()
    status = OK
    certs = 0

    def emit(line: str) -> None:
        print(line, file=out)

    def worst(code: int) -> None:
        nonlocal status
        status = max(status, code)

    def reject_code(e) -> int:
        return RESOURCE if (e.kind == "fuel-exhausted" or e.incomplete) else REJECTED

    for item in items:
        try:
            if isinstance(item, Decl):
                s.fresh(item.name, item.line)
                T = s.elaborate(item.type)
                b = Context().extend(item.name, item.annot or Annot.U, T)[0]
                try:
                    check_binding(s.ctx, b, opts.fuel)
                except KernelTypeError as e:
                    emit(f"DECL fail {item.name} {_fmt_err(e)}")
                    worst(reject_code(e))
                    return status
                s.ctx = s.ctx.extend(b.name, b.annot, b.type)
            elif isinstance(item, DefOpaque):
                s.fresh(item.name, item.line)
                T = s.elaborate(item.type, Annot.R)
                body = s.elaborate(item.body, Annot.R)
                b = Context().extend(item.name, item.annot or Annot.R, T)[0]
                try:
                    check_binding(s.ctx, b, opts.fuel)
                    check(s.ctx, body, T, opts.fuel, strict_iota_elim=opts.strict_iota_elim)
                except KernelTypeError as e:
                    emit(f"DEF fail {item.name} {_fmt_err(e)}")
                    worst(reject_code(e))
                    return status
                s.ctx = s.ctx.extend(b.name, b.annot, b.type)
            elif isinstance(item, DefTransparent):
                s.fresh(item.name, item.line)
                body = s.elaborate(item.body)
                try:
                    infer(s.ctx, body, opts.fuel, strict_iota_elim=opts.strict_iota_elim)
                except KernelTypeError as e:
                    emit(f"DEF fail {item.name} {_fmt_err(e)}")
                    worst(reject_code(e))
                    return status
                s.defs[item.name] = body
            else:
                k = item.kind
                args = [s.elaborate(a) for a in item.payload]
                if k == "check":
                    try:
                        check(s.ctx, args[0], args[1], opts.fuel, strict_iota_elim=opts.strict_iota_elim)
                        emit("CHECK ok")
                    except KernelTypeError as e:
                        emit(f"CHECK fail {_fmt_err(e)}")
                        worst(reject_code(e))
                elif k == "infer":
                    try:
                        T = infer(s.ctx, args[0], opts.fuel, strict_iota_elim=opts.strict_iota_elim).type
                        r = normalize(T, opts.fuel)
                        emit(f"INFER {show(r.term)}")
                        if not r.normal:
                            worst(RESOURCE)
                    except KernelTypeError as e:
                        emit(f"INFER fail {_fmt_err(e)}")
                        worst(reject_code(e))
                elif k == "normalize":
                    r = normalize(args[0], opts.fuel)
                    if r.normal:
                        emit(f"NORMALIZE {show(r.term)}")
                    else:
                        emit(f"NORMALIZE fuel-exhausted after {r.steps} steps")
                        worst(RESOURCE)
                elif k == "convert":
                    try:
                        j = convertible(s.ctx, args[0], args[1], opts.fuel, certify=opts.emit_cert is not None)
                    except ConversionFuelExhausted as e:
                        emit(f"CONVERT unknown {e}")
                        worst(RESOURCE)
                        continue
                    if opts.explain:
                        for line in state_for(s.ctx, opts.fuel).extended(_normal_objects(args, opts.fuel)).trace:
                            emit(f"  {line}")
                    emit(f"CONVERT {j.status}")
                    worst({"yes": OK, "no": REJECTED, "unknown": RESOURCE}[j.status])
                    if j.verdict and opts.emit_cert is not None:
                        from .cert import dumps, emit as emit_cert

                        certs += 1
                        opts.emit_cert.mkdir(parents=True, exist_ok=True)
                        base = opts.emit_cert / f"cert-{certs}"
                        base.with_suffix(".cert").write_text(dumps(emit_cert(j)), encoding="utf-8")
                        base.with_suffix(".ctx").write_text(context_script(s.ctx), encoding="utf-8")
                elif k == "consistent":
                    st = state_for(s.ctx, opts.fuel)
                    if opts.explain:
                        for line in st.trace:
                            emit(f"  {line}")
                    c = is_consistent(s.ctx, opts.fuel)
                    emit("CONSISTENT " + {True: "yes", False: "no", None: "unknown"}[c])
                    if c is None:
                        worst(RESOURCE)
        except ParseError as e:
            emit(f"ERROR {e}")
            worst(REJECTED)
            if not isinstance(item, Command):
                return status
        except RecursionError:
            emit("ERROR recursion limit reached")
            worst(RESOURCE)
        except Exception as e:  # noqa: BLE001 - the exit-code contract covers internal faults
            emit(f"ERROR internal {type(e).__name__}: {e}")
            worst(RESOURCE)
    if opts.verify_cert is not None:
        ok, why = verify_file(opts.verify_cert, s.ctx, None)
        emit("VERIFY ok" if ok else f"VERIFY fail {why}")
        worst(OK if ok else REJECTED)
    return status


def _normal_objects(terms, fuel) -> list[Term]:
    from .reduce import normalize

    return [r.term for r in (normalize(t, fuel) for t in terms) if r.normal]


def verify_file(path: Path, ctx: Context, goal: tuple[Term, Term] | None):
    from .cert.model import CertificateFormatError, loads
    from .cert.verify import check_certificate

    try:
        cert = loads(Path(path).read_text(encoding="utf-8"), ctx)
    except (OSError, UnicodeDecodeError, CertificateFormatError) as e:
        return False, str(e)
    why = check_certificate(ctx, cert, *(goal or (None, None)))
    return why is None, why


def _goal(text: str, s: Session) -> tuple[Term, Term]:
    if "~" not in text:
        raise ParseError("goal must have the form 't ~ u'")
    a, _, b = text.partition("~")
    return s.elaborate(read_one(a)), s.elaborate(read_one(b))


# -- entry point ---------------------------------------------------------------------


def _fuel_default() -> int:
    env = os.environ.get("CCNAT_FUEL")
    if env:
        try:
            v = int(env)
            if v > 0:
                return v
        except ValueError:
            pass
    return DEFAULT_FUEL


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("fuel must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ccnat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a script")
    r.add_argument("file", type=Path)
    r.add_argument("--fuel", type=_positive, default=None, help="reduction budget (env CCNAT_FUEL)")
    r.add_argument("--emit-cert", type=Path, default=None, metavar="DIR")
    r.add_argument("--verify-cert", type=Path, default=None, metavar="FILE")
    r.add_argument("--explain", action="store_true", help="print saturation merges")
    r.add_argument("--strict-iota-elim", action="store_true", help="type the zero branch of rec as nat")
    v = sub.add_parser("verify-cert", help="replay a certificate")
    v.add_argument("file", type=Path)
    v.add_argument("--context", type=Path, required=True)
    v.add_argument("--goal", default=None, help='"t ~ u"; defaults to the goal stated in the certificate')
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    if args.cmd == "run":
        try:
            source = args.file.read_text(encoding="utf-8")
            items = parse(source)
        except OSError as e:
            print(f"ERROR {e}", file=out)
            return RESOURCE
        except ParseError as e:
            print(f"ERROR parse {e}", file=out)
            return REJECTED
        opts = Options(
            fuel=args.fuel or _fuel_default(),
            emit_cert=args.emit_cert,
            verify_cert=args.verify_cert,
            explain=args.explain,
            strict_iota_elim=args.strict_iota_elim,
        )
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
        return run(items, opts, out)
    try:
        s = load_context(args.context.read_text(encoding="utf-8"))
        goal = _goal(args.goal, s) if args.goal else None
    except OSError as e:
        print(f"ERROR {e}", file=out)
        return RESOURCE
    except (ParseError, ValueError) as e:
        print(f"ERROR parse {e}", file=out)
        return REJECTED
    ok, why = verify_file(args.file, s.ctx, goal)
    print("VERIFY ok" if ok else f"VERIFY fail {why}", file=out)
    return OK if ok else REJECTED


if __name__ == "__main__":
    sys.exit(main())
