"""Certificate data model and its canonical text form.

A certificate file is UTF-8 text::

    ccnat-cert v1
    (context <sha256 of the canonical context text>)
    (free (x star) ...)
    (goal <lhs> <rhs>)
    (steps <n>)
    (step 0 (ext ...) (<kind> <lhs> <rhs> ...))
    ...

Every step concludes ``lhs ~ rhs`` under the base context extended by ``ext``.
Steps cite earlier steps by number and the last step concludes the goal.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..arith.linpoly import LinPoly
from ..arith.witness import CaseEnumeration, IntCombination, Witness
from ..printer import show
from ..syntax import Atom, Elaborator, ParseError, SExpr, SList, parse_annot, read_all
from ..term import Annot, Binding, Context, Sort, Term

FORMAT = "ccnat-cert v1"


@dataclass(frozen=True)
class Step:
    lhs: Term
    rhs: Term
    ext: tuple[tuple[str, Annot, Term], ...]


@dataclass(frozen=True)
class BetaIota(Step):
    paths: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class Hyp(Step):
    index: int = 0
    beta_steps: int = 0


@dataclass(frozen=True)
class Congr(Step):
    children: tuple[int | None, ...] = ()


@dataclass(frozen=True)
class Binder(Step):
    domain: int | None = None
    body: int = 0
    var: str = "x"
    annot: Annot = Annot.U


@dataclass(frozen=True)
class Arith(Step):
    premises: tuple[int, ...] = ()
    witness: Witness | None = None


@dataclass(frozen=True)
class Sym(Step):
    sub: int = 0


@dataclass(frozen=True)
class Trans(Step):
    first: int = 0
    second: int = 0


@dataclass(frozen=True)
class Collapse(Step):
    refutation: int = 0


@dataclass(frozen=True)
class Certificate:
    context_hash: str
    lhs: Term
    rhs: Term
    steps: tuple[Step, ...]
    free: tuple[tuple[str, Sort], ...] = field(default=())

    def to_text(self) -> str:
        return dumps(self)


# -- context fingerprint ---------------------------------------------------------------


def context_text(ctx: Context) -> str:
    return "".join(f"({b.name} {b.annot} {show(b.type)})\n" for b in ctx)


def context_hash(ctx: Context) -> str:
    return hashlib.sha256(context_text(ctx).encode("utf-8")).hexdigest()


# -- writing ----------------------------------------------------------------------


def _poly(p: LinPoly) -> str:
    parts = [str(p.const)] + [f"({v} {c})" for v, c in sorted(p.coeffs.items())]
    return "(poly " + " ".join(parts) + ")"


def _mults(ms) -> str:
    return "(mult" + "".join(f" ({i} {m})" for i, m in ms) + ")"


def _witness(w: Witness) -> str:
    if isinstance(w, IntCombination):
        return f"(int {_mults(w.multipliers)} {_poly(w.trace)} {w.mode} {w.scale})"
    cases = "".join(f" (case {k} {_witness(sub)})" for k, sub in w.cases)
    return f"(split {_mults(w.multipliers)} {_poly(w.trace)} {w.var}{cases})"


def _opt(i: int | None) -> str:
    return "_" if i is None else str(i)


def _step_body(s: Step) -> str:
    head = f"{show(s.lhs)} {show(s.rhs)}"
    if isinstance(s, BetaIota):
        paths = " ".join("(" + " ".join(map(str, p)) + ")" for p in s.paths)
        return f"(beta-iota {head} ({paths}))"
    if isinstance(s, Hyp):
        return f"(hyp {head} {s.index} {s.beta_steps})"
    if isinstance(s, Congr):
        return f"(congr {head} ({' '.join(map(_opt, s.children))}))"
    if isinstance(s, Binder):
        return f"(binder {head} {_opt(s.domain)} {s.body} {s.var} {s.annot})"
    if isinstance(s, Arith):
        return f"(arith {head} ({' '.join(map(str, s.premises))}) {_witness(s.witness)})"
    if isinstance(s, Sym):
        return f"(sym {head} {s.sub})"
    if isinstance(s, Trans):
        return f"(trans {head} {s.first} {s.second})"
    if isinstance(s, Collapse):
        return f"(collapse {head} {s.refutation})"
    raise TypeError(s)


def dumps(cert: Certificate) -> str:
    lines = [FORMAT, f"(context {cert.context_hash})"]
    lines.append("(free" + "".join(f" ({n} {s.value})" for n, s in cert.free) + ")")
    lines.append(f"(goal {show(cert.lhs)} {show(cert.rhs)})")
    lines.append(f"(steps {len(cert.steps)})")
    for i, s in enumerate(cert.steps):
        ext = "".join(f" ({n} {a} {show(T)})" for n, a, T in s.ext)
        lines.append(f"(step {i} (ext{ext}) {_step_body(s)})")
    return "\n".join(lines) + "\n"


# -- reading ----------------------------------------------------------------------


class CertificateFormatError(ValueError):
    pass


def _atom(x: SExpr) -> str:
    if not isinstance(x, Atom):
        raise CertificateFormatError("atom expected")
    return x.text


def _int(x: SExpr) -> int:
    t = _atom(x)
    try:
        return int(t)
    except ValueError:
        raise CertificateFormatError(f"integer expected, found {t!r}") from None


def _nat(x: SExpr) -> int:
    v = _int(x)
    if v < 0:
        raise CertificateFormatError("natural number expected")
    return v


def _opt_ref(x: SExpr) -> int | None:
    return None if _atom(x) == "_" else _nat(x)


def _list(x: SExpr, head: str | None = None) -> tuple:
    if not isinstance(x, SList):
        raise CertificateFormatError("list expected")
    if head is None:
        return x.items
    if not x.items or not isinstance(x.items[0], Atom) or x.items[0].text != head:
        raise CertificateFormatError(f"({head} ...) expected")
    return x.items[1:]


def _read_poly(x: SExpr) -> LinPoly:
    items = _list(x, "poly")
    if not items:
        raise CertificateFormatError("empty polynomial")
    coeffs = {}
    for it in items[1:]:
        pair = _list(it)
        if len(pair) != 2:
            raise CertificateFormatError("bad monomial")
        coeffs[_atom(pair[0])] = _int(pair[1])
    return LinPoly(_int(items[0]), coeffs)


def _read_mults(x: SExpr):
    out = []
    for it in _list(x, "mult"):
        pair = _list(it)
        if len(pair) != 2:
            raise CertificateFormatError("bad multiplier")
        out.append((_nat(pair[0]), _int(pair[1])))
    return tuple(out)


def _read_witness(x: SExpr) -> Witness:
    items = _list(x)
    if not items:
        raise CertificateFormatError("empty witness")
    kind = _atom(items[0])
    if kind == "int" and len(items) == 5:
        return IntCombination(_read_mults(items[1]), _read_poly(items[2]), _atom(items[3]), _int(items[4]))
    if kind == "split" and len(items) >= 4:
        cases = []
        for c in items[4:]:
            body = _list(c, "case")
            if len(body) != 2:
                raise CertificateFormatError("bad case")
            cases.append((_int(body[0]), _read_witness(body[1])))
        return CaseEnumeration(_read_mults(items[1]), _read_poly(items[2]), _atom(items[3]), tuple(cases))
    raise CertificateFormatError(f"unknown witness form {kind!r}")


class _Scope:
    """Variable sorts for elaborating certificate terms."""

    def __init__(self, ctx: Context, free):
        self.base = {b.name: b.sort for b in ctx}
        self.free = dict(free)

    def elaborator(self, ext) -> Elaborator:
        local = dict(self.free)
        local.update(self.base)
        for name, _, T in ext:
            local[name] = Binding(name, Annot.U, T).sort
        return Elaborator(local.get)


def _read_ext(x: SExpr, scope: _Scope):
    out = []
    for it in _list(x, "ext"):
        parts = _list(it)
        if len(parts) != 3:
            raise CertificateFormatError("bad extension binding")
        a = parse_annot(parts[1])
        if a is None:
            raise CertificateFormatError("bad annotation")
        T = scope.elaborator(out).term(parts[2])
        out.append((_atom(parts[0]), a, T))
    return tuple(out)


def _read_step(x: SExpr, scope: _Scope, expect: int) -> Step:
    items = _list(x, "step")
    if len(items) != 3 or _nat(items[0]) != expect:
        raise CertificateFormatError(f"step {expect} malformed")
    ext = _read_ext(items[1], scope)
    body = _list(items[2])
    if len(body) < 3:
        raise CertificateFormatError("step body too short")
    kind = _atom(body[0])
    el = scope.elaborator(ext)
    lhs, rhs = el.term(body[1]), el.term(body[2])
    rest = body[3:]
    base = dict(lhs=lhs, rhs=rhs, ext=ext)
    if kind == "beta-iota" and len(rest) == 1:
        paths = tuple(tuple(_nat(i) for i in _list(p)) for p in _list(rest[0]))
        return BetaIota(**base, paths=paths)
    if kind == "hyp" and len(rest) == 2:
        return Hyp(**base, index=_nat(rest[0]), beta_steps=_nat(rest[1]))
    if kind == "congr" and len(rest) == 1:
        return Congr(**base, children=tuple(_opt_ref(c) for c in _list(rest[0])))
    if kind == "binder" and len(rest) == 4:
        a = parse_annot(rest[3])
        if a is None:
            raise CertificateFormatError("bad annotation")
        return Binder(**base, domain=_opt_ref(rest[0]), body=_nat(rest[1]), var=_atom(rest[2]), annot=a)
    if kind == "arith" and len(rest) == 2:
        prem = tuple(_nat(p) for p in _list(rest[0]))
        return Arith(**base, premises=prem, witness=_read_witness(rest[1]))
    if kind == "sym" and len(rest) == 1:
        return Sym(**base, sub=_nat(rest[0]))
    if kind == "trans" and len(rest) == 2:
        return Trans(**base, first=_nat(rest[0]), second=_nat(rest[1]))
    if kind == "collapse" and len(rest) == 1:
        return Collapse(**base, refutation=_nat(rest[0]))
    raise CertificateFormatError(f"unknown step kind {kind!r}")


def loads(text: str, ctx: Context) -> Certificate:
    """Parse certificate text; ``ctx`` supplies the sorts of context variables."""
    first, _, rest = text.partition("\n")
    if first.strip() != FORMAT:
        raise CertificateFormatError(f"expected header {FORMAT!r}")
    try:
        items = read_all(rest)
    except ParseError as e:
        raise CertificateFormatError(str(e)) from None
    if len(items) < 4:
        raise CertificateFormatError("truncated certificate")
    try:
        h = _list(items[0], "context")
        if len(h) != 1:
            raise CertificateFormatError("bad context line")
        free = []
        for it in _list(items[1], "free"):
            pair = _list(it)
            if len(pair) != 2 or _atom(pair[1]) not in ("star", "box"):
                raise CertificateFormatError("bad free variable")
            free.append((_atom(pair[0]), Sort(_atom(pair[1]))))
        scope = _Scope(ctx, free)
        goal = _list(items[2], "goal")
        if len(goal) != 2:
            raise CertificateFormatError("bad goal")
        el = scope.elaborator(())
        lhs, rhs = el.term(goal[0]), el.term(goal[1])
        n = _list(items[3], "steps")
        if len(n) != 1 or _nat(n[0]) != len(items) - 4:
            raise CertificateFormatError("step count does not match")
        steps = tuple(_read_step(x, scope, i) for i, x in enumerate(items[4:]))
    except ParseError as e:
        raise CertificateFormatError(str(e)) from None
    return Certificate(_atom(h[0]), lhs, rhs, steps, tuple(free))


def read_goal(text: str, ctx: Context) -> tuple[Term, Term]:
    c = loads(text, ctx)
    return c.lhs, c.rhs


__all__ = [
    "FORMAT",
    "Arith",
    "BetaIota",
    "Binder",
    "Certificate",
    "CertificateFormatError",
    "Collapse",
    "Congr",
    "Hyp",
    "Step",
    "Sym",
    "Trans",
    "context_hash",
    "context_text",
    "dumps",
    "loads",
    "read_goal",
]
