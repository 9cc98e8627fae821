"""Syntax-directed type inference and checking, with conversion at application and check sites."""

from __future__ import annotations

from dataclasses import dataclass, field

from .congruence import ConversionFuelExhausted, ConvJudgment, convertible
from .printer import show
from .reduce import DEFAULT_FUEL, expose_equality, normalize
from .term import (
    BOX,
    EQ,
    NAT,
    STAR,
    TRIANGLE,
    ZERO,
    Annot,
    App,
    BVar,
    Binding,
    Const,
    Context,
    EqI,
    Lam,
    Pi,
    Rec,
    Sort,
    SortTerm,
    Term,
    Var,
    abstract,
    arrow,
    fresh_name,
    free_vars,
    instantiate,
    pi,
    succ,
)

KINDS = (
    "unbound-variable",
    "not-a-function",
    "domain-mismatch",
    "annotation-violation",
    "sort-error",
    "motive-mismatch",
    "fuel-exhausted",
)

EQ_TYPE = pi("T", Annot.U, STAR, arrow(Var("T", Sort.BOX), arrow(Var("T", Sort.BOX), STAR)))

_CONST_TYPES = {
    "nat": STAR,
    "zero": NAT,
    "succ": arrow(NAT, NAT),
    "plus": arrow(NAT, arrow(NAT, NAT)),
    "eq": EQ_TYPE,
}


class TypeError(Exception):  # noqa: A001 - the kernel's own error type
    """A rejected judgment.

    ``path`` lists child positions from the checked term down to the offending
    subterm. ``incomplete`` marks rejections caused by an undecided arithmetic
    query rather than a refuted conversion.
    """

    def __init__(self, kind: str, path=(), details: tuple = (), *, incomplete: bool = False):
        assert kind in KINDS, kind
        self.kind = kind
        self.path = tuple(path)
        self.details = tuple(details)
        self.incomplete = incomplete
        super().__init__(self.describe())

    def describe(self) -> str:
        loc = "/".join(map(str, self.path)) or "."
        parts = [self.kind, f"at {loc}"]
        for d in self.details:
            parts.append(show(d) if isinstance(d, Term) else str(d))
        return " ".join(parts)


KernelTypeError = TypeError


@dataclass
class TypingResult:
    type: Term
    obligations: list[ConvJudgment] = field(default_factory=list)


class Checker:
    def __init__(self, fuel: int = DEFAULT_FUEL, *, strict_iota_elim: bool = False, certify: bool = False):
        self.fuel = fuel
        self.strict = strict_iota_elim
        self.certify = certify
        self.obligations: list[ConvJudgment] = []

    # -- helpers ---------------------------------------------------------------------

    def nf(self, t: Term, path) -> Term:
        r = normalize(t, self.fuel)
        if not r.normal:
            raise TypeError("fuel-exhausted", path, (f"normalization exceeded {self.fuel} steps",))
        return r.term

    def conv(self, ctx: Context, a: Term, b: Term, path, kind: str, details) -> None:
        try:
            j = convertible(ctx, a, b, self.fuel, certify=self.certify)
        except ConversionFuelExhausted as e:
            raise TypeError("fuel-exhausted", path, (str(e),)) from None
        if not j.verdict:
            raise TypeError(kind, path, details, incomplete=j.status == "unknown")
        if self.certify and a is not b:
            self.obligations.append(j)

    def sort_of(self, ctx: Context, T: Term, path, allowed=(Sort.STAR, Sort.BOX, Sort.TRIANGLE)) -> Sort:
        s = self.nf(self.infer(ctx, T, path), path)
        if not isinstance(s, SortTerm) or s.sort not in allowed:
            raise TypeError("sort-error", path, ("expected a sort, found", s))
        return s.sort

    def open(self, ctx: Context, b, path):
        name = fresh_name(b.hint, ctx.names() | free_vars(b))
        v = Var(name, b.vsort)
        return name, v, ctx.extend(name, b.annot, b.domain)

    # -- inference -------------------------------------------------------------------

    def infer(self, ctx: Context, t: Term, path=()) -> Term:
        if isinstance(t, Var):
            if t.name not in ctx:
                raise TypeError("unbound-variable", path, (t.name,))
            b = ctx[ctx.index(t.name)]
            if b.sort is not t.sort:
                raise TypeError("sort-error", path, (f"{t.name} used at the wrong sort",))
            return b.type
        if isinstance(t, SortTerm):
            if t.sort is Sort.STAR:
                return BOX
            if t.sort is Sort.BOX:
                return TRIANGLE
            raise TypeError("sort-error", path, ("triangle has no type",))
        if isinstance(t, Const):
            return _CONST_TYPES[t.kind]
        if isinstance(t, BVar):
            raise TypeError("unbound-variable", path, (f"#{t.index}",))
        if isinstance(t, Pi):
            self.sort_of(ctx, t.domain, path + (0,), (Sort.STAR, Sort.BOX))
            _, v, inner = self.open(ctx, t, path)
            s = self.sort_of(inner, instantiate(t.body, v), path + (1,))
            return SortTerm(s)
        if isinstance(t, Lam):
            self.sort_of(ctx, t.domain, path + (0,), (Sort.STAR, Sort.BOX))
            name, v, inner = self.open(ctx, t, path)
            U = self.infer(inner, instantiate(t.body, v), path + (1,))
            prod = Pi(t.annot, t.domain, abstract(U, name), t.hint)
            self.sort_of(ctx, prod, path)
            return prod
        if isinstance(t, App):
            return self.infer_app(ctx, t, path)
        if isinstance(t, EqI):
            return self.infer_eqi(ctx, t, path)
        if isinstance(t, Rec):
            return self.infer_rec(ctx, t, path)
        raise TypeError("sort-error", path, ("not a term",))

    def infer_app(self, ctx: Context, t: App, path) -> Term:
        F = self.nf(self.infer(ctx, t.fn, path + (0,)), path + (0,))
        if not isinstance(F, Pi):
            raise TypeError("not-a-function", path + (0,), ("function type expected, found", F))
        A = self.infer(ctx, t.arg, path + (1,))
        self.conv(ctx, A, F.domain, path + (1,), "domain-mismatch", ("expected", F.domain, "found", A))
        if F.annot is Annot.R:
            eq = expose_equality(F.domain, self.fuel)
            if eq is not None:
                lhs, rhs = eq[0], eq[1]
                self.conv(ctx, lhs, rhs, path + (1,), "annotation-violation", ("unproven equation", lhs, rhs))
        return instantiate(F.body, t.arg)

    def infer_eqi(self, ctx: Context, t: EqI, path) -> Term:
        sub = path + (0,)
        P = self.nf(self.infer(ctx, t.proof, sub), sub)
        shape = _leibniz(P)
        if shape is None:
            raise TypeError("domain-mismatch", sub, ("Leibniz equality expected, found", P))
        T, a, b = shape
        self.sort_of(ctx, T, sub, (Sort.STAR,))
        self.conv(ctx, self.infer(ctx, a, sub), T, sub, "domain-mismatch", ("expected", T, "for", a))
        self.conv(ctx, self.infer(ctx, b, sub), T, sub, "domain-mismatch", ("expected", T, "for", b))
        return App(App(App(EQ, T), a), b)

    def infer_rec(self, ctx: Context, t: Rec, path) -> Term:
        n, Q, f0, fS = t.scrut, t.motive, t.zero_case, t.succ_case
        self.conv(ctx, self.infer(ctx, n, path + (0,)), NAT, path + (0,), "domain-mismatch", ("expected", NAT))
        motive_type = arrow(NAT, STAR)
        self.conv(
            ctx, self.infer(ctx, Q, path + (1,)), motive_type, path + (1,), "motive-mismatch", ("expected", motive_type)
        )
        want0 = NAT if self.strict else App(Q, ZERO)
        self.conv(ctx, self.infer(ctx, f0, path + (2,)), want0, path + (2,), "motive-mismatch", ("expected", want0))
        k = Var(fresh_name("n", free_vars(Q)))
        wantS = pi(k.name, Annot.U, NAT, arrow(App(Q, k), App(Q, succ(k))))
        self.conv(ctx, self.infer(ctx, fS, path + (3,)), wantS, path + (3,), "motive-mismatch", ("expected", wantS))
        return self.nf(App(Q, n), path)

    def check(self, ctx: Context, t: Term, T: Term, path=()) -> None:
        self.sort_of(ctx, T, path)
        A = self.infer(ctx, t, path)
        self.conv(ctx, A, T, path, "domain-mismatch", ("expected", T, "found", A))


def _leibniz(P: Term):
    """Match ``forall (P : T -> star). P a -> P b`` and return ``(T, a, b)``."""
    if not isinstance(P, Pi) or P.annot is not Annot.U:
        return None
    dom = P.domain
    if not (isinstance(dom, Pi) and dom.body is STAR and dom.domain.loose == 0):
        return None
    inner = P.body
    if not isinstance(inner, Pi):
        return None
    pa, pb = inner.domain, inner.body
    if not (isinstance(pa, App) and pa.fn is BVar(0, Sort.BOX)):
        return None
    if not (isinstance(pb, App) and pb.fn is BVar(1, Sort.BOX)):
        return None
    a, b = pa.arg, pb.arg
    if a.loose > 0 or b.loose > 0:
        return None
    return dom.domain, a, b


# -- public API ----------------------------------------------------------------------


def infer(
    ctx: Context, t: Term, fuel: int = DEFAULT_FUEL, *, strict_iota_elim: bool = False, certify: bool = False
) -> TypingResult:
    c = Checker(fuel, strict_iota_elim=strict_iota_elim, certify=certify)
    T = c.infer(ctx, t)
    return TypingResult(T, c.obligations)


def check(
    ctx: Context, t: Term, T: Term, fuel: int = DEFAULT_FUEL, *, strict_iota_elim: bool = False, certify: bool = False
) -> TypingResult:
    c = Checker(fuel, strict_iota_elim=strict_iota_elim, certify=certify)
    c.check(ctx, t, T)
    return TypingResult(T, c.obligations)


def check_binding(ctx: Context, b: Binding, fuel: int = DEFAULT_FUEL) -> None:
    """The [Weak] premise: the new type lives in star or box and the name is fresh."""
    if b.name in ctx:
        raise TypeError("sort-error", (), (f"{b.name} is already declared",))
    Checker(fuel).sort_of(ctx, b.type, (), (Sort.STAR, Sort.BOX))


def check_context(ctx, fuel: int = DEFAULT_FUEL) -> None:
    """Check a context given as a :class:`Context` or as a sequence of bindings.

    Errors carry the offending binding's position as the first path element.
    """
    done = Context()
    for i, b in enumerate(ctx):
        if not isinstance(b, Binding):
            a = b[1]
            b = Binding(b[0], Annot[a.upper()] if isinstance(a, str) else Annot(a), b[2])
        try:
            check_binding(done, b, fuel)
        except TypeError as e:
            raise TypeError(e.kind, (i,) + e.path, e.details, incomplete=e.incomplete) from None
        done = done.extend(b.name, b.annot, b.type)


__all__ = [
    "EQ_TYPE",
    "KINDS",
    "Checker",
    "KernelTypeError",
    "TypeError",
    "TypingResult",
    "check",
    "check_binding",
    "check_context",
    "infer",
]
