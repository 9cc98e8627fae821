"""Deciding conversion: normalise, consult the saturated state, descend structurally."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from ..arith.decide import entails_poly, feasible
from ..arith.linpoly import LinPoly, SyntacticAbstraction, cap
from ..arith.omega import ArithResourceLimit
from ..reduce import DEFAULT_FUEL, normalize
from ..term import (
    App,
    Binder,
    Class,
    Context,
    EqI,
    Rec,
    Term,
    Var,
    classify,
    fresh_name,
    free_vars,
    instantiate,
    match_eq,
    subterms,
)
from .hyps import hypotheses
from .proof import PBinder, PCongr, Proof, chain, refl, sym
from .state import Consistency, ConversionFuelExhausted, ConversionState, beta_proof

_STATES: dict[tuple, ConversionState] = {}
_STATES_LOCK = threading.Lock()
_VERDICTS: dict[tuple, bool] = {}
MAX_CACHED_VERDICTS = 200_000


def state_for(ctx: Context, fuel: int = DEFAULT_FUEL) -> ConversionState:
    """Saturated state of the hypotheses of ``ctx``, memoised by the hypotheses themselves."""
    hyps = hypotheses(ctx, fuel)
    key = (hyps, fuel)
    st = _STATES.get(key)
    if st is None:
        st = ConversionState(hyps, fuel, key)
        with _STATES_LOCK:
            st = _STATES.setdefault(key, st)
    return st


def saturate(ctx: Context, fuel: int = DEFAULT_FUEL) -> ConversionState:
    return state_for(ctx, fuel)


def clear_caches() -> None:
    with _STATES_LOCK:
        _STATES.clear()
        _VERDICTS.clear()


@dataclass
class ConvJudgment:
    context: Context
    lhs: Term
    rhs: Term
    verdict: bool
    status: str  # "yes" | "no" | "unknown"
    proof: Proof | None = None
    diagnostics: tuple[str, ...] = ()
    trace: tuple[str, ...] = field(default=(), repr=False)

    @property
    def certificate(self):
        if self.proof is None:
            return None
        from ..cert import emit

        return emit(self)


_TRUE = object()


class _Converter:
    def __init__(self, fuel: int, want_proof: bool):
        self.fuel = fuel
        self.want = want_proof
        self.diagnostics: list[str] = []
        self.traces: list[str] = []

    def norm(self, t: Term) -> Term:
        r = normalize(t, self.fuel)
        if not r.normal:
            raise ConversionFuelExhausted(f"normalization exceeded {self.fuel} steps")
        return r.term

    def conv(self, ctx: Context, t: Term, u: Term):
        a, b = self.norm(t), self.norm(u)
        core = self.conv_nf(ctx, a, b)
        if core is None or not self.want:
            return core
        return chain(t, beta_proof(t, a, self.fuel), core, sym(beta_proof(u, b, self.fuel)))

    def conv_nf(self, ctx: Context, a: Term, b: Term):
        if a is b:
            return refl(a) if self.want else _TRUE
        if classify(a) is Class.O and classify(b) is Class.O:
            base = state_for(ctx, self.fuel)
            st = base.extended((a, b))
            if not self.traces:
                self.traces = list(st.trace)
            if st.equal(a, b):
                return st.explain(a, b) if self.want else _TRUE
            if st.incomplete:
                for d in st.diagnostics:
                    if d not in self.diagnostics:
                        self.diagnostics.append(d)
            if _first_order(a) and _first_order(b):
                return None
        return self.descend(ctx, a, b)

    def descend(self, ctx: Context, a: Term, b: Term):
        if type(a) is not type(b):
            return None
        if isinstance(a, Binder):
            if a.annot != b.annot:
                return None
            d = self.conv_nf(ctx, a.domain, b.domain)
            if d is None:
                return None
            name = fresh_name(a.hint, ctx.names() | free_vars(a) | free_vars(b))
            v = Var(name, a.vsort)
            inner = ctx.extend(name, a.annot, a.domain)
            body = self.conv_nf(inner, instantiate(a.body, v), instantiate(b.body, v))
            if body is None:
                return None
            if not self.want:
                return _TRUE
            return PBinder(a, b, None if a.domain is b.domain else d, body, name, a.annot)
        if isinstance(a, (App, Rec, EqI)):
            kids = []
            for x, y in zip(a.children(), b.children()):
                if x is y:
                    kids.append(None)
                    continue
                p = self.conv_nf(ctx, x, y)
                if p is None:
                    return None
                kids.append(p)
            return PCongr(a, b, tuple(kids)) if self.want else _TRUE
        return None


def _first_order(t: Term) -> bool:
    """Every subterm is an object built from variables, constants and applications.

    For such pairs congruence closure already covers structural descent.
    """
    if isinstance(t, App):
        return classify(t) is Class.O and _first_order(t.fn) and _first_order(t.arg)
    return classify(t) is Class.O and not isinstance(t, (Binder, Rec, EqI))


def convertible(
    ctx: Context,
    t: Term,
    u: Term,
    fuel: int = DEFAULT_FUEL,
    *,
    certify: bool = False,
) -> ConvJudgment:
    """Decide ``t ~ u`` under ``ctx``.

    Raises :class:`ConversionFuelExhausted` when normalization runs out of fuel.
    A negative answer reached while some arithmetic query was undecided has
    status ``unknown``.
    """
    hyps_key = (hypotheses(ctx, fuel), fuel)
    vkey = (hyps_key, t, u)
    if not certify:
        hit = _VERDICTS.get(vkey)
        if hit is not None:
            return ConvJudgment(ctx, t, u, hit, "yes" if hit else "no")
    c = _Converter(fuel, certify)
    res = c.conv(ctx, t, u)
    ok = res is not None
    status = "yes" if ok else ("unknown" if c.diagnostics else "no")
    if status != "unknown" and len(_VERDICTS) < MAX_CACHED_VERDICTS:
        _VERDICTS[vkey] = ok
    return ConvJudgment(
        ctx,
        t,
        u,
        ok,
        status,
        res if certify and ok else None,
        tuple(c.diagnostics),
        tuple(c.traces),
    )


def is_consistent(ctx: Context, fuel: int = DEFAULT_FUEL) -> bool | None:
    """True, False, or None when the arithmetic budget left the question open."""
    flag = state_for(ctx, fuel).flag
    if flag is Consistency.UNDETERMINED:
        return None
    return flag is Consistency.CONSISTENT


# -- weak conversion -----------------------------------------------------------------


def weak_equations(ctx: Context):
    out = []
    for b in ctx:
        if b.annot.name != "R":
            continue
        m = match_eq(b.type)
        if m is not None and classify(m[1]) is Class.O and classify(m[2]) is Class.O:
            out.append((m[1], m[2]))
    return out


class _Weak:
    """Smallest congruence containing the syntactic-cap entailments of Eq(ctx).

    The carrier grows on demand as binders are opened during comparison.
    """

    def __init__(self, ctx: Context):
        eqs = weak_equations(ctx)
        self.ab = SyntacticAbstraction()
        self.E = [cap(l, self.ab) - cap(r, self.ab) for l, r in eqs]
        self.names = {v for p in self.E for v in p.coeffs}
        try:
            self.consistent = feasible(self.E)
        except ArithResourceLimit:
            self.consistent = True
        self.universe: list[Term] = []
        self.caps: dict[Term, LinPoly] = {}
        self.parent: dict[Term, Term] = {}
        self._add([x for pair in eqs for x in pair])

    def _add(self, terms) -> None:
        fresh = []
        for t in terms:
            for s in subterms(t):
                if s not in self.parent and classify(s) is Class.O:
                    self.parent[s] = s
                    self.caps[s] = cap(s, self.ab)
                    fresh.append(s)
        if not fresh or not self.consistent:
            return
        old = self.universe
        self.universe = old + fresh
        for i, s in enumerate(fresh):
            for other in old + fresh[:i]:
                d = self.caps[s] - self.caps[other]
                if any(v not in self.names for v in d.coeffs):
                    continue
                if d.is_zero() or _safe_entails(self.E, d):
                    self.union(s, other)
        self._close()

    def find(self, s):
        while self.parent[s] is not s:
            self.parent[s] = self.parent[self.parent[s]]
            s = self.parent[s]
        return s

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra is rb:
            return False
        self.parent[ra] = rb
        return True

    def _close(self):
        changed = True
        while changed:
            changed = False
            table = {}
            for s in self.universe:
                if not isinstance(s, (App, Rec, EqI)):
                    continue
                sig = (type(s),) + tuple(self.find(k) if k in self.parent else ("t", k) for k in s.children())
                other = table.setdefault(sig, s)
                if other is not s and self.union(other, s):
                    changed = True

    def related(self, a: Term, b: Term) -> bool:
        if a is b:
            return True
        if classify(a) is Class.O and classify(b) is Class.O:
            if not self.consistent:
                return True
            self._add((a, b))
            if self.find(a) is self.find(b):
                return True
        if type(a) is not type(b):
            return False
        if isinstance(a, Binder):
            if a.annot != b.annot or not self.related(a.domain, b.domain):
                return False
            name = fresh_name(a.hint, free_vars(a) | free_vars(b) | self.names_in_use())
            v = Var(name, a.vsort)
            return self.related(instantiate(a.body, v), instantiate(b.body, v))
        if isinstance(a, (App, Rec, EqI)):
            return all(x is y or self.related(x, y) for x, y in zip(a.children(), b.children()))
        return False

    def names_in_use(self) -> frozenset[str]:
        out = set()
        for s in self.universe:
            out |= free_vars(s)
        return frozenset(out)


def _safe_entails(E, d: LinPoly) -> bool:
    try:
        return entails_poly(E, d)
    except ArithResourceLimit:
        return False


def weak_convertible(ctx: Context, t: Term, u: Term) -> bool:
    """Weak conversion: arithmetic on syntactic caps plus congruence, no reduction."""
    return _Weak(ctx).related(t, u)


__all__ = [
    "ConvJudgment",
    "clear_caches",
    "convertible",
    "is_consistent",
    "saturate",
    "state_for",
    "weak_convertible",
    "weak_equations",
]
