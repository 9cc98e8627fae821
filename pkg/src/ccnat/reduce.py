"""Beta and iota reduction with fuel, plus weak-head exposure of equality types."""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass

from .term import (
    ZERO,
    App,
    Binder,
    Class,
    EqI,
    Lam,
    Rec,
    Term,
    classify,
    instantiate,
    match_eq,
    match_succ,
)

DEFAULT_FUEL = 100_000

Path = tuple[int, ...]


class Status(enum.Enum):
    NORMAL = "normal-form"
    EXHAUSTED = "fuel-exhausted"


@dataclass(frozen=True)
class ReductionResult:
    term: Term
    steps: int
    status: Status

    @property
    def normal(self) -> bool:
        return self.status is Status.NORMAL


def contract_beta(t: Term) -> Term | None:
    if isinstance(t, App) and isinstance(t.fn, Lam):
        return instantiate(t.fn.body, t.arg)
    return None


def contract_iota(t: Term) -> Term | None:
    if not isinstance(t, Rec):
        return None
    if classify(t.zero_case) is not Class.O or classify(t.succ_case) is not Class.O:
        return None
    if t.scrut is ZERO:
        return t.zero_case
    n = match_succ(t.scrut)
    if n is not None:
        return App(App(t.succ_case, n), Rec(n, t.motive, t.zero_case, t.succ_case))
    return None


def contract(t: Term, rules: str = "bi") -> Term | None:
    r = None
    if "b" in rules:
        r = contract_beta(t)
    if r is None and "i" in rules:
        r = contract_iota(t)
    return r


def _rebuild(t: Term, i: int, child: Term) -> Term:
    if isinstance(t, App):
        return App(child, t.arg) if i == 0 else App(t.fn, child)
    if isinstance(t, Binder):
        if i == 0:
            return type(t)(t.annot, child, t.body, t.hint)
        return type(t)(t.annot, t.domain, child, t.hint)
    if isinstance(t, Rec):
        kids = list(t.children())
        kids[i] = child
        return Rec(*kids)
    if isinstance(t, EqI):
        return EqI(child)
    raise ValueError("no children")


def step_path(t: Term, rules: str = "bi", innermost: bool = False) -> tuple[Term, Path] | None:
    """One contraction; leftmost-outermost by default, rightmost-innermost if asked."""
    if not innermost:
        r = contract(t, rules)
        if r is not None:
            return r, ()
    kids = t.children()
    order = range(len(kids) - 1, -1, -1) if innermost else range(len(kids))
    for i in order:
        sub = step_path(kids[i], rules, innermost)
        if sub is not None:
            return _rebuild(t, i, sub[0]), (i,) + sub[1]
    if innermost:
        r = contract(t, rules)
        if r is not None:
            return r, ()
    return None


def contract_at(t: Term, path: Path, rules: str = "bi") -> Term | None:
    """Contract the redex found at ``path``; None if there is none there."""
    if not path:
        return contract(t, rules)
    kids = t.children()
    i = path[0]
    if i >= len(kids):
        return None
    sub = contract_at(kids[i], path[1:], rules)
    if sub is None:
        return None
    return _rebuild(t, i, sub)


def beta_step(t: Term) -> Term | None:
    r = step_path(t, "b")
    return None if r is None else r[0]


def iota_step(t: Term) -> Term | None:
    r = step_path(t, "i")
    return None if r is None else r[0]


_NF_CACHE: dict[Term, tuple[Term, int]] = {}
_NF_LOCK = threading.Lock()


def normalize(t: Term, fuel: int = DEFAULT_FUEL, *, innermost: bool = False) -> ReductionResult:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if not innermost:
        hit = _NF_CACHE.get(t)
        if hit is not None and hit[1] <= fuel:
            return ReductionResult(hit[0], hit[1], Status.NORMAL)
    cur, steps = t, 0
    while True:
        r = step_path(cur, "bi", innermost)
        if r is None:
            if not innermost:
                with _NF_LOCK:
                    _NF_CACHE[t] = (cur, steps)
            return ReductionResult(cur, steps, Status.NORMAL)
        if steps >= fuel:
            return ReductionResult(cur, steps, Status.EXHAUSTED)
        cur = r[0]
        steps += 1


def normalize_trace(t: Term, fuel: int = DEFAULT_FUEL) -> tuple[ReductionResult, list[Path]]:
    """Leftmost-outermost normalization that also records every redex path."""
    cur, paths = t, []
    while True:
        r = step_path(cur)
        if r is None:
            return ReductionResult(cur, len(paths), Status.NORMAL), paths
        if len(paths) >= fuel:
            return ReductionResult(cur, len(paths), Status.EXHAUSTED), paths
        cur = r[0]
        paths.append(r[1])


def whnf_beta(t: Term, fuel: int) -> tuple[Term, int]:
    """Weak-head beta reduction along the application spine."""
    steps = 0
    while steps < fuel:
        spine = []
        head = t
        while isinstance(head, App):
            spine.append(head)
            head = head.fn
        if not spine or not isinstance(head, Lam):
            break
        # the innermost application node is the head redex
        redex = spine[-1]
        out = instantiate(head.body, redex.arg)
        for node in reversed(spine[:-1]):
            out = App(out, node.arg)
        t = out
        steps += 1
    return t, steps


def beta_reduce_to_equality(T: Term, fuel: int = DEFAULT_FUEL) -> tuple[Term, Term, Term] | None:
    r = expose_equality(T, fuel)
    return None if r is None else r[:3]


def expose_equality(T: Term, fuel: int = DEFAULT_FUEL) -> tuple[Term, Term, Term, int] | None:
    """(lhs, rhs, carrier, beta steps) if a weak-head beta reduct of T is an object equation."""
    head, steps = whnf_beta(T, fuel)
    m = match_eq(head)
    if m is None:
        return None
    carrier, a, b = m
    if classify(a) is not Class.O or classify(b) is not Class.O:
        return None
    return a, b, carrier, steps
