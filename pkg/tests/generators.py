"""Seeded random generators for terms, contexts and queries."""

from __future__ import annotations

import random

from ccnat.reduce import contract_at
from ccnat.term import (
    BOX,
    EQ,
    NAT,
    PLUS,
    STAR,
    SUCC,
    TRIANGLE,
    ZERO,
    Annot,
    App,
    BVar,
    EqI,
    Lam,
    Pi,
    Rec,
    Sort,
    Var,
)

# -- first-order object terms (oracle form) ----------------------------------------
#
# ("0",) | ("S", t) | ("+", a, b) | ("v", name) | ("f", head, args...)

VARS = ("x", "y", "z")
FUNS = {"f": 1, "g": 2}

FO_DECLS = """
(decl x u nat) (decl y u nat) (decl z u nat)
(decl f u (-> nat nat)) (decl g u (-> nat nat nat))
"""


def size(t) -> int:
    if t[0] in ("0", "v"):
        return 1
    if t[0] == "f":
        return 1 + sum(size(a) for a in t[2:])
    return 1 + sum(size(a) for a in t[1:])


def render(t) -> str:
    tag = t[0]
    if tag == "0":
        return "0"
    if tag == "v":
        return t[1]
    if tag == "S":
        return f"(S {render(t[1])})"
    if tag == "+":
        return f"(+ {render(t[1])} {render(t[2])})"
    return "(" + " ".join([t[1]] + [render(a) for a in t[2:]]) + ")"


def numeral(k: int):
    t = ("0",)
    for _ in range(k):
        t = ("S", t)
    return t


def fo_term(rng: random.Random, budget: int, funs: bool = True):
    """A random object term of size at most ``budget``."""
    if budget <= 1 or rng.random() < 0.3:
        return ("v", rng.choice(VARS)) if rng.random() < 0.75 else ("0",)
    choices = ["S", "+", "num"]
    if funs:
        choices += ["f", "g"]
    k = rng.choice(choices)
    if k == "num":
        return numeral(rng.randint(0, min(3, budget - 1)))
    if k == "S":
        return ("S", fo_term(rng, budget - 1, funs))
    if k == "f":
        return ("f", "f", fo_term(rng, budget - 1, funs))
    if budget < 3:
        return ("v", rng.choice(VARS))
    left = rng.randint(1, budget - 2)
    a = fo_term(rng, left, funs)
    b = fo_term(rng, budget - 1 - size(a), funs)
    return ("+", a, b) if k == "+" else ("f", "g", a, b)


def _positions(t, path=()):
    yield path, t
    if t[0] == "S":
        yield from _positions(t[1], path + (1,))
    elif t[0] == "+":
        yield from _positions(t[1], path + (1,))
        yield from _positions(t[2], path + (2,))
    elif t[0] == "f":
        for i in range(2, len(t)):
            yield from _positions(t[i], path + (i,))


def _replace(t, path, new):
    if not path:
        return new
    i = path[0]
    return t[:i] + (_replace(t[i], path[1:], new),) + t[i + 1 :]


def mutate(rng: random.Random, t, hyps):
    """A term that is often, but not always, equal to ``t``."""
    pos = list(_positions(t))
    path, sub = rng.choice(pos)
    r = rng.random()
    if r < 0.25 and hyps:
        l, rhs = rng.choice(hyps)
        new = rhs if rng.random() < 0.5 else l
    elif r < 0.45 and sub[0] == "+":
        new = ("+", sub[2], sub[1])
    elif r < 0.6:
        new = ("+", sub, ("0",)) if rng.random() < 0.5 else ("S", sub)
    elif r < 0.7 and sub[0] == "S":
        new = ("+", sub[1], numeral(1))
    else:
        new = fo_term(rng, 3)
    return _replace(t, path, new)


def fo_hypothesis(rng: random.Random):
    """A random equation between small object terms."""
    kind = rng.random()
    if kind < 0.45:
        # a linear relation
        a = fo_term(rng, 4, funs=False)
        b = fo_term(rng, 4, funs=False)
    elif kind < 0.85:
        a = fo_term(rng, 4)
        b = fo_term(rng, 3, funs=False)
    else:
        a = fo_term(rng, 4)
        b = fo_term(rng, 4)
    return a, b


def fo_instance(rng: random.Random, max_hyps: int = 3, max_size: int = 12):
    hyps = [fo_hypothesis(rng) for _ in range(rng.randint(0, max_hyps))]
    t = fo_term(rng, rng.randint(1, max_size))
    u = mutate(rng, t, hyps) if rng.random() < 0.6 else fo_term(rng, rng.randint(1, max_size))
    while size(u) > max_size:
        u = fo_term(rng, rng.randint(1, max_size))
    return hyps, t, u


def fo_script(hyps) -> str:
    lines = [FO_DECLS]
    for i, (a, b) in enumerate(hyps):
        lines.append(f"(decl h{i} r (eq nat {render(a)} {render(b)}))")
    return "\n".join(lines)


# -- well-typed corpus (surface syntax) ------------------------------------------

TYPED_DECLS = """
(decl x u nat) (decl y u nat)
(decl f u (-> nat nat)) (decl g u (-> nat nat nat))
(decl P u (-> nat star))
(decl q u (pi n u nat (P n)))
(decl h r (eq nat x (+ y 1)))
"""


class TypedGen:
    """Well-typed terms of type ``nat`` and ``P _`` with plenty of redexes."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.counter = 0

    def fresh(self, base: str) -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def nat(self, depth: int, env: tuple[str, ...] = ()) -> str:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.2:
            if rng.random() < 0.6:
                return rng.choice(("x", "y") + env)
            return str(rng.randint(0, 3))
        k = rng.randrange(8)
        d = depth - 1
        if k == 0:
            return f"(S {self.nat(d, env)})"
        if k == 1:
            return f"(+ {self.nat(d, env)} {self.nat(d, env)})"
        if k == 2:
            return f"(f {self.nat(d, env)})"
        if k == 3:
            return f"(g {self.nat(d, env)} {self.nat(d, env)})"
        if k in (4, 5):
            n = self.fresh("n")
            return f"((lam {n} u nat {self.nat(d, env + (n,))}) {self.nat(d, env)})"
        n, p = self.fresh("k"), self.fresh("p")
        scrut = self.nat(d, env) if rng.random() < 0.5 else str(rng.randint(0, 3))
        zero = self.nat(d, env)
        succ = self.nat(d, env + (n, p))
        return f"(rec {scrut} (lam {n} u nat nat) {zero} (lam {n} u nat (lam {p} u nat {succ})))"

    def fun(self, depth: int, env: tuple[str, ...] = ()) -> str:
        n = self.fresh("m")
        return f"(lam {n} u nat {self.nat(depth, env + (n,))})"

    def proof(self, depth: int) -> str:
        """A term whose type is ``P _``."""
        rng = self.rng
        k = rng.randrange(3)
        if k == 0:
            return f"(q {self.nat(depth)})"
        n = self.fresh("n")
        if k == 1:
            return f"((lam {n} u nat (q {self.nat(depth - 1, (n,))})) {self.nat(depth - 1)})"
        a = self.nat(depth - 1)
        # the annotation may differ from the argument only up to conversion
        b = a if rng.random() < 0.5 else f"(+ {a} 0)"
        return f"((lam {n} u (P {a}) {n}) (q {b}))"

    def term(self, depth: int) -> str:
        r = self.rng.random()
        if r < 0.6:
            return self.nat(depth)
        if r < 0.8:
            return self.fun(depth)
        return self.proof(depth)


def redex_paths(t, path=()):
    """Every position holding a beta or iota redex."""
    if contract_at(t, ()) is not None:
        yield path
    for i, c in enumerate(t.children()):
        yield from redex_paths(c, path + (i,))


# -- raw term trees for syntactic properties --------------------------------------


def raw_term(rng: random.Random, depth: int, bound: int = 0):
    """Arbitrary (usually ill-typed) closed-ish terms over a few free variables."""
    leaves = [STAR, BOX, TRIANGLE, NAT, EQ, ZERO, SUCC, PLUS, Var("x"), Var("y"), Var("A", Sort.BOX)]
    if depth <= 0 or rng.random() < 0.25:
        if bound and rng.random() < 0.4:
            i = rng.randrange(bound)
            return BVar(i, Sort.STAR)
        return rng.choice(leaves)
    k = rng.randrange(6)
    if k <= 1:
        return App(raw_term(rng, depth - 1, bound), raw_term(rng, depth - 1, bound))
    if k == 2:
        return App(App(PLUS, raw_term(rng, depth - 1, bound)), raw_term(rng, depth - 1, bound))
    if k == 3:
        cls = Lam if rng.random() < 0.5 else Pi
        dom = rng.choice([NAT, STAR, App(Var("P"), ZERO), raw_term(rng, depth - 1, bound)])
        return cls(rng.choice([Annot.U, Annot.R]), dom, raw_term(rng, depth - 1, bound + 1), "w")
    if k == 4:
        return Rec(*(raw_term(rng, depth - 1, bound) for _ in range(4)))
    return EqI(raw_term(rng, depth - 1, bound))


__all__ = [
    "FO_DECLS",
    "TYPED_DECLS",
    "TypedGen",
    "fo_instance",
    "fo_script",
    "fo_term",
    "mutate",
    "raw_term",
    "redex_paths",
    "render",
    "size",
]
