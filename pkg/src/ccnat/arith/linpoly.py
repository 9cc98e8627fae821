"""Integer affine forms, equations between them, and algebraic caps of terms."""

from __future__ import annotations

from math import gcd
from typing import Callable, Iterable, Mapping

from ..term import ZERO, Sort, Term, Var, match_plus, match_succ


class LinPoly:
    """``const + sum(coeff * var)`` with integer coefficients, zero coefficients dropped.

    Caps only ever produce natural coefficients; differences and combinations of
    equations need the general integer case, so one class covers both.
    """

    __slots__ = ("const", "coeffs", "_key")

    def __init__(self, const: int = 0, coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[str, int] = {}
        for v, c in items:
            acc[v] = acc.get(v, 0) + c
        self.const = int(const)
        self.coeffs = {v: acc[v] for v in sorted(acc) if acc[v]}
        self._key = (self.const, tuple(self.coeffs.items()))

    @classmethod
    def var(cls, name: str, coeff: int = 1) -> "LinPoly":
        return cls(0, {name: coeff})

    @classmethod
    def constant(cls, k: int) -> "LinPoly":
        return cls(k)

    def __eq__(self, other):
        return isinstance(other, LinPoly) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __add__(self, other: "LinPoly") -> "LinPoly":
        return LinPoly(self.const + other.const, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __sub__(self, other: "LinPoly") -> "LinPoly":
        return self + other.scale(-1)

    def __neg__(self) -> "LinPoly":
        return self.scale(-1)

    def scale(self, k: int) -> "LinPoly":
        return LinPoly(self.const * k, {v: c * k for v, c in self.coeffs.items()})

    def shifted(self, k: int) -> "LinPoly":
        return LinPoly(self.const + k, self.coeffs)

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs and self.const == 0

    def is_natural(self) -> bool:
        return self.const >= 0 and all(c > 0 for c in self.coeffs.values())

    def content(self) -> int:
        """gcd of the variable coefficients (0 for a constant)."""
        g = 0
        for c in self.coeffs.values():
            g = gcd(g, c)
        return g

    def evaluate(self, env: Mapping[str, int]) -> int:
        return self.const + sum(c * env[v] for v, c in self.coeffs.items())

    def substitute(self, name: str, value: "LinPoly") -> "LinPoly":
        c = self.coeffs.get(name)
        if not c:
            return self
        rest = LinPoly(self.const, {v: k for v, k in self.coeffs.items() if v != name})
        return rest + value.scale(c)

    def __repr__(self):
        return f"LinPoly({self})"

    def __str__(self):
        parts = []
        for v, c in self.coeffs.items():
            parts.append(v if c == 1 else f"{c}*{v}")
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)


class LinEq:
    """An equation ``lhs = rhs`` kept in a canonical orientation.

    Both sides end up with natural coefficients and no variable on both sides;
    common factors are divided out, and the side holding the smallest variable id
    (or the nonzero constant, for ground equations) is the left one.
    """

    __slots__ = ("lhs", "rhs", "_key")

    def __init__(self, lhs: LinPoly, rhs: LinPoly):
        d = lhs - rhs
        g = gcd(d.content(), abs(d.const))
        if g > 1:
            d = LinPoly(d.const // g, {v: c // g for v, c in d.coeffs.items()})
        lead = next(iter(d.coeffs.values()), d.const)
        if lead < 0:
            d = -d
        self.lhs = LinPoly(max(d.const, 0), {v: c for v, c in d.coeffs.items() if c > 0})
        self.rhs = LinPoly(max(-d.const, 0), {v: -c for v, c in d.coeffs.items() if c < 0})
        self._key = (self.lhs._key, self.rhs._key)

    def diff(self) -> LinPoly:
        return self.lhs - self.rhs

    def is_trivial(self) -> bool:
        return self.lhs == self.rhs

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.lhs.vars) | set(self.rhs.vars)))

    def __eq__(self, other):
        return isinstance(other, LinEq) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"LinEq({self.lhs} = {self.rhs})"


# -- caps --------------------------------------------------------------------


def var_id(name: str) -> str:
    """Arithmetic variable standing for the star-variable ``name``."""
    return "v:" + name


def is_algebraic(t: Term) -> bool:
    if isinstance(t, Var):
        return t.sort is Sort.STAR
    return t is ZERO or match_succ(t) is not None or match_plus(t) is not None


def cap(t: Term, abstract: Callable[[Term], str]) -> LinPoly:
    """Algebraic cap of ``t``; ``abstract`` names each alien (non-algebraic) subterm."""
    const = 0
    coeffs: dict[str, int] = {}
    stack = [t]
    while stack:
        u = stack.pop()
        if u is ZERO:
            continue
        s = match_succ(u)
        if s is not None:
            const += 1
            stack.append(s)
            continue
        p = match_plus(u)
        if p is not None:
            stack.append(p[1])
            stack.append(p[0])
            continue
        if isinstance(u, Var) and u.sort is Sort.STAR:
            v = var_id(u.name)
        else:
            v = abstract(u)
        coeffs[v] = coeffs.get(v, 0) + 1
    return LinPoly(const, coeffs)


class SyntacticAbstraction:
    """Empty-relation abstraction: every distinct alien term gets its own variable."""

    def __init__(self):
        self.table: dict[Term, str] = {}

    def __call__(self, t: Term) -> str:
        v = self.table.get(t)
        if v is None:
            v = f"a:{len(self.table)}"
            self.table[t] = v
        return v


def syntactic_system(pairs, goal) -> tuple[list[LinPoly], LinPoly]:
    """Caps of ``l - r`` for each premise pair and for the goal pair, with one shared
    empty-relation abstraction; alien variables are numbered by first encounter."""
    ab = SyntacticAbstraction()
    polys = [cap(l, ab) - cap(r, ab) for l, r in pairs]
    g = cap(goal[0], ab) - cap(goal[1], ab)
    return polys, g


def aliens(t: Term) -> list[Term]:
    """Maximal non-algebraic subterms of ``t``, left to right, with repetitions."""
    out: list[Term] = []
    cap(t, lambda u: out.append(u) or "")
    return out


__all__ = [
    "aliens",
    "syntactic_system",
    "LinPoly",
    "LinEq",
    "cap",
    "is_algebraic",
    "var_id",
    "SyntacticAbstraction",
]
