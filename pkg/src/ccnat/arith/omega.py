"""Feasibility of linear equation systems over the naturals.

Equalities are removed by unimodular variable changes (Euclid on the coefficients),
then nonnegativity constraints are eliminated one variable at a time with exact
Fourier-Motzkin when possible and dark shadow / splinters otherwise.
"""

from __future__ import annotations

from itertools import count
from math import gcd
from typing import Iterable

from .linpoly import LinPoly

DEFAULT_NODE_LIMIT = 1_000_000

Row = tuple[dict[str, int], int]


class ArithResourceLimit(RuntimeError):
    """The search exceeded its node budget; the answer is unknown."""


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise ArithResourceLimit(f"omega search exceeded {self.limit} nodes")


def _subst(row: Row, v: str, expr: Row) -> Row:
    coeffs, c = row
    a = coeffs.get(v)
    if not a:
        return row
    out = {k: x for k, x in coeffs.items() if k != v}
    for k, x in expr[0].items():
        out[k] = out.get(k, 0) + a * x
    return {k: x for k, x in out.items() if x}, c + a * expr[1]


def _content(coeffs: dict[str, int]) -> int:
    g = 0
    for x in coeffs.values():
        g = gcd(g, x)
    return g


def nat_feasible(equations: Iterable[LinPoly], node_limit: int = DEFAULT_NODE_LIMIT) -> bool:
    """Is there an assignment of naturals to the variables making every poly zero?"""
    eqs = [(dict(p.coeffs), p.const) for p in equations]
    names = sorted({v for coeffs, _ in eqs for v in coeffs})
    geqs = [({v: 1}, 0) for v in names]
    return _solve(eqs, geqs, _Budget(node_limit), count())


def _solve(eqs: list[Row], geqs: list[Row], budget: _Budget, fresh) -> bool:
    eqs = list(eqs)
    geqs = list(geqs)
    while True:
        budget.tick()
        # -- equalities ------------------------------------------------------
        norm = []
        for coeffs, c in eqs:
            coeffs = {k: x for k, x in coeffs.items() if x}
            if not coeffs:
                if c:
                    return False
                continue
            g = _content(coeffs)
            if c % g:
                return False
            norm.append(({k: x // g for k, x in coeffs.items()}, c // g))
        eqs = norm
        if eqs:
            i = min(range(len(eqs)), key=lambda j: min(abs(x) for x in eqs[j][0].values()))
            coeffs, c = eqs[i]
            v = min(coeffs, key=lambda k: (abs(coeffs[k]), k))
            a = coeffs[v]
            if a < 0:
                coeffs, c, a = {k: -x for k, x in coeffs.items()}, -c, -a
            if a == 1:
                expr = ({k: -x for k, x in coeffs.items() if k != v}, -c)
                del eqs[i]
            else:
                # v = w - sum(q_k * k) - q_c leaves remainders in [0, a)
                w = f"_w{next(fresh)}"
                expr_coeffs = {w: 1}
                for k, x in coeffs.items():
                    if k != v and x // a:
                        expr_coeffs[k] = -(x // a)
                expr = (expr_coeffs, -(c // a))
            eqs = [_subst(r, v, expr) for r in eqs]
            geqs = [_subst(r, v, expr) for r in geqs]
            continue

        # -- inequalities ----------------------------------------------------
        tight: dict[tuple, int] = {}
        for coeffs, c in geqs:
            coeffs = {k: x for k, x in coeffs.items() if x}
            if not coeffs:
                if c < 0:
                    return False
                continue
            g = _content(coeffs)
            key = tuple(sorted((k, x // g) for k, x in coeffs.items()))
            c = c // g
            if key not in tight or c < tight[key]:
                tight[key] = c
        new_eqs = []
        for key, c in tight.items():
            neg = tuple((k, -x) for k, x in key)
            d = tight.get(neg)
            if d is None:
                continue
            if c + d < 0:
                return False
            if c + d == 0 and key < neg:
                new_eqs.append((dict(key), c))
        if new_eqs:
            eqs = new_eqs
            geqs = [(dict(k), c) for k, c in tight.items()]
            continue
        geqs = [(dict(k), c) for k, c in tight.items()]
        if not geqs:
            return True

        variables = sorted({k for coeffs, _ in geqs for k in coeffs})
        best = None
        for v in variables:
            lo = [r for r in geqs if r[0].get(v, 0) > 0]
            up = [r for r in geqs if r[0].get(v, 0) < 0]
            if not lo or not up:
                best = (v, lo, up, True, -1)
                break
            exact = all(r[0][v] == 1 for r in lo) or all(r[0][v] == -1 for r in up)
            cost = len(lo) * len(up)
            rank = (not exact, cost, v)
            if best is None or rank < best[4]:
                best = (v, lo, up, exact, rank)
        v, lo, up, exact, _ = best
        rest = [r for r in geqs if not r[0].get(v)]
        if not lo or not up:
            geqs = rest
            continue

        def combine(lower: Row, upper: Row, dark: bool) -> Row:
            a_l = lower[0][v]
            a_u = -upper[0][v]
            out: dict[str, int] = {}
            for k, x in lower[0].items():
                if k != v:
                    out[k] = out.get(k, 0) + a_u * x
            for k, x in upper[0].items():
                if k != v:
                    out[k] = out.get(k, 0) + a_l * x
            c = a_u * lower[1] + a_l * upper[1]
            if dark:
                c -= (a_l - 1) * (a_u - 1)
            return out, c

        real = [combine(l, u, False) for l in lo for u in up]
        budget.tick(len(real))
        if exact:
            geqs = rest + real
            continue
        dark = [combine(l, u, True) for l in lo for u in up]
        if _solve([], rest + dark, budget, fresh):
            return True
        if not _solve([], rest + real, budget, fresh):
            return False
        a_max = max(-u[0][v] for u in up)
        for lower in lo:
            a_l = lower[0][v]
            top = (a_max * a_l - a_max - a_l) // a_max
            for i in range(top + 1):
                splinter = (dict(lower[0]), lower[1] - i)
                if _solve([splinter], geqs, budget, fresh):
                    return True
        return False
