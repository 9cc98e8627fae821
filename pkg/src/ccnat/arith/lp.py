"""Exact rational simplex, used only to find dual vectors for arithmetic witnesses."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    dual: list[Fraction] | None = None  # row multipliers certifying the status


class _Tableau:
    def __init__(self, A: list[list[Fraction]], b: list[Fraction]):
        m, n = len(A), len(A[0]) if A else 0
        self.m, self.n = m, n
        self.sign = [1] * m
        rows = []
        for r in range(m):
            row = list(A[r])
            rhs = b[r]
            if rhs < 0:
                row = [-x for x in row]
                rhs = -rhs
                self.sign[r] = -1
            art = [Fraction(0)] * m
            art[r] = Fraction(1)
            rows.append(row + art + [rhs])
        self.T = rows
        self.basis = [n + r for r in range(m)]
        self.alive = [True] * m

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        p = T[r][c]
        T[r] = [x / p for x in T[r]]
        for i in range(self.m):
            if i != r and T[i][c] != 0:
                f = T[i][c]
                Ri = T[i]
                Rr = T[r]
                T[i] = [a - f * b for a, b in zip(Ri, Rr)]
        self.basis[r] = c

    def run(self, cost: list[Fraction], allowed: int) -> bool:
        """Minimise ``cost``; columns >= ``allowed`` never enter. False if unbounded."""
        while True:
            cb = [cost[self.basis[i]] for i in range(self.m)]
            enter = None
            for j in range(allowed):
                if j in self.basis:
                    continue
                red = cost[j] - sum(cb[i] * self.T[i][j] for i in range(self.m) if self.alive[i])
                if red < 0:
                    enter = j
                    break
            if enter is None:
                return True
            best = None
            for i in range(self.m):
                if not self.alive[i]:
                    continue
                a = self.T[i][enter]
                if a > 0:
                    ratio = self.T[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)

    def duals(self, cost: list[Fraction]) -> list[Fraction]:
        n, m = self.n, self.m
        y = []
        for r in range(m):
            v = sum(cost[self.basis[i]] * self.T[i][n + r] for i in range(m) if self.alive[i])
            y.append(v * self.sign[r])
        return y

    def objective(self, cost: list[Fraction]) -> Fraction:
        return sum(cost[self.basis[i]] * self.T[i][-1] for i in range(self.m) if self.alive[i])


def maximize(A: Sequence[Sequence[int]], b: Sequence[int], target: int | None) -> LPResult:
    """max x[target] s.t. A x = b, x >= 0 (pure feasibility when target is None).

    Infeasible: ``dual`` is z with z.A >= 0 and z.b < 0.
    Optimal: ``dual`` is z with z.A >= e_target and z.b == value.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    FA = [[Fraction(x) for x in row] for row in A]
    Fb = [Fraction(x) for x in b]
    if m == 0:
        return LPResult("unbounded") if target is not None else LPResult("optimal", Fraction(0), [])
    tab = _Tableau(FA, Fb)
    cost1 = [Fraction(0)] * n + [Fraction(1)] * m
    tab.run(cost1, n + m)
    if tab.objective(cost1) > 0:
        y = tab.duals(cost1)
        return LPResult("infeasible", None, [-v for v in y])
    # drive zero-level artificials out of the basis, dropping redundant rows
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.T[i][j] != 0 and j not in tab.basis), None)
            if col is None:
                tab.alive[i] = False
            else:
                tab.pivot(i, col)
    if target is None:
        return LPResult("optimal", Fraction(0), [Fraction(0)] * m)
    cost2 = [Fraction(0)] * (n + m)
    cost2[target] = Fraction(-1)
    if not tab.run(cost2, n):
        return LPResult("unbounded")
    y = tab.duals(cost2)
    return LPResult("optimal", -tab.objective(cost2), [-v for v in y])
