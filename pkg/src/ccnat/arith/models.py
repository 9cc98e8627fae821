"""Small natural-number models of equation systems.

Used as a fast refutation filter: a model on which a goal polynomial is nonzero
proves the goal is not entailed. Failing to find a model proves nothing.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .._kernels import search_box
from .linpoly import LinPoly


class ModelFinder:
    """Row-reduces the system once, then answers many ``find`` queries.

    Solutions are parametrised by the free (non-pivot) variables; a query first
    rewrites the goal over those, then perturbs known models along the free
    variables the goal depends on, and only then scans a bounded box.
    """

    def __init__(self, polys: Sequence[LinPoly]):
        names = sorted({v for p in polys for v in p.coeffs})
        self.names = names
        self.col = {v: i for i, v in enumerate(names)}
        n = len(names)
        rows = []
        for p in polys:
            r = [Fraction(0)] * (n + 1)
            for v, c in p.coeffs.items():
                r[self.col[v]] = Fraction(c)
            r[-1] = Fraction(p.const)
            rows.append(r)
        pivots = []
        rank = 0
        for c in range(n):
            pr = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
            if pr is None:
                continue
            rows[rank], rows[pr] = rows[pr], rows[rank]
            pv = rows[rank][c]
            rows[rank] = [x / pv for x in rows[rank]]
            for i in range(len(rows)):
                if i != rank and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
            pivots.append(c)
            rank += 1
        # a nonzero constant row means no rational solution at all
        self.solvable = all(rows[i][-1] == 0 for i in range(rank, len(rows)))
        pivot_set = set(pivots)
        self.free = [i for i in range(n) if i not in pivot_set]
        self._rows = rows[:rank]
        self._pivots = pivots
        # x[c] = (const - sum(coeffs[k] * x[free[k]])) / den
        self._piv = []
        for c, row in zip(pivots, self._rows):
            den = 1
            for x in row:
                den = lcm(den, x.denominator)
            coeffs = [int(row[f] * den) for f in self.free]
            self._piv.append((c, den, int(-row[-1] * den), coeffs))
        self.models: list[list[int]] = []

    def _complete(self, freevals: list[int]) -> list[int] | None:
        x = [0] * len(self.names)
        for k, f in enumerate(self.free):
            x[f] = freevals[k]
        for c, den, const, coeffs in self._piv:
            num = const - sum(a * b for a, b in zip(coeffs, freevals))
            if num < 0 or num % den:
                return None
            x[c] = num // den
        return x

    def _reduced(self, goal: LinPoly) -> tuple[list[Fraction], Fraction]:
        """The goal as an affine function of the free variables."""
        lin = [Fraction(0)] * len(self.free)
        const = Fraction(goal.const)
        pos = {f: k for k, f in enumerate(self.free)}
        for v, g in goal.coeffs.items():
            i = self.col.get(v)
            if i is None:
                continue
            if i in pos:
                lin[pos[i]] += g
                continue
            _, den, pc, coeffs = self._piv[self._pivots.index(i)]
            const += Fraction(g * pc, den)
            for k, a in enumerate(coeffs):
                lin[k] -= Fraction(g * a, den)
        return lin, const

    def _value(self, goal: LinPoly, x: list[int], extra: dict[str, int]) -> int:
        total = goal.const
        for v, k in goal.coeffs.items():
            i = self.col.get(v)
            total += k * (x[i] if i is not None else extra.get(v, 0))
        return total

    def _named(self, x: list[int], extra: dict[str, int]) -> dict[str, int]:
        out = dict(zip(self.names, x))
        out.update(extra)
        return out

    def find(self, goal: LinPoly | None = None, box: int = 3, limit: int = 4096) -> dict[str, int] | None:
        """A model (as a name -> value map) on which ``goal`` is nonzero, if one is found."""
        if not self.solvable:
            return None
        if not self.models:
            x, _ = search_box(len(self.names), self.free, [box] * len(self.free), self._piv, None, 0, limit)
            if x is None:
                return None
            self.models.append(x)
        if goal is None:
            return self._named(self.models[0], {})
        extra_vars = sorted(v for v in goal.coeffs if v not in self.col)
        if extra_vars:
            # unconstrained variables: pick 0 or 1 for the first so the goal is nonzero
            x = self.models[0]
            base = {v: 0 for v in extra_vars}
            if self._value(goal, x, base) == 0:
                base[extra_vars[0]] = 1
            return self._named(x, base)
        lin, const = self._reduced(goal)
        relevant = [k for k, a in enumerate(lin) if a != 0]
        if not relevant:
            # constant on every rational solution
            return self._named(self.models[0], {}) if const != 0 else None
        for x in self.models:
            if self._value(goal, x, {}) != 0:
                return self._named(x, {})
        for x in list(self.models):
            vals = [x[f] for f in self.free]
            for k in relevant:
                for step in range(1, box + 2):
                    for cand in (vals[k] + step, vals[k] - step):
                        if cand < 0:
                            continue
                        trial = list(vals)
                        trial[k] = cand
                        y = self._complete(trial)
                        if y is not None and self._value(goal, y, {}) != 0:
                            self.models.append(y)
                            return self._named(y, {})
        order = relevant + [k for k in range(len(self.free)) if k not in relevant]
        free = [self.free[k] for k in order]
        piv = [(c, den, const_, [coeffs[k] for k in order]) for c, den, const_, coeffs in self._piv]
        g = [0] * len(self.names)
        for v, k in goal.coeffs.items():
            g[self.col[v]] = k
        y, _ = search_box(len(self.names), free, [box] * len(free), piv, g, goal.const, limit)
        if y is None:
            return None
        self.models.append(y)
        return self._named(y, {})


__all__ = ["ModelFinder"]
