"""Reference implementations of the hot kernels, used when the extension is absent."""

from __future__ import annotations


class UnionFind:
    """Union-find over dense integer ids with path halving and union by rank."""

    def __init__(self):
        self._parent: list[int] = []
        self._rank: list[int] = []

    def __len__(self) -> int:
        return len(self._parent)

    def add(self) -> int:
        i = len(self._parent)
        self._parent.append(i)
        self._rank.append(0)
        return i

    def copy(self) -> "UnionFind":
        other = UnionFind()
        other._parent = list(self._parent)
        other._rank = list(self._rank)
        return other

    def find(self, i: int) -> int:
        parent = self._parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, a: int, b: int) -> int:
        """Merge the classes of a and b; return the new root, or -1 if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return -1
        rank = self._rank
        if rank[ra] < rank[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if rank[ra] == rank[rb]:
            rank[ra] += 1
        return ra


def search_box(nvars, free, bounds, pivots, goal=None, goal_const=0, limit=0):
    """Scan every assignment of the free variables inside ``0..bounds[k]``.

    ``pivots`` holds ``(index, den, const, coeffs)`` with
    ``x[index] = (const - sum(coeffs[k] * x[free[k]])) / den``; assignments whose
    pivot values are not natural numbers are skipped. Returns ``(x, visited)`` for
    the first solution on which ``goal . x + goal_const != 0`` (the first solution
    at all when ``goal`` is None), or ``(None, visited)``. A positive ``limit`` caps
    the number of visited points; hitting it also returns ``(None, visited)``.
    """
    nf = len(free)
    x = [0] * nvars
    vals = [0] * nf
    visited = 0
    while True:
        if limit and visited >= limit:
            return None, visited
        visited += 1
        for k in range(nf):
            x[free[k]] = vals[k]
        ok = True
        for index, den, const, coeffs in pivots:
            num = const
            for k in range(nf):
                num -= coeffs[k] * vals[k]
            if num < 0 or num % den:
                ok = False
                break
            x[index] = num // den
        if ok:
            if goal is None:
                return list(x), visited
            g = goal_const
            for i in range(nvars):
                g += goal[i] * x[i]
            if g != 0:
                return list(x), visited
        k = 0
        while k < nf:
            if vals[k] < bounds[k]:
                vals[k] += 1
                break
            vals[k] = 0
            k += 1
        if k == nf:
            return None, visited
