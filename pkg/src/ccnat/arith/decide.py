"""Entailment between linear equations over the naturals, with witnesses."""

from __future__ import annotations

import threading
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import lp
from .linpoly import LinEq, LinPoly
from .omega import DEFAULT_NODE_LIMIT, ArithResourceLimit, nat_feasible
from .witness import CaseEnumeration, IntCombination, Witness, check, combine

MAX_WITNESS_CASES = 20_000


class WitnessError(RuntimeError):
    """No witness could be assembled for an entailment the decision procedure accepted."""


_FEAS_CACHE: dict[frozenset, bool] = {}
_FEAS_LOCK = threading.Lock()


def _key(polys: Iterable[LinPoly]) -> frozenset:
    return frozenset(LinEq(p, LinPoly()) for p in polys if not p.is_zero())


def feasible(polys: Iterable[LinPoly], node_limit: int = DEFAULT_NODE_LIMIT) -> bool:
    key = _key(polys)
    hit = _FEAS_CACHE.get(key)
    if hit is None:
        hit = nat_feasible([e.diff() for e in key], node_limit)
        with _FEAS_LOCK:
            _FEAS_CACHE[key] = hit
    return hit


def _as_poly(e) -> LinPoly:
    return e.diff() if isinstance(e, LinEq) else e


def consistent(E: Iterable[LinEq | LinPoly], node_limit: int = DEFAULT_NODE_LIMIT) -> bool:
    """Is the system satisfiable over the naturals? Raises ArithResourceLimit if unknown."""
    return feasible([_as_poly(e) for e in E], node_limit)


def entails_poly(premises: Sequence[LinPoly], goal: LinPoly, node_limit: int = DEFAULT_NODE_LIMIT) -> bool:
    if goal.is_zero():
        return True
    premises = [p for p in premises if not p.is_zero()]
    # goal != 0 over the naturals means goal >= 1 or -goal >= 1
    below = goal + LinPoly.var("_s1").shifted(1)
    above = goal.scale(-1) + LinPoly.var("_s2").shifted(1)
    return not feasible(premises + [below], node_limit) and not feasible(premises + [above], node_limit)


def entails(
    E: Iterable[LinEq | LinPoly],
    goal: LinEq | LinPoly,
    *,
    witness: bool = True,
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> tuple[bool, Witness | None]:
    """Decide whether every natural solution of ``E`` satisfies ``goal``.

    Returns ``(verdict, witness)``; the witness is replayable against
    ``[e.diff() for e in E]`` with :func:`ccnat.arith.witness.check`.
    """
    premises = [_as_poly(e) for e in E]
    g = _as_poly(goal)
    if not entails_poly(premises, g, node_limit):
        return False, None
    if not witness:
        return True, None
    w = prove(premises, g)
    return True, w


# -- witness search ------------------------------------------------------------


def _integral(ys: dict[int, Fraction]) -> tuple[tuple[tuple[int, int], ...], int]:
    den = 1
    for y in ys.values():
        den = lcm(den, y.denominator)
    mults = tuple((i, int(y * den)) for i, y in sorted(ys.items()) if y != 0)
    return mults, den


def _span(premises: Sequence[LinPoly], goal: LinPoly) -> dict[int, Fraction] | None:
    """Rational y with sum(y_i * premises_i) == goal, if any."""
    coords = sorted({v for p in list(premises) + [goal] for v in p.coeffs})
    keys = coords + ["#const"]

    def vec(p: LinPoly) -> list[Fraction]:
        return [Fraction(p.coeffs.get(k, 0)) for k in coords] + [Fraction(p.const)]

    cols = [vec(p) for p in premises]
    target = vec(goal)
    rows = len(keys)
    n = len(cols)
    # augmented matrix rows x (n + 1)
    M = [[cols[j][r] for j in range(n)] + [target[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if M[i][n] != 0:
            return None
    return {c: M[i][n] for i, c in enumerate(pivots) if M[i][n] != 0}


def _lattice_refutation(premises: Sequence[LinPoly]) -> dict[int, Fraction] | None:
    """Rational y whose combination has a coefficient gcd not dividing its constant."""
    rows = [(dict(p.coeffs), p.const, {i: Fraction(1)}) for i, p in enumerate(premises)]
    fresh = 0
    while rows:
        coeffs, c, combo = rows.pop(0)
        coeffs = {k: x for k, x in coeffs.items() if x}
        if not coeffs:
            if c != 0:
                return combo
            continue
        g = 0
        for x in coeffs.values():
            g = gcd(g, x)
        if c % g:
            return combo
        while len(coeffs) > 1:
            v = min(coeffs, key=lambda k: (abs(coeffs[k]), k))
            a = coeffs[v]
            # v = w - sum(q_k k): unimodular, applied to every row
            fresh += 1
            w = f"_l{fresh}"
            qs = {k: x // a for k, x in coeffs.items() if k != v and x // a}

            def sub(cf: dict[str, int]) -> dict[str, int]:
                b = cf.get(v, 0)
                if not b:
                    return cf
                out = {k: x for k, x in cf.items() if k != v}
                out[w] = out.get(w, 0) + b
                for k, q in qs.items():
                    out[k] = out.get(k, 0) - b * q
                return {k: x for k, x in out.items() if x}

            coeffs = sub(coeffs)
            rows = [(sub(cf), cc, cb) for cf, cc, cb in rows]
        (v, a), = coeffs.items()
        new_rows = []
        for cf, cc, cb in rows:
            b = cf.get(v, 0)
            if b:
                f = Fraction(b, a)
                cf = {k: x for k, x in cf.items() if k != v}
                cc = int(cc - f * c)
                cb = dict(cb)
                for i, y in combo.items():
                    cb[i] = cb.get(i, 0) - f * y
                cb = {i: y for i, y in cb.items() if y}
            new_rows.append((cf, cc, cb))
        rows = new_rows
    return None


def _lp_matrix(premises: Sequence[LinPoly]):
    names = sorted({v for p in premises for v in p.coeffs})
    A = [[p.coeffs.get(v, 0) for v in names] for p in premises]
    b = [-p.const for p in premises]
    return names, A, b


def _from_dual(z: list[Fraction]) -> dict[int, Fraction]:
    return {i: y for i, y in enumerate(z) if y != 0}


def prove(premises: Sequence[LinPoly], goal: LinPoly | None) -> Witness:
    """Assemble a witness for ``premises |= goal = 0`` (goal None: refutation)."""
    budget = [0]
    w = _prove(list(premises), goal, budget)
    if not check(w, premises, goal):
        raise WitnessError("assembled witness does not replay")
    return w


def _prove(premises: list[LinPoly], goal: LinPoly | None, budget: list[int]) -> Witness:
    budget[0] += 1
    if budget[0] > MAX_WITNESS_CASES:
        raise WitnessError("case analysis too large")
    if goal is not None:
        ys = _span(premises, goal)
        if ys is not None:
            mults, den = _integral(ys)
            trace = combine(premises, mults) if mults else LinPoly()
            return IntCombination(mults, trace, "goal", den)
    ys = _lattice_refutation(premises)
    if ys is not None:
        mults, _ = _integral(ys)
        return IntCombination(mults, combine(premises, mults), "gcd")
    names, A, b = _lp_matrix(premises)
    if names:
        res = lp.maximize(A, b, None)
        if res.status == "infeasible":
            mults, _ = _integral(_from_dual(res.dual))
            trace = combine(premises, mults)
            return IntCombination(mults, trace, "sign")
        # variables already pinned by an earlier case split give no progress
        pinned = {v for p in premises if len(p.coeffs) == 1 for v in p.coeffs}
        best = None
        for j, v in enumerate(names):
            if v in pinned:
                continue
            res = lp.maximize(A, b, j)
            if res.status != "optimal":
                continue
            mults, _ = _integral(_from_dual(res.dual))
            trace = combine(premises, mults) if mults else LinPoly()
            c = trace.coeffs.get(v, 0)
            if c <= 0 or trace.const > 0 or any(k < 0 for k in trace.coeffs.values()):
                continue
            bound = (-trace.const) // c
            if best is None or bound < best[0]:
                best = (bound, v, mults, trace)
        if best is not None:
            bound, v, mults, trace = best
            cases = []
            for k in range(bound + 1):
                sub = premises + [LinPoly(-k, {v: 1})]
                cases.append((k, _prove(sub, goal, budget)))
            return CaseEnumeration(mults, trace, v, tuple(cases))
    raise WitnessError("no witness shape applies")


__all__ = [
    "ArithResourceLimit",
    "WitnessError",
    "consistent",
    "entails",
    "entails_poly",
    "feasible",
    "prove",
]
