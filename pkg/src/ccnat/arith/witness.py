"""Arithmetic witnesses and their search-free replay.

Premises and goals are polynomials read as ``p = 0``. A witness never asks the
checker to search: it names integer multipliers, the combined polynomial they
must produce, and, for case analyses, the exact list of values to visit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence, Union

from .linpoly import LinPoly

MAX_CASES = 100_000


@dataclass(frozen=True)
class IntCombination:
    """``sum(m_i * premise_i) == trace``, and the trace settles the claim.

    mode ``goal``: trace == scale * goal with scale != 0.
    mode ``gcd``: the coefficient gcd of trace does not divide its constant.
    mode ``sign``: trace has natural coefficients and a positive constant.
    """

    multipliers: tuple[tuple[int, int], ...]
    trace: LinPoly
    mode: str = "goal"
    scale: int = 1


@dataclass(frozen=True)
class CaseEnumeration:
    """``sum(m_i * premise_i) == trace`` bounds ``var``; one sub-witness per value.

    The trace must have natural coefficients, a nonpositive constant and a positive
    coefficient on ``var``, so ``var <= -const // coeff``. Case ``k`` is replayed
    with the extra premise ``var - k`` appended.
    """

    multipliers: tuple[tuple[int, int], ...]
    trace: LinPoly
    var: str
    cases: tuple[tuple[int, "Witness"], ...]


Witness = Union[IntCombination, CaseEnumeration]


def combine(premises: Sequence[LinPoly], multipliers) -> LinPoly | None:
    acc = LinPoly()
    for i, m in multipliers:
        if not 0 <= i < len(premises) or m == 0:
            return None
        acc = acc + premises[i].scale(m)
    return acc


def refutes(trace: LinPoly, mode: str) -> bool:
    if mode == "gcd":
        g = trace.content()
        return trace.const != 0 if g == 0 else trace.const % g != 0
    if mode == "sign":
        return trace.const > 0 and all(c > 0 for c in trace.coeffs.values())
    return False


def check(witness: Witness, premises: Sequence[LinPoly], goal: LinPoly | None) -> bool:
    """Replay ``witness`` for ``premises |= goal = 0`` (``goal=None``: premises unsatisfiable)."""
    try:
        return _check(witness, list(premises), goal, [0])
    except RecursionError:
        return False


def _check(w, premises, goal, visited) -> bool:
    visited[0] += 1
    if visited[0] > MAX_CASES:
        return False
    if isinstance(w, IntCombination):
        idx = [i for i, _ in w.multipliers]
        if len(set(idx)) != len(idx):
            return False
        if combine(premises, w.multipliers) != w.trace:
            return False
        if w.mode == "goal":
            return goal is not None and w.scale != 0 and w.trace == goal.scale(w.scale)
        if w.mode in ("gcd", "sign"):
            return refutes(w.trace, w.mode)
        return False
    if isinstance(w, CaseEnumeration):
        idx = [i for i, _ in w.multipliers]
        if len(set(idx)) != len(idx):
            return False
        if combine(premises, w.multipliers) != w.trace:
            return False
        t = w.trace
        c = t.coeffs.get(w.var, 0)
        if c <= 0 or t.const > 0 or any(k < 0 for k in t.coeffs.values()):
            return False
        bound = (-t.const) // c
        if [k for k, _ in w.cases] != list(range(bound + 1)):
            return False
        for k, sub in w.cases:
            fixed = LinPoly(-k, {w.var: 1})
            if not _check(sub, premises + [fixed], goal, visited):
                return False
        return True
    return False
