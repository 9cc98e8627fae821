"""Derivation trees for conversion judgments, linearised into certificates by ``ccnat.cert``.

Every node concludes ``lhs ~ rhs`` under the base context extended by the
binders crossed on the way down (see :class:`PBinder`).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..arith.witness import Witness
from ..reduce import Path
from ..term import Annot, Term


@dataclass(frozen=True, eq=False)
class Proof:
    lhs: Term
    rhs: Term


@dataclass(frozen=True, eq=False)
class PBetaIota(Proof):
    """``lhs`` reduces to ``rhs`` by contracting the redexes at ``paths`` in order."""

    paths: tuple[Path, ...] = ()


@dataclass(frozen=True, eq=False)
class PHyp(Proof):
    index: int = 0
    beta_steps: int = 0


@dataclass(frozen=True, eq=False)
class PCongr(Proof):
    """Same head constructor; ``children[i]`` proves the i-th components equal (None: identical)."""

    children: tuple[Proof | None, ...] = ()


@dataclass(frozen=True, eq=False)
class PBinder(Proof):
    """Binders with equal annotation: domains equal, bodies equal under ``[var :^annot domain]``."""

    domain: Proof | None = None
    body: Proof | None = None
    var: str = "x"
    annot: Annot = Annot.U


@dataclass(frozen=True, eq=False)
class PArith(Proof):
    premises: tuple[Proof, ...] = ()
    witness: Witness | None = None


@dataclass(frozen=True, eq=False)
class PSym(Proof):
    sub: Proof | None = None


@dataclass(frozen=True, eq=False)
class PTrans(Proof):
    first: Proof | None = None
    second: Proof | None = None


@dataclass(frozen=True, eq=False)
class PCollapse(Proof):
    """Any two objects are convertible once ``refutation`` proves ``0 ~ S 0``."""

    refutation: Proof | None = None


def refl(t: Term) -> Proof:
    return PBetaIota(t, t, ())


def sym(p: Proof) -> Proof:
    if p.lhs is p.rhs:
        return p
    if isinstance(p, PSym):
        return p.sub
    return PSym(p.rhs, p.lhs, p)


def trans(*ps: Proof) -> Proof:
    """Chain proofs, dropping reflexive links."""
    ps = [p for p in ps if p.lhs is not p.rhs]
    if not ps:
        raise ValueError("trans of nothing")
    out = ps[0]
    for p in ps[1:]:
        if out.rhs is not p.lhs:
            raise ValueError("trans: conclusions do not chain")
        out = PTrans(out.lhs, p.rhs, out, p)
    return out


def chain(lhs: Term, *ps: Proof) -> Proof:
    live = [p for p in ps if p.lhs is not p.rhs]
    return trans(*live) if live else refl(lhs)


__all__ = [
    "PArith",
    "PBetaIota",
    "PBinder",
    "PCollapse",
    "PCongr",
    "PHyp",
    "PSym",
    "PTrans",
    "Proof",
    "chain",
    "refl",
    "sym",
    "trans",
]
