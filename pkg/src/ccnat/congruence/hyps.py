"""Equality hypotheses harvested from r-annotated context bindings."""

from __future__ import annotations

from dataclasses import dataclass

from ..reduce import DEFAULT_FUEL, expose_equality
from ..term import Annot, Context, Term


@dataclass(frozen=True)
class Hypothesis:
    index: int  # position of the binding in the context
    name: str
    lhs: Term
    rhs: Term
    beta_steps: int


def hypotheses(ctx: Context, fuel: int = DEFAULT_FUEL) -> tuple[Hypothesis, ...]:
    out = []
    for i, b in enumerate(ctx):
        if b.annot is not Annot.R:
            continue
        r = expose_equality(b.type, fuel)
        if r is not None:
            lhs, rhs, _, steps = r
            out.append(Hypothesis(i, b.name, lhs, rhs, steps))
    return tuple(out)


def extract_hypotheses(ctx: Context, fuel: int = DEFAULT_FUEL) -> list[tuple[Term, Term]]:
    """The object equations usable by conversion, in context order."""
    return [(h.lhs, h.rhs) for h in hypotheses(ctx, fuel)]


__all__ = ["Hypothesis", "extract_hypotheses", "hypotheses"]
