"""Linear arithmetic over the naturals: caps, entailment and witnesses.

The search modules (decision procedure, omega test, simplex, model finder) are
loaded on first use, so importing caps and witness replay stays light; the
certificate verifier relies on that.
"""

import importlib

from .linpoly import LinEq, LinPoly, SyntacticAbstraction, cap, is_algebraic, syntactic_system, var_id
from .witness import CaseEnumeration, IntCombination, Witness, check

_LAZY = {
    "WitnessError": "decide",
    "consistent": "decide",
    "entails": "decide",
    "entails_poly": "decide",
    "feasible": "decide",
    "prove": "decide",
    "DEFAULT_NODE_LIMIT": "omega",
    "ArithResourceLimit": "omega",
    "nat_feasible": "omega",
    "ModelFinder": "models",
}


def __getattr__(name):
    mod = _LAZY.get(name)
    if mod is None:
        raise AttributeError(name)
    return getattr(importlib.import_module(f"{__name__}.{mod}"), name)


__all__ = sorted(
    [
        "CaseEnumeration",
        "IntCombination",
        "LinEq",
        "LinPoly",
        "SyntacticAbstraction",
        "Witness",
        "cap",
        "check",
        "is_algebraic",
        "syntactic_system",
        "var_id",
    ]
    + list(_LAZY)
)
