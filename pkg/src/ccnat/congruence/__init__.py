"""Conversion modulo arithmetic hypotheses."""

from .convert import (
    ConvJudgment,
    clear_caches,
    convertible,
    is_consistent,
    saturate,
    state_for,
    weak_convertible,
    weak_equations,
)
from .hyps import Hypothesis, extract_hypotheses, hypotheses
from .proof import Proof
from .state import Consistency, ConversionFuelExhausted, ConversionState

__all__ = [
    "Consistency",
    "ConvJudgment",
    "ConversionFuelExhausted",
    "ConversionState",
    "Hypothesis",
    "Proof",
    "clear_caches",
    "convertible",
    "extract_hypotheses",
    "hypotheses",
    "is_consistent",
    "saturate",
    "state_for",
    "weak_convertible",
    "weak_equations",
]
