"""Proof-checking kernel for the calculus of constructions with naturals and arithmetic conversion."""

__version__ = "0.1.0"
