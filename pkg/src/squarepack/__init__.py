"""Exact tools for packing squares in a unit square and bounding f(n)."""

from .bounds import (
    Ledger,
    LowerBound,
    UpperBound,
    epsilon_interval,
    propagate,
    theorem1_implication,
    theorem2_epsilon_rule,
)
from .constructions import combine, grid, lemma_rhs
from .geometry import Packing, Square, scale_translate, squares_disjoint, total_side, verify

__all__ = [
    "Ledger",
    "LowerBound",
    "Packing",
    "Square",
    "UpperBound",
    "combine",
    "epsilon_interval",
    "grid",
    "lemma_rhs",
    "propagate",
    "scale_translate",
    "squares_disjoint",
    "theorem1_implication",
    "theorem2_epsilon_rule",
    "total_side",
    "verify",
]
