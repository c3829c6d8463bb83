"""Exact winner determination for approval-based multiwinner rules."""

from .core import (
    CCAV,
    class_partition,
    compute_params,
    Election,
    format_election,
    format_instance,
    FormatError,
    hamming,
    harmonic,
    Instance,
    MAV,
    meets_threshold,
    parse_election,
    parse_instance,
    PAV,
    RULES,
    score,
    SolveResult,
)
from .oracle import brute_force, BudgetExceededError

__all__ = [
    "CCAV",
    "MAV",
    "PAV",
    "RULES",
    "Election",
    "Instance",
    "SolveResult",
    "FormatError",
    "BudgetExceededError",
    "brute_force",
    "class_partition",
    "compute_params",
    "format_election",
    "format_instance",
    "hamming",
    "harmonic",
    "meets_threshold",
    "parse_election",
    "parse_instance",
    "score",
]
