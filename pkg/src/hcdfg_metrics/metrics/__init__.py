"""Per-graph metrics: operation counts, critical path, parallelism, memory and control orientation."""

from .characterize import CharacterizationTree, characterize
from .combine import (
    MetricRecord,
    OpCounts,
    combine_dag,
    combine_for,
    combine_if,
    combine_par,
    combine_seq,
    combine_switch,
    combine_while,
    count_ops,
    critical_path,
    gamma_dfg,
    longest_path,
)
from .config import CostTable, Profile
from .unroll import carried_dependences, max_unroll_factor, reductions

__all__ = [
    "CharacterizationTree",
    "CostTable",
    "MetricRecord",
    "OpCounts",
    "Profile",
    "carried_dependences",
    "characterize",
    "combine_dag",
    "combine_for",
    "combine_if",
    "combine_par",
    "combine_seq",
    "combine_switch",
    "combine_while",
    "count_ops",
    "critical_path",
    "gamma_dfg",
    "longest_path",
    "max_unroll_factor",
    "reductions",
]
