"""Scheduling-based projection of a function onto abstract hardware resources."""

from .curve import TradeoffCurve, monotone, sample_budgets, tradeoff_curve
from .flatten import DEFAULT_NODE_CAP, FlatDag, flatten_for_scheduling
from .schedule import ALU, KINDS, MEMPORT, MUL, ResourceModel, TradeoffPoint, peak_usage, schedule, schedule_ops

__all__ = [
    "ALU",
    "DEFAULT_NODE_CAP",
    "FlatDag",
    "KINDS",
    "MEMPORT",
    "MUL",
    "ResourceModel",
    "TradeoffCurve",
    "TradeoffPoint",
    "flatten_for_scheduling",
    "monotone",
    "peak_usage",
    "sample_budgets",
    "schedule",
    "schedule_ops",
    "tradeoff_curve",
]
