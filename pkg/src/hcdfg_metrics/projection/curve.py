"""Delay versus resource trade-off curves."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional

from ..graph.model import Hcdfg
from ..metrics.config import CostTable, Profile
from .flatten import DEFAULT_NODE_CAP, flatten_for_scheduling
from .schedule import KINDS, ResourceModel, TradeoffPoint, schedule

CSV_HEADER = "budget," + ",".join(KINDS) + ",speedup,feasible"


@dataclass(frozen=True)
class TradeoffCurve:
    function: str
    points: tuple  # TradeoffPoint, budget ascending
    critical_path: int
    sequential: int
    dropped_branches: int = 0

    @property
    def tightest(self) -> Optional[TradeoffPoint]:
        return next((p for p in self.points if p.feasible), None)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for p in self.points:
            res = ",".join(str(r) for r in p.resources)
            out.write(f"{p.budget},{res},{p.speedup:.6f},{int(p.feasible)}\n")
        return out.getvalue()

    def to_gnuplot(self) -> str:
        """Inline data block, usable as ``plot $curve using 1:5``."""
        lines = [f"# {self.function}: critical path {self.critical_path}, sequential {self.sequential}"]
        if self.dropped_branches:
            lines.append(f"# {self.dropped_branches} lighter branch(es) dropped while flattening")
        lines.append("# " + CSV_HEADER.replace(",", " "))
        lines.append("$curve << EOD")
        for p in self.points:
            res = " ".join(str(r) for r in p.resources)
            lines.append(f"{p.budget} {res} {p.speedup:.6f} {int(p.feasible)}")
        lines.append("EOD")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "critical_path": self.critical_path,
            "sequential": self.sequential,
            "dropped_branches": self.dropped_branches,
            "points": [p.as_dict() for p in self.points],
        }


def sample_budgets(lo: int, hi: int, n_points: int) -> list[int]:
    """Distinct integer budgets from ``lo`` to ``hi``, geometrically spaced.

    Yields ``n_points`` budgets, or every integer of the range when it holds fewer.
    """
    if n_points < 2:
        raise ValueError("a curve needs at least two points")
    if hi - lo + 1 <= n_points:
        return list(range(lo, hi + 1))
    base = max(lo, 1)
    ratio = hi / base
    out = [lo]
    for k in range(1, n_points - 1):
        b = round(base * ratio ** (k / (n_points - 1)))
        out.append(min(hi - (n_points - 1 - k), max(out[-1] + 1, b)))
    out.append(hi)
    return out


def monotone(points: list[TradeoffPoint]) -> list[TradeoffPoint]:
    """Make resource vectors componentwise non-increasing in the budget.

    A schedule that meets a budget also meets every larger one, so each
    feasible vector is replaced by the componentwise minimum of itself and
    the vectors found for smaller budgets.
    """
    out = list(points)
    best = None
    for i, p in enumerate(out):
        if not p.feasible:
            continue
        best = p.resources if best is None else tuple(min(a, b) for a, b in zip(p.resources, best))
        out[i] = TradeoffPoint(p.budget, best, True, p.speedup)
    return out


def tradeoff_curve(h: Hcdfg, model: Optional[ResourceModel] = None, costs: Optional[CostTable] = None,
                   n_points: int = 10, profile: Optional[Profile] = None,
                   node_cap: int = DEFAULT_NODE_CAP) -> TradeoffCurve:
    costs = costs or CostTable()
    dag = flatten_for_scheduling(h, profile, costs, node_cap)
    cp = dag.critical_path(costs)
    seq = dag.sequential_cost(costs)
    points = [schedule(dag, b, model, costs) for b in sample_budgets(cp, seq, n_points)]
    return TradeoffCurve(h.function, tuple(monotone(points)), cp, seq, dag.dropped_branches)
