"""Time-constrained list scheduling that searches for a small resource vector."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..graph.model import CONDITIONAL, MEMORY
from ..metrics.config import CostTable
from .flatten import FlatDag

ALU = "alu"
MUL = "mul"
MEMPORT = "memport"
KINDS = (ALU, MUL, MEMPORT)

_MUL_OPS = frozenset(["*", "/", "%"])


@dataclass(frozen=True)
class ResourceModel:
    """Operator to resource-kind mapping.  Unlisted operators are ALU-like."""

    overrides: Mapping[str, str] = field(default_factory=dict)

    def kind(self, node) -> Optional[str]:
        if node is None:
            return None
        if node.kind == MEMORY:
            return MEMPORT if node.is_global_access else None
        if node.op in self.overrides:
            return self.overrides[node.op]
        if node.kind == CONDITIONAL:
            return ALU
        return MUL if node.op in _MUL_OPS else ALU


@dataclass(frozen=True)
class TradeoffPoint:
    budget: int
    resources: tuple  # units per kind, in KINDS order
    feasible: bool
    speedup: float = 0.0

    def as_dict(self) -> dict:
        return {
            "budget": self.budget,
            **dict(zip(KINDS, self.resources)),
            "speedup": self.speedup,
            "feasible": self.feasible,
        }


def _alap(dag: FlatDag, d: list[int], budget: int) -> list[int]:
    n = len(d)
    latest_finish = [budget] * n
    lst = [0] * n
    for i in range(n - 1, -1, -1):
        lst[i] = latest_finish[i] - d[i]
        for p in dag.preds[i]:
            if lst[i] < latest_finish[p]:
                latest_finish[p] = lst[i]
    return lst


def _list_schedule(dag: FlatDag, d: list[int], kinds: list, lst: list[int], limits: dict):
    """One pass; returns ``(start, None)`` or ``(None, (kind, shortfall))`` on a missed deadline."""
    n = len(d)
    succ = [[] for _ in range(n)]
    pending = [0] * n
    for i, ps in enumerate(dag.preds):
        pending[i] = len(ps)
        for p in ps:
            succ[p].append(i)
    ready_at = [0] * n
    start = [None] * n
    waiting = [(0, i) for i in range(n) if pending[i] == 0]
    heapq.heapify(waiting)
    queues = {k: [] for k in limits}
    busy = {k: [] for k in limits}  # finish times of occupied units
    done = 0
    t = 0
    while done < n:
        free_now = []
        while waiting and waiting[0][0] <= t:
            _, i = heapq.heappop(waiting)
            free_now.append(i)
        while free_now:
            i = free_now.pop()
            k = kinds[i]
            if k is None or d[i] == 0:
                start[i] = t
                done += 1
                f = t + d[i]
                for j in succ[i]:
                    ready_at[j] = max(ready_at[j], f)
                    pending[j] -= 1
                    if pending[j] == 0:
                        if ready_at[j] <= t:
                            free_now.append(j)
                        else:
                            heapq.heappush(waiting, (ready_at[j], j))
            else:
                heapq.heappush(queues[k], (lst[i], i))
        for k in sorted(queues):
            q, units = queues[k], busy[k]
            while units and units[0] <= t:
                heapq.heappop(units)
            while q and len(units) < limits[k]:
                _, i = heapq.heappop(q)
                start[i] = t
                done += 1
                f = t + d[i]
                heapq.heappush(units, f)
                for j in succ[i]:
                    ready_at[j] = max(ready_at[j], f)
                    pending[j] -= 1
                    if pending[j] == 0:
                        heapq.heappush(waiting, (ready_at[j], j))
            if q and q[0][0] <= t:
                return None, (k, sum(1 for s, _ in q if s <= t))
        events = []
        if waiting:
            events.append(waiting[0][0])
        for k, q in queues.items():
            if q and busy[k]:
                events.append(busy[k][0])
        if not events:
            break
        t = min(events)
    if done < n:
        raise RuntimeError("scheduler stalled")  # unreachable on a DAG
    return start, None


def schedule(dag: FlatDag, budget: int, model: Optional[ResourceModel] = None,
             costs: Optional[CostTable] = None) -> TradeoffPoint:
    """Fit ``dag`` into ``budget`` cycles with as few units per kind as the heuristic finds."""
    return schedule_ops(dag, budget, model, costs)[0]


def schedule_ops(dag: FlatDag, budget: int, model: Optional[ResourceModel] = None,
                 costs: Optional[CostTable] = None) -> tuple[TradeoffPoint, Optional[list]]:
    """Like :func:`schedule`, also returning each operation's start cycle (None when infeasible)."""
    model = model or ResourceModel()
    costs = costs or CostTable()
    d = dag.durations(costs)
    seq = sum(d)
    cp = dag.critical_path(costs)
    speedup = seq / budget if budget > 0 else 0.0
    if budget < cp:
        return TradeoffPoint(budget, (0, 0, 0), False, speedup), None
    kinds = [model.kind(n) if dur > 0 else None for n, dur in zip(dag.nodes, d)]
    work = {k: 0 for k in KINDS}
    for k, dur in zip(kinds, d):
        if k is not None:
            work[k] += dur
    limits = {k: max(1, math.ceil(w / budget)) for k, w in work.items() if w > 0}
    lst = _alap(dag, d, budget)
    while True:
        start, miss = _list_schedule(dag, d, kinds, lst, limits)
        if miss is None:
            break
        limits[miss[0]] += miss[1]
    usage = peak_usage(start, d, kinds)
    return TradeoffPoint(budget, tuple(usage.get(k, 0) for k in KINDS), True, speedup), start


def peak_usage(start: list, d: list[int], kinds: list) -> dict:
    """Largest number of simultaneously busy operations per kind."""
    events: dict = {}
    for s, dur, k in zip(start, d, kinds):
        if k is None or dur == 0:
            continue
        events.setdefault(k, []).extend([(s, 1), (s + dur, -1)])
    peak = {}
    for k, ev in events.items():
        ev.sort(key=lambda e: (e[0], e[1]))
        cur = best = 0
        for _, delta in ev:
            cur += delta
            best = max(best, cur)
        peak[k] = best
    return peak
