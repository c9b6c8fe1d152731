"""Expansion of a hierarchy into one DAG of elementary operations.

Loops are replicated (unrolled copies overlap, other iterations follow one
another), the heavier branch of each conditional is kept, and ordering
between graphs is expressed through zero-cost barrier operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from ..errors import GraphCycleError, GraphTooLargeError, MissingTripCountError
from ..graph.model import CDFG, DFG, MEMORY, ElementaryNode, GraphNode, Hcdfg
from ..metrics.config import CostTable, Profile
from ..metrics.unroll import max_unroll_factor, reductions

DEFAULT_NODE_CAP = 100_000


@dataclass
class FlatDag:
    nodes: list = field(default_factory=list)  # ElementaryNode, or None for a barrier
    preds: list = field(default_factory=list)  # per node, sorted predecessor indices
    dropped_branches: int = 0

    def __len__(self) -> int:
        return len(self.nodes)

    def durations(self, costs: CostTable) -> list[int]:
        """Whole cycles per operation; barriers take none."""
        return [0 if n is None else math.ceil(costs.cost(n)) for n in self.nodes]

    def critical_path(self, costs: CostTable) -> int:
        d = self.durations(costs)
        finish = [0] * len(d)
        for i, ps in enumerate(self.preds):  # indices are topologically ordered
            finish[i] = max((finish[p] for p in ps), default=0) + d[i]
        return max(finish, default=0)

    def sequential_cost(self, costs: CostTable) -> int:
        return sum(self.durations(costs))


@dataclass
class _Segment:
    sources: list
    sinks: list
    ops: list  # every node index in the segment


class _Flattener:
    def __init__(self, h: Hcdfg, profile: Profile, costs: CostTable, cap: int):
        self.h = h
        self.profile = profile
        self.costs = costs
        self.cap = cap
        self.dag = FlatDag()
        self._preds: list[set] = []
        self._unroll: dict = {}
        self._reductions: dict = {}

    def add(self, node: Optional[ElementaryNode]) -> int:
        if len(self.dag.nodes) >= self.cap:
            raise GraphTooLargeError(f"{self.h.function}: flattened graph exceeds {self.cap} operations")
        self.dag.nodes.append(node)
        self._preds.append(set())
        return len(self.dag.nodes) - 1

    def barrier(self) -> _Segment:
        b = self.add(None)
        return _Segment([b], [b], [b])

    def link(self, a: _Segment, b: _Segment) -> None:
        if len(a.sinks) == 1 or len(b.sources) == 1:
            for s in a.sinks:
                for t in b.sources:
                    self._preds[t].add(s)
            return
        bar = self.add(None)
        self._preds[bar].update(a.sinks)
        for t in b.sources:
            self._preds[t].add(bar)

    def seq(self, parts: list[_Segment]) -> _Segment:
        for a, b in zip(parts, parts[1:]):
            self.link(a, b)
        return _Segment(parts[0].sources, parts[-1].sinks, [i for p in parts for i in p.ops])

    def par(self, parts: list[_Segment]) -> _Segment:
        return _Segment(
            [i for p in parts for i in p.sources],
            [i for p in parts for i in p.sinks],
            [i for p in parts for i in p.ops],
        )

    def weight(self, seg: _Segment) -> int:
        return sum(0 if self.dag.nodes[i] is None else math.ceil(self.costs.cost(self.dag.nodes[i])) for i in seg.ops)

    # -- graphs -------------------------------------------------------------

    def emit(self, g: GraphNode) -> _Segment:
        if g.level == DFG:
            return self.dfg(g)
        if g.level == CDFG:
            return self.cdfg(g)
        kids = [c for c in g.children if isinstance(c, GraphNode)]
        if not kids:
            return self.barrier()
        segs = {c.id: self.emit(c) for c in kids}
        has_pred = {e.dst for e in g.edges}
        has_succ = {e.src for e in g.edges}
        for e in g.edges:
            self.link(segs[e.src], segs[e.dst])
        return _Segment(
            [i for c in kids if c.id not in has_pred for i in segs[c.id].sources],
            [i for c in kids if c.id not in has_succ for i in segs[c.id].sinks],
            [i for c in kids for i in segs[c.id].ops],
        )

    def dfg(self, g: GraphNode) -> _Segment:
        if not g.children:
            return self.barrier()
        index = {n.id: self.add(n) for n in g.children}
        for e in g.edges:
            self._preds[index[e.dst]].add(index[e.src])
        ids = list(index.values())
        has_pred = {index[e.dst] for e in g.edges}
        has_succ = {index[e.src] for e in g.edges}
        return _Segment([i for i in ids if i not in has_pred], [i for i in ids if i not in has_succ], ids)

    def choose(self, head: GraphNode, arms: list[tuple[float, GraphNode]]) -> _Segment:
        cond = self.emit(head)
        segs = [self.emit(a) for _, a in arms]
        weights = [p * self.weight(s) for (p, _), s in zip(arms, segs)]
        best = max(range(len(segs)), key=lambda k: (weights[k], -k))
        # discarded arms stay out of the dependence structure
        self.dag.dropped_branches += sum(1 for k, s in enumerate(segs) if k != best and self.weight(s) > 0)
        for k, s in enumerate(segs):
            if k != best:
                for i in s.ops:
                    self.dag.nodes[i] = None
                    self._preds[i] = set()
        return self.seq([cond, segs[best]])

    def cdfg(self, g: GraphNode) -> _Segment:
        role = g.role
        if g.pattern == "if":
            pt, pf = self.profile.if_probs(g.key)
            return self.choose(role("condition"), [(pt, role("true-branch")), (pf, role("false-branch"))])
        if g.pattern == "switch":
            arms = g.case_roles()
            probs = self.profile.switch_probs(g.key, len(arms))
            return self.choose(role("condition"), [(p, role(a)) for p, a in zip(probs, arms)])
        return self.loop(g)

    def loop(self, g: GraphNode) -> _Segment:
        n = self.profile.trips(g.key)
        if n is None:
            n = self.h.loop_bounds.get(g.id)
        if n is None:
            raise MissingTripCountError(g.key or g.id, f"line {g.line}", self.h.paths().get(g.id, ""))
        if g.pattern == "do-while":
            n = max(n, 1)
        if (g.id, n) not in self._unroll:
            self._unroll[g.id, n] = max_unroll_factor(g, trips=n) if n > 0 else 1
        unroll = min(n, self._unroll[g.id, n]) if n > 0 else 1
        parts = []
        if g.pattern == "for":
            parts.append(self.emit(g.role("init")))
        if unroll > 1 and unroll == n:
            copies = [self.emit(g.role("body")) for _ in range(n)]
            self.chain_reductions(g, copies)
            parts.append(self.par(copies))
            return self.seq(parts)
        done = 0
        while done < n:
            k = min(unroll, n - done)
            group = []
            if g.pattern != "do-while":
                group.append(self.emit(g.role("condition")))
            copies = [self.emit(g.role("body")) for _ in range(k)]
            if k > 1:
                self.chain_reductions(g, copies)
            group.append(self.par(copies))
            if g.pattern == "for":
                group.append(self.emit(g.role("step")))
            if g.pattern == "do-while":
                group.append(self.emit(g.role("condition")))
            parts.append(self.seq(group))
            done += k
        if g.pattern != "do-while":
            parts.append(self.emit(g.role("condition")))
        return self.seq(parts)

    def chain_reductions(self, g: GraphNode, copies: list[_Segment]) -> None:
        if g.id not in self._reductions:
            self._reductions[g.id] = reductions(g)
        for v in self._reductions[g.id]:
            for prev, cur in zip(copies, copies[1:]):
                writes = [i for i in prev.ops if self._is(i, v, "write")]
                for r in (i for i in cur.ops if self._is(i, v, "read")):
                    self._preds[r].update(writes)

    def _is(self, i: int, name: str, mode: str) -> bool:
        n = self.dag.nodes[i]
        return n is not None and n.kind == MEMORY and n.name == name and n.mode == mode


def flatten_for_scheduling(h: Hcdfg, profile: Optional[Profile] = None, costs: Optional[CostTable] = None,
                           node_cap: int = DEFAULT_NODE_CAP) -> FlatDag:
    f = _Flattener(h, profile or Profile(), costs or CostTable(), node_cap)
    f.emit(h.root)
    f.dag.preds = [sorted(p) for p in f._preds]
    return _topological(f.dag)


def _topological(dag: FlatDag) -> FlatDag:
    """Renumber nodes so that every predecessor precedes its successors."""
    n = len(dag.nodes)
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for i, ps in enumerate(dag.preds):
        for p in ps:
            succ[p].append(i)
            indeg[i] += 1
    order, ready = [], [i for i in range(n) if indeg[i] == 0]
    ready.reverse()
    while ready:
        i = ready.pop()
        order.append(i)
        for j in reversed(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    if len(order) != n:
        raise GraphCycleError("flattened graph contains a cycle")
    new = {old: k for k, old in enumerate(order)}
    return FlatDag(
        [dag.nodes[o] for o in order],
        [sorted(new[p] for p in dag.preds[o]) for o in order],
        dag.dropped_branches,
    )
