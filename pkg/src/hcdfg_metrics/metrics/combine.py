"""Metric records and the rules that combine them up the hierarchy."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from ..errors import GraphCycleError, ProbabilityError
from ..graph.model import CONDITIONAL, MEMORY, PROCESSING, GraphNode
from .config import PROB_TOLERANCE, CostTable, check_probabilities


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


@dataclass(frozen=True)
class OpCounts:
    n_proc: float = 0
    n_gmem: float = 0
    n_test: float = 0

    @property
    def nop(self) -> float:
        return self.n_proc + self.n_gmem


@dataclass(frozen=True)
class MetricRecord:
    """Counts, critical path and derived ratios of one graph.

    Counts and ``cp`` are real-valued once branch probabilities weight them.
    ``gamma`` is stored rather than derived because the branch rule does not
    equal total Nop over total CP.
    """

    n_proc: float = 0
    n_gmem: float = 0
    n_test: float = 0
    cp: float = 0
    gamma: float = 0.0
    max_unroll: Optional[int] = None
    graph_id: str = ""

    @classmethod
    def of(cls, counts: OpCounts, cp: float, graph_id: str = "") -> "MetricRecord":
        return cls(counts.n_proc, counts.n_gmem, counts.n_test, cp, gamma_dfg(counts, cp), None, graph_id)

    @classmethod
    def from_ratios(cls, gamma: float, mom: float, com: float, nop: float = 1.0, graph_id: str = "") -> "MetricRecord":
        """Record with the given headline ratios, for externally measured values."""
        n_gmem = mom * nop
        return cls(nop - n_gmem, n_gmem, com * nop, _ratio(nop, gamma), gamma, None, graph_id)

    @property
    def counts(self) -> OpCounts:
        return OpCounts(self.n_proc, self.n_gmem, self.n_test)

    @property
    def nop(self) -> float:
        return self.n_proc + self.n_gmem

    @property
    def mom(self) -> float:
        return _ratio(self.n_gmem, self.nop)

    @property
    def com(self) -> float:
        return _ratio(self.n_test, self.nop)

    def with_id(self, graph_id: str) -> "MetricRecord":
        return replace(self, graph_id=graph_id)

    def to_dict(self) -> dict:
        d = {
            "n_proc": self.n_proc,
            "n_gmem": self.n_gmem,
            "n_test": self.n_test,
            "nop": self.nop,
            "cp": self.cp,
            "gamma": self.gamma,
            "mom": self.mom,
            "com": self.com,
        }
        if self.max_unroll is not None:
            d["max_unroll"] = self.max_unroll
        return d


ZERO = MetricRecord()


def gamma_dfg(counts: OpCounts, cp: float) -> float:
    return _ratio(counts.nop, cp)


def count_ops(g: GraphNode) -> OpCounts:
    """Count processing nodes, global accesses and tests of a DFG.

    Tests whose outcome is known statically (the header test of a loop with
    a constant trip count) stay in the graph but are not control decisions,
    so they are not counted.
    """
    n_proc = n_gmem = n_test = 0
    for n in g.children:
        if n.kind == PROCESSING:
            n_proc += 1
        elif n.kind == MEMORY:
            n_gmem += n.is_global_access
        elif n.kind == CONDITIONAL and not n.static_test:
            n_test += 1
    return OpCounts(n_proc, n_gmem, n_test)


def longest_path(weights: Sequence[float], edges: Iterable[tuple[int, int]]) -> float:
    """Heaviest path through a DAG whose vertices ``0..n-1`` carry weights."""
    n = len(weights)
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    finish = list(weights)
    ready = [i for i in range(n) if indeg[i] == 0]
    best = [0.0] * n  # heaviest path ending just before i
    seen = 0
    while ready:
        i = ready.pop()
        seen += 1
        finish[i] = best[i] + weights[i]
        for j in succ[i]:
            if finish[i] > best[j]:
                best[j] = finish[i]
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    if seen != n:
        raise GraphCycleError("dependence cycle in graph")
    return max(finish, default=0.0)


def critical_path(g: GraphNode, costs: CostTable) -> float:
    index = {n.id: i for i, n in enumerate(g.children)}
    weights = [costs.cost(n) for n in g.children]
    try:
        return longest_path(weights, ((index[e.src], index[e.dst]) for e in g.edges))
    except GraphCycleError as exc:
        raise GraphCycleError(f"{g.id}: {exc}") from None


def _sum(records: Sequence[MetricRecord]) -> OpCounts:
    return OpCounts(
        sum(r.n_proc for r in records), sum(r.n_gmem for r in records), sum(r.n_test for r in records)
    )


def combine_seq(records: Sequence[MetricRecord]) -> MetricRecord:
    records = list(records)
    if len(records) == 1:
        return records[0]
    return MetricRecord.of(_sum(records), sum(r.cp for r in records))


def combine_par(records: Sequence[MetricRecord]) -> MetricRecord:
    records = list(records)
    if len(records) == 1:
        return records[0]
    return MetricRecord.of(_sum(records), max((r.cp for r in records), default=0))


def combine_dag(records: Sequence[MetricRecord], edges: Iterable[tuple[int, int]]) -> MetricRecord:
    """Siblings ordered by dependence edges (indices into ``records``).

    Independent siblings overlap and dependent chains add up, so this
    generalizes both the sequential and the parallel rule.
    """
    records = list(records)
    if len(records) == 1:
        return records[0]
    return MetricRecord.of(_sum(records), longest_path([r.cp for r in records], edges))


def _weighted(head: MetricRecord, arms: Sequence[tuple[float, MetricRecord]]) -> MetricRecord:
    def agg(attr: str) -> float:
        return getattr(head, attr) + sum(p * getattr(r, attr) for p, r in arms)

    gamma = _ratio(head.nop, head.cp) + sum(p * _ratio(r.nop, r.cp) for p, r in arms)
    return MetricRecord(agg("n_proc"), agg("n_gmem"), agg("n_test"), agg("cp"), gamma)


def combine_if(cond: MetricRecord, t: MetricRecord, f: MetricRecord, p_true: float = 0.5,
               p_false: Optional[float] = None) -> MetricRecord:
    """Branch rule: each branch's Nop/CP weighted by its probability, plus the condition's."""
    if p_false is None:
        p_false = 1.0 - p_true
    p_true, p_false = check_probabilities((p_true, p_false))
    return _weighted(cond, [(p_true, t), (p_false, f)])


def combine_switch(scrutinee: MetricRecord, cases: Sequence[tuple[float, MetricRecord]]) -> MetricRecord:
    if not cases:
        raise ProbabilityError("switch needs at least one arm")
    probs = [p for p, _ in cases]
    if abs(sum(probs) - 1.0) > PROB_TOLERANCE:
        raise ProbabilityError(f"switch probabilities {probs} do not sum to 1")
    check_probabilities(probs, "switch")
    return _weighted(scrutinee, list(cases))


def _repeat(init: MetricRecord, iteration: MetricRecord, n: int, tail: MetricRecord) -> MetricRecord:
    counts = OpCounts(
        init.n_proc + n * iteration.n_proc + tail.n_proc,
        init.n_gmem + n * iteration.n_gmem + tail.n_gmem,
        init.n_test + n * iteration.n_test + tail.n_test,
    )
    return MetricRecord.of(counts, init.cp + n * iteration.cp + tail.cp)


def combine_for(cond: MetricRecord, body: MetricRecord, step: MetricRecord, init: MetricRecord,
                trips: int) -> MetricRecord:
    """``init`` then ``trips`` x (cond, body, step) then the exiting cond."""
    if trips < 0:
        raise ValueError("trip count must be non-negative")
    iteration = MetricRecord.of(_sum([cond, body, step]), cond.cp + body.cp + step.cp)
    return _repeat(init, iteration, trips, cond)


def combine_while(cond: MetricRecord, body: MetricRecord, trips: int, do: bool = False) -> MetricRecord:
    """``while``: a for loop without init and step.  ``do``: (body, cond) x trips, trips >= 1."""
    if trips < 0:
        raise ValueError("trip count must be non-negative")
    if not do:
        return combine_for(cond, body, ZERO, ZERO, trips)
    if trips < 1:
        raise ValueError("a do-while loop runs at least once")
    iteration = MetricRecord.of(_sum([body, cond]), body.cp + cond.cp)
    return _repeat(ZERO, iteration, trips, ZERO)
