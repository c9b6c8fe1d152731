"""Bottom-up characterization of a whole hierarchy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from ..errors import MissingTripCountError
from ..graph.model import CDFG, DFG, GraphNode, Hcdfg
from .combine import (
    MetricRecord,
    combine_dag,
    combine_for,
    combine_if,
    combine_switch,
    combine_while,
    count_ops,
    critical_path,
)
from .config import CostTable, Profile
from .unroll import max_unroll_factor


@dataclass
class CharacterizationTree:
    hcdfg: Hcdfg
    records: dict = field(default_factory=dict)  # graph id -> MetricRecord
    paths: dict = field(default_factory=dict)  # graph id -> readable path

    @property
    def function(self) -> str:
        return self.hcdfg.function

    @property
    def root(self) -> MetricRecord:
        return self.records[self.hcdfg.root.id]

    def __getitem__(self, graph_id: str) -> MetricRecord:
        return self.records[graph_id]

    def by_path(self, path: str) -> MetricRecord:
        for gid, p in self.paths.items():
            if p == path:
                return self.records[gid]
        raise KeyError(path)

    def rows(self, levels: Optional[set] = None) -> Iterator[tuple[str, GraphNode, MetricRecord]]:
        """``(path, graph, record)`` in pre-order, optionally limited to some levels."""

        def visit(g: GraphNode):
            if levels is None or g.level in levels:
                yield self.paths[g.id], g, self.records[g.id]
            for c in g.children:
                if isinstance(c, GraphNode):
                    yield from visit(c)

        return visit(self.hcdfg.root)


def _trips(g: GraphNode, h: Hcdfg, profile: Profile, paths: dict) -> int:
    n = profile.trips(g.key)
    if n is None:
        n = h.loop_bounds.get(g.id)
    if n is None:
        raise MissingTripCountError(g.key or g.id, f"line {g.line}", paths.get(g.id, ""))
    return n


def _composite(g: GraphNode, rec: dict, h: Hcdfg, profile: Profile, paths: dict) -> MetricRecord:
    role = lambda r: rec[g.roles[r]]  # noqa: E731
    if g.level != CDFG:
        kids = [c for c in g.children if isinstance(c, GraphNode)]
        index = {c.id: i for i, c in enumerate(kids)}
        edges = {(index[e.src], index[e.dst]) for e in g.edges}
        return combine_dag([rec[c.id] for c in kids], sorted(edges))
    if g.pattern == "if":
        p_true, p_false = profile.if_probs(g.key)
        return combine_if(role("condition"), role("true-branch"), role("false-branch"), p_true, p_false)
    if g.pattern == "switch":
        arms = g.case_roles()
        probs = profile.switch_probs(g.key, len(arms))
        return combine_switch(role("condition"), [(p, role(a)) for p, a in zip(probs, arms)])
    n = _trips(g, h, profile, paths)
    if g.pattern == "for":
        out = combine_for(role("condition"), role("body"), role("step"), role("init"), n)
    elif g.pattern == "while":
        out = combine_while(role("condition"), role("body"), n)
    else:
        out = combine_while(role("condition"), role("body"), max(n, 1), do=True)
    return MetricRecord(out.n_proc, out.n_gmem, out.n_test, out.cp, out.gamma,
                        max_unroll_factor(g, h, n))


def characterize(h: Hcdfg, costs: Optional[CostTable] = None, profile: Optional[Profile] = None) -> CharacterizationTree:
    """One record per graph, leaves first, parents from their children only."""
    costs = costs or CostTable()
    profile = profile or Profile()
    paths = h.paths()
    rec: dict[str, MetricRecord] = {}
    for g in h.graphs():  # post-order
        if g.level == DFG:
            r = MetricRecord.of(count_ops(g), critical_path(g, costs))
        else:
            r = _composite(g, rec, h, profile, paths)
        rec[g.id] = r.with_id(g.id)
    return CharacterizationTree(h, rec, paths)
