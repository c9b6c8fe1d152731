"""Array-level dependences between sibling loops."""

from __future__ import annotations

import copy

from .effects import effects
from .model import CONTROL_EDGE, HCDFG, MULTIDIM_EDGE, Edge, GraphNode, Hcdfg


def _link_loops(g: GraphNode, memo: dict) -> None:
    loops = [c for c in g.children if isinstance(c, GraphNode) and c.is_loop]
    if len(loops) < 2:
        return
    existing = {(e.src, e.dst) for e in g.edges}
    for i, p in enumerate(loops):
        written = effects(p, memo).may_write & effects(p, memo).arrays
        for q in loops[i + 1:]:
            eq = effects(q, memo)
            if written & eq.exposed & eq.arrays and (p.id, q.id) not in existing:
                g.edges.append(Edge(p.id, q.id, MULTIDIM_EDGE))
                existing.add((p.id, q.id))
    for p, q in zip(loops, loops[1:]):
        if (p.id, q.id) not in existing:
            g.edges.append(Edge(p.id, q.id, CONTROL_EDGE))
            existing.add((p.id, q.id))


def add_multidim_edges(h: Hcdfg) -> Hcdfg:
    """Return a copy of ``h`` with loop-to-loop array edges.

    For sibling loops P before Q, a multidimensional edge P->Q is added when
    Q reads an array that P writes.  Consecutive sibling loops that remain
    unconnected get a control edge preserving their textual order.
    """
    out = copy.deepcopy(h)
    memo: dict = {}
    for g in out.graphs():
        if g.level == HCDFG:
            _link_loops(g, memo)
    return out
