"""Loop-carried dependence test and maximum unroll factor.

A loop of N iterations can be fully unrolled unless some datum written in
one iteration is read by a later one.  Scalars are carried when an
iteration reads them before writing them.  Array accesses are compared
through their affine subscripts, solved exactly over the iteration space.
Accumulators updated only through one associative operator (``s = s + e``
or ``s = s * e``) are reductions and do not block unrolling.
"""

from __future__ import annotations

from typing import Optional

from ..errors import MissingTripCountError
from ..graph.effects import EMPTY, effects
from ..graph.model import MEMORY, PROCESSING, SCALAR_EDGE, DFG, ElementaryNode, GraphNode, Hcdfg
from ..graph.affine import const_of, variables

REDUCTION_OPS = frozenset(["+", "*"])


def iteration_parts(loop: GraphNode) -> list[GraphNode]:
    """Graphs executed once per iteration, in order."""
    if loop.pattern == "for":
        return [loop.role("condition"), loop.role("body"), loop.role("step")]
    if loop.pattern == "while":
        return [loop.role("condition"), loop.role("body")]
    if loop.pattern == "do-while":
        return [loop.role("body"), loop.role("condition")]
    raise ValueError(f"{loop.id} is not a loop")


def _dfgs(parts: list[GraphNode]):
    for p in parts:
        for g in p.walk():
            if g.level == DFG:
                yield g


def _is_reduction(var: str, dfgs: list[GraphNode]) -> bool:
    """Every access of ``var`` belongs to a ``var = var op ... op e`` chain with one operator."""
    ops = set()
    reached = set()
    writes = set()
    for g in dfgs:
        nodes = {n.id: n for n in g.children}
        succ: dict[str, list[str]] = {}
        for e in g.edges:
            if e.kind == SCALAR_EDGE:
                succ.setdefault(e.src, []).append(e.dst)
        for n in g.children:
            if n.kind != MEMORY or n.name != var:
                continue
            if n.mode == "write":
                writes.add(n.id)
                continue
            nxt = succ.get(n.id, [])
            if len(nxt) != 1 or nodes[nxt[0]].kind != PROCESSING or nodes[nxt[0]].op not in REDUCTION_OPS:
                return False
            op = nodes[nxt[0]].op
            ops.add(op)
            cur = nodes[nxt[0]]
            while True:
                nxt = succ.get(cur.id, [])
                if len(nxt) != 1:
                    return False
                cur = nodes[nxt[0]]
                if cur.kind == PROCESSING and cur.op == op:
                    continue
                if cur.kind == MEMORY and cur.mode == "write" and cur.name == var:
                    break
                return False
            if cur.id in reached:
                return False
            reached.add(cur.id)
    return len(ops) == 1 and reached == writes


def _iteration_effects(parts: list[GraphNode]):
    memo: dict = {}
    out = EMPTY
    for p in parts:
        out = out.then(effects(p, memo))
    return out


def _dim_terms(fw, fr, induction: Optional[str], varying: frozenset):
    """``(aw, cw, ar, cr)`` in the induction variable, or None if unconstrained."""
    if fw is None or fr is None:
        return None
    vw, vr = variables(fw), variables(fr)
    for name in set(vw) | set(vr):
        if name == induction:
            continue
        if name in varying or vw.get(name) != vr.get(name):
            return None
    aw = vw.get(induction, 0) if induction else 0
    ar = vr.get(induction, 0) if induction else 0
    return aw, const_of(fw), ar, const_of(fr)


def _pair_carried(w: ElementaryNode, r: ElementaryNode, n: int, induction, stride, varying) -> bool:
    if n < 2:
        return False
    if w.index is None or r.index is None or len(w.index) != len(r.index):
        return True
    start, inc = stride if stride else (0, 1)
    dims = []
    for fw, fr in zip(w.index, r.index):
        t = _dim_terms(fw, fr, induction, varying)
        if t is None:
            continue
        aw, cw, ar, cr = t
        # address as a function of the iteration number k
        dims.append((aw * inc, aw * start + cw, ar * inc, ar * start + cr))
    for k1 in range(n - 1):
        k2 = None  # None: any later iteration
        ok = True
        for aw, bw, ar, br in dims:
            target = aw * k1 + bw - br
            if ar == 0:
                if target != 0:
                    ok = False
                    break
                continue
            if target % ar:
                ok = False
                break
            k = target // ar
            if k2 is not None and k != k2:
                ok = False
                break
            k2 = k
        if ok and (k2 is None or k1 < k2 < n):
            return True
    return False


def _carried_scalars(loop: GraphNode):
    parts = iteration_parts(loop)
    eff = _iteration_effects(parts)
    induction = loop.induction if loop.stride is not None else None
    dfgs = list(_dfgs(parts))
    scalars = sorted((eff.exposed & eff.may_write) - eff.arrays - {induction})
    reductions = [v for v in scalars if _is_reduction(v, dfgs)]
    return parts, eff, induction, dfgs, scalars, reductions


def reductions(loop: GraphNode) -> list[str]:
    """Accumulators carried across iterations only through one associative operator."""
    return _carried_scalars(loop)[5]


def carried_dependences(loop: GraphNode, trips: int) -> list[str]:
    """Names of data carrying a flow dependence between iterations of ``loop``."""
    parts, eff, induction, dfgs, scalars, reduced = _carried_scalars(loop)
    carried = [v for v in scalars if v not in reduced]
    varying = eff.may_write - eff.arrays - ({induction} if induction else set())
    reads: dict[str, list] = {}
    writes: dict[str, list] = {}
    for g in dfgs:
        for n in g.children:
            if n.kind == MEMORY and n.is_array:
                (writes if n.mode == "write" else reads).setdefault(n.name, []).append(n)
    for name in sorted(set(reads) & set(writes)):
        if any(
            _pair_carried(w, r, trips, induction, loop.stride, varying)
            for w in writes[name]
            for r in reads[name]
        ):
            carried.append(name)
    return carried


def max_unroll_factor(loop: GraphNode, h: Optional[Hcdfg] = None, trips: Optional[int] = None) -> int:
    """Trip count when iterations are independent, else 1."""
    if trips is None and h is not None:
        trips = h.loop_bounds.get(loop.id)
    if trips is None:
        path = h.paths().get(loop.id, "") if h is not None else ""
        raise MissingTripCountError(loop.key or loop.id, f"line {loop.line}", path)
    if carried_dependences(loop, trips):
        return 1
    return max(1, trips)
