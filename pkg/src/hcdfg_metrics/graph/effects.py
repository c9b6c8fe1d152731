"""Read/write summaries of graphs, used to find dependences between siblings."""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import CDFG, DFG, MEMORY, GraphNode


@dataclass(frozen=True)
class Effects:
    exposed: frozenset = frozenset()  # data read before any definite write
    may_write: frozenset = frozenset()
    must_write: frozenset = frozenset()  # scalars written on every path
    arrays: frozenset = field(default=frozenset(), compare=False)

    def then(self, nxt: "Effects") -> "Effects":
        return Effects(
            self.exposed | (nxt.exposed - self.must_write),
            self.may_write | nxt.may_write,
            self.must_write | nxt.must_write,
            self.arrays | nxt.arrays,
        )

    @property
    def reads(self) -> frozenset:
        return self.exposed


EMPTY = Effects()


def _seq(parts) -> Effects:
    out = EMPTY
    for p in parts:
        out = out.then(p)
    return out


def _choice(head: Effects, arms: list) -> Effects:
    must = frozenset.intersection(*[a.must_write for a in arms]) if arms else frozenset()
    exposed = frozenset().union(*[a.exposed for a in arms]) if arms else frozenset()
    may = frozenset().union(*[a.may_write for a in arms]) if arms else frozenset()
    arrays = frozenset().union(*[a.arrays for a in arms]) if arms else frozenset()
    return head.then(Effects(exposed, may, must, arrays))


def _optional(head: Effects, repeated: Effects) -> Effects:
    """``head`` followed by zero or more executions of ``repeated``."""
    return _choice(head, [repeated, EMPTY])


def dfg_effects(g: GraphNode) -> Effects:
    exposed, may, must, arrays = set(), set(), set(), set()
    for n in g.children:
        if n.kind != MEMORY:
            continue
        if n.is_array:
            arrays.add(n.name)
        if n.mode == "read":
            if n.is_array or n.name not in must:
                exposed.add(n.name)
        else:
            may.add(n.name)
            if not n.is_array:
                must.add(n.name)
    return Effects(frozenset(exposed), frozenset(may), frozenset(must), frozenset(arrays))


def effects(g: GraphNode, memo: dict | None = None) -> Effects:
    """Summarise which data ``g`` reads before writing and which it writes."""
    if memo is not None and g.id in memo:
        return memo[g.id]
    if g.level == DFG:
        out = dfg_effects(g)
    elif g.level == CDFG:
        role = lambda r: effects(g.role(r), memo)  # noqa: E731
        if g.pattern == "if":
            out = _choice(role("condition"), [role("true-branch"), role("false-branch")])
        elif g.pattern == "switch":
            out = _choice(role("condition"), [role(r) for r in g.case_roles()])
        elif g.pattern == "for":
            head = role("init").then(role("condition"))
            out = _optional(head, _seq([role("body"), role("step"), role("condition")]))
        elif g.pattern == "while":
            out = _optional(role("condition"), role("body").then(role("condition")))
        elif g.pattern == "do-while":
            once = role("body").then(role("condition"))
            out = _optional(once, once)
        else:
            raise ValueError(f"unknown pattern {g.pattern!r}")
    else:
        out = _seq(effects(c, memo) for c in g.children if isinstance(c, GraphNode))
    if memo is not None:
        memo[g.id] = out
    return out
