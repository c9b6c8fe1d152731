"""Node, edge and hierarchy types of the hierarchical control/data-flow graph.

Three levels: an HCDFG holds HCDFGs, CDFGs and DFGs; a CDFG is a control
pattern (if/for/while/do-while/switch) whose roles are bound to child
graphs; a DFG holds elementary memory, processing and conditional nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union

DFG = "DFG"
CDFG = "CDFG"
HCDFG = "HCDFG"

PROCESSING = "processing"
MEMORY = "memory"
CONDITIONAL = "conditional"

CONTROL_EDGE = "control"
SCALAR_EDGE = "scalar"
MULTIDIM_EDGE = "multidim"
EDGE_KINDS = (CONTROL_EDGE, SCALAR_EDGE, MULTIDIM_EDGE)

PATTERN_ROLES = {
    "if": ("condition", "true-branch", "false-branch"),
    "for": ("init", "condition", "body", "step"),
    "while": ("condition", "body"),
    "do-while": ("body", "condition"),
}
LOOP_PATTERNS = frozenset(["for", "while", "do-while"])


class MemoryClass(str, Enum):
    N1 = "N1"  # input/output, global
    N2 = "N2"  # temporary
    N3 = "N3"  # re-used input
    N4 = "N4"  # accumulator

    @property
    def is_global(self) -> bool:
        return self is MemoryClass.N1


@dataclass
class ElementaryNode:
    id: str
    kind: str
    op: Optional[str] = None  # processing / conditional operator
    mode: Optional[str] = None  # "read" | "write"
    name: Optional[str] = None  # datum name (memory nodes)
    mem_class: Optional[MemoryClass] = None
    fmt: Optional[str] = None  # element type of the datum
    index: Optional[tuple] = None  # affine subscript, see graph.affine
    is_array: bool = False
    static_test: bool = False  # loop test whose outcome is known at compile time
    line: int = 1
    column: int = 1

    level = None  # elementary nodes are not graphs

    @property
    def is_global_access(self) -> bool:
        return self.kind == MEMORY and self.mem_class is MemoryClass.N1

    @property
    def is_local_access(self) -> bool:
        return self.kind == MEMORY and self.mem_class is not MemoryClass.N1


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    kind: str


@dataclass
class GraphNode:
    id: str
    level: str
    pattern: Optional[str] = None
    children: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    roles: dict = field(default_factory=dict)  # role -> child id
    label: str = ""
    key: Optional[str] = None  # profile key, e.g. "f/loop@12"
    callee: Optional[str] = None
    induction: Optional[str] = None  # loop induction variable, when known
    stride: Optional[tuple] = None  # (start, increment) of a statically bounded induction
    line: int = 1
    column: int = 1

    def child(self, child_id: str):
        for c in self.children:
            if c.id == child_id:
                return c
        raise KeyError(child_id)

    def role(self, name: str):
        return self.child(self.roles[name])

    @property
    def is_loop(self) -> bool:
        return self.level == CDFG and self.pattern in LOOP_PATTERNS

    def case_roles(self) -> list[str]:
        """Switch arms in order: case(k)... then default."""
        return [r for r in self.roles if r.startswith("case(")] + ["default"]

    def walk(self) -> Iterator["GraphNode"]:
        """Graph nodes of this subtree, post-order (children before parents)."""
        for c in self.children:
            if isinstance(c, GraphNode):
                yield from c.walk()
        yield self

    def elementary(self) -> Iterator[ElementaryNode]:
        """Elementary nodes of this subtree in structural order."""
        for c in self.children:
            if isinstance(c, GraphNode):
                yield from c.elementary()
            else:
                yield c


Node = Union[GraphNode, ElementaryNode]


@dataclass
class Hcdfg:
    function: str
    root: GraphNode
    loop_bounds: dict = field(default_factory=dict)  # loop graph id -> int or None

    def graphs(self) -> Iterator[GraphNode]:
        return self.root.walk()

    def find(self, graph_id: str) -> GraphNode:
        for g in self.graphs():
            if g.id == graph_id:
                return g
        raise KeyError(graph_id)

    def paths(self) -> dict[str, str]:
        """Readable hierarchical path for every graph id, e.g. ``f/for@3/body``."""
        out: dict[str, str] = {}

        def visit(g: GraphNode, path: str) -> None:
            out[g.id] = path
            role_of = {cid: r for r, cid in g.roles.items()}
            used: set[str] = set()
            for i, c in enumerate(c for c in g.children if isinstance(c, GraphNode)):
                name = role_of.get(c.id) or c.label or c.id
                if name in used:
                    name = f"{name}#{i}"
                used.add(name)
                visit(c, f"{path}/{name}")

        visit(self.root, self.function)
        return out
