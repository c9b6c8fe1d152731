"""Depth-first construction of the HCDFG from a normalized AST.

Straight-line statements accumulate into one DFG until a control statement,
a nested ``{ }`` block or a call closes it.  Control statements become CDFG
patterns whose roles (condition, branches, body, init, step, cases) are
built recursively; calls embed the callee's hierarchy as a child HCDFG.
"""

from __future__ import annotations

from collections import Counter
from typing import Optional

from ..frontend import ast as A
from . import affine
from .effects import effects
from .memory import RETURN_DATUM, classify_function
from .model import (
    CDFG,
    CONDITIONAL,
    CONTROL_EDGE,
    DFG,
    HCDFG,
    MEMORY,
    PROCESSING,
    SCALAR_EDGE,
    Edge,
    ElementaryNode,
    GraphNode,
    Hcdfg,
)

MAX_STATIC_TRIPS = 10_000_000


class _Shared:
    """State shared by every function instance of one build."""

    def __init__(self, root_name: str, functions: dict[str, A.AstFunction]):
        self.root_name = root_name
        self.functions = functions
        self.n_graphs = 0
        self.n_nodes = 0
        self.instances: Counter = Counter()
        self.loop_bounds: dict[str, Optional[int]] = {}

    def graph_id(self) -> str:
        self.n_graphs += 1
        return f"{self.root_name}.g{self.n_graphs - 1}"

    def node_id(self) -> str:
        self.n_nodes += 1
        return f"{self.root_name}.n{self.n_nodes - 1}"


class _Dfg:
    def __init__(self, shared: _Shared, line: int, column: int):
        self.shared = shared
        self.graph = GraphNode(shared.graph_id(), DFG, label=f"dfg@{line}", line=line, column=column)
        self.ids: set[str] = set()
        self.last_write: dict[str, str] = {}
        self.versions: Counter = Counter()
        self.array_writes: dict[str, list] = {}

    def add(self, node: ElementaryNode) -> str:
        self.graph.children.append(node)
        self.ids.add(node.id)
        return node.id

    def edge(self, src: Optional[str], dst: str, kind: str) -> None:
        # producers left behind in an earlier DFG are linked by sibling edges instead
        if src is not None and src in self.ids:
            e = Edge(src, dst, kind)
            if e not in self.graph.edges:
                self.graph.edges.append(e)

    @property
    def empty(self) -> bool:
        return not self.graph.children


class _Seq:
    """Children of one statement list, in program order."""

    def __init__(self, shared: _Shared):
        self.shared = shared
        self.children: list[GraphNode] = []
        self.current: Optional[_Dfg] = None

    def dfg(self, line: int, column: int) -> _Dfg:
        if self.current is None:
            self.current = _Dfg(self.shared, line, column)
        return self.current

    def flush(self) -> None:
        if self.current is not None and not self.current.empty:
            self.children.append(self.current.graph)
        self.current = None

    def add(self, g: GraphNode) -> None:
        self.flush()
        self.children.append(g)

    def container(self, label: str, line: int, column: int) -> GraphNode:
        self.flush()
        g = GraphNode(self.shared.graph_id(), HCDFG, label=label, line=line, column=column)
        g.children = self.children
        g.edges = sibling_edges(self.children)
        return g

    def finish(self, label: str, line: int, column: int) -> GraphNode:
        """Collapse to the single child when there is exactly one."""
        self.flush()
        if not self.children:
            return empty_dfg(self.shared, line, column)
        if len(self.children) == 1:
            return self.children[0]
        return self.container(label, line, column)


def empty_dfg(shared: _Shared, line: int, column: int) -> GraphNode:
    return GraphNode(shared.graph_id(), DFG, label=f"empty@{line}", line=line, column=column)


def sibling_edges(children: list[GraphNode]) -> list[Edge]:
    """True (read-after-write) dependences between siblings in program order.

    Loop-to-loop array dependences are left to :func:`add_multidim_edges`.
    """
    memo: dict = {}
    effs = [effects(c, memo) for c in children]
    edges = []
    for j, ej in enumerate(effs):
        found: dict[int, set] = {}
        for name in ej.exposed:
            for i in range(j - 1, -1, -1):
                if name in effs[i].may_write:
                    found.setdefault(i, set()).add(name)
                if name in effs[i].must_write:
                    break
        for i in sorted(found):
            names = found[i]
            scalars = [n for n in names if n not in effs[i].arrays and n not in ej.arrays]
            if scalars:
                kind = SCALAR_EDGE
            elif children[i].is_loop and children[j].is_loop:
                continue
            else:
                kind = CONTROL_EDGE
            edges.append(Edge(children[i].id, children[j].id, kind))
    return edges


def _const_eval(e) -> Optional[int]:
    if isinstance(e, A.Literal) and isinstance(e.value, int):
        return e.value
    if isinstance(e, A.Unary) and e.op == "-":
        v = _const_eval(e.operand)
        return None if v is None else -v
    if isinstance(e, A.Binary) and e.op in ("+", "-", "*", "<<", ">>", "/"):
        l, r = _const_eval(e.left), _const_eval(e.right)
        if l is None or r is None:
            return None
        if e.op == "+":
            return l + r
        if e.op == "-":
            return l - r
        if e.op == "*":
            return l * r
        if e.op == "<<":
            return l << r if r >= 0 else None
        if e.op == ">>":
            return l >> r if r >= 0 else None
        return int(l / r) if r != 0 else None
    return None


_MIRROR = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "==": "==", "!=": "!="}
_TESTS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "!=": lambda a, b: a != b,
    "==": lambda a, b: a == b,
}


def _writes_var(stmt, name: str) -> bool:
    for e in A.iter_all_exprs(stmt):
        if isinstance(e, (A.Assign, A.IncDec)) and isinstance(e.target, A.Var) and e.target.name == name:
            return True
    return False


def static_trip_count(loop: A.For) -> tuple[Optional[str], Optional[int]]:
    """Induction variable and trip count of a normalized ``for`` loop.

    The count is known only when the loop is ``v = c0; v OP c1; v = v +/- c``
    with constant ``c0``, ``c1``, ``c`` and a body that never assigns ``v``.
    """
    var, _, trips = loop_induction(loop)
    return var, trips


def loop_induction(loop: A.For) -> tuple[Optional[str], Optional[tuple[int, int]], Optional[int]]:
    """``(variable, (start, increment), trips)``; the last two only when static."""
    init = loop.init
    if isinstance(init, A.Decl):
        var, start = init.name, None if init.init is None else _const_eval(init.init)
    elif isinstance(init, A.Assign) and isinstance(init.target, A.Var):
        var, start = init.target.name, _const_eval(init.value)
    else:
        return None, None, None
    step = loop.step
    if not (isinstance(step, A.Assign) and isinstance(step.target, A.Var) and step.target.name == var):
        return var, None, None
    inc = None
    v = step.value
    if isinstance(v, A.Binary) and v.op in ("+", "-"):
        if isinstance(v.left, A.Var) and v.left.name == var:
            c = _const_eval(v.right)
            inc = None if c is None else (c if v.op == "+" else -c)
        elif v.op == "+" and isinstance(v.right, A.Var) and v.right.name == var:
            inc = _const_eval(v.left)
    cond = loop.cond
    bound, op = None, None
    if isinstance(cond, A.Binary) and cond.op in _TESTS:
        if isinstance(cond.left, A.Var) and cond.left.name == var:
            op, bound = cond.op, _const_eval(cond.right)
        elif isinstance(cond.right, A.Var) and cond.right.name == var:
            op, bound = _MIRROR[cond.op], _const_eval(cond.left)
    if start is None or inc in (None, 0) or bound is None or _writes_var(loop.body, var):
        return var, None, None
    test = _TESTS[op]
    x, n = start, 0
    while test(x, bound):
        n += 1
        x += inc
        if n > MAX_STATIC_TRIPS:
            return var, None, None
    return var, (start, inc), n


class _FunctionBuilder:
    def __init__(self, shared: _Shared, fn: A.AstFunction, rename: dict[str, str]):
        self.shared = shared
        self.fn = fn
        self.rename = rename
        self.classes = classify_function(fn)
        self._static_tests = False

    # -- names and memory nodes -------------------------------------------------

    def name(self, n: str) -> str:
        return self.rename.get(n, n)

    def _fmt(self, n: str) -> Optional[str]:
        if n == RETURN_DATUM:
            return self.fn.return_type
        d = self.fn.local_decl(n) or self.fn.param(n) or self.fn.global_decl(n)
        return None if d is None else d.elem_type

    def _mem(self, dfg: _Dfg, mode: str, ref, span: A.SourceSpan) -> ElementaryNode:
        orig = ref if isinstance(ref, str) else ref.name
        is_array = isinstance(ref, A.ArrayRef)
        index = None
        if is_array:
            index = tuple(affine.affine(ix, self.name) for ix in ref.indices)
        node = ElementaryNode(
            self.shared.node_id(),
            MEMORY,
            mode=mode,
            name=self.name(orig),
            mem_class=self.classes[orig],
            fmt=self._fmt(orig),
            index=index,
            is_array=is_array,
            line=span.line,
            column=span.column,
        )
        dfg.add(node)
        return node

    def _versioned_index(self, dfg: _Dfg, ref: A.ArrayRef) -> tuple:
        def vname(n: str) -> str:
            r = self.name(n)
            return f"{r}@{dfg.versions[r]}"

        return tuple(affine.affine(ix, vname) for ix in ref.indices)

    # -- expressions ------------------------------------------------------------

    def expr(self, e, seq: _Seq) -> Optional[str]:
        """Lower ``e`` into the current DFG; return the id of the value's producer."""
        span = e.span
        if isinstance(e, A.Literal):
            return None
        if isinstance(e, A.Var):
            dfg = seq.dfg(span.line, span.column)
            node = self._mem(dfg, "read", e.name, span)
            dfg.edge(dfg.last_write.get(node.name), node.id, SCALAR_EDGE)
            return node.id
        if isinstance(e, A.ArrayRef):
            idx = [self.expr(ix, seq) for ix in e.indices]
            dfg = seq.dfg(span.line, span.column)
            key = self._versioned_index(dfg, e)
            node = self._mem(dfg, "read", e, span)
            for p in idx:
                dfg.edge(p, node.id, CONTROL_EDGE)
            for wid, wkey in reversed(dfg.array_writes.get(node.name, [])):
                if affine.provably_distinct(key, wkey):
                    continue
                dfg.edge(wid, node.id, SCALAR_EDGE)
                if affine.provably_equal(key, wkey):
                    break
            return node.id
        if isinstance(e, A.Binary):
            left = self.expr(e.left, seq)
            right = self.expr(e.right, seq)
            dfg = seq.dfg(span.line, span.column)
            if e.op in A.TEST_OPS:
                node = ElementaryNode(
                    self.shared.node_id(), CONDITIONAL, op=e.op, static_test=self._static_tests,
                    line=span.line, column=span.column,
                )
            else:
                node = ElementaryNode(self.shared.node_id(), PROCESSING, op=e.op, line=span.line, column=span.column)
            dfg.add(node)
            dfg.edge(left, node.id, SCALAR_EDGE)
            dfg.edge(right, node.id, SCALAR_EDGE)
            return node.id
        if isinstance(e, A.Unary):
            operand = self.expr(e.operand, seq)
            dfg = seq.dfg(span.line, span.column)
            node = ElementaryNode(self.shared.node_id(), PROCESSING, op=e.op, line=span.line, column=span.column)
            dfg.add(node)
            dfg.edge(operand, node.id, SCALAR_EDGE)
            return node.id
        if isinstance(e, A.Assign):
            return self.assign(e.target, e.value, seq, span)
        if isinstance(e, A.Call):
            return self.call(e, seq)
        raise TypeError(f"expression not normalized: {e!r}")

    def assign(self, target, value, seq: _Seq, span: A.SourceSpan) -> Optional[str]:
        val = self.expr(value, seq)
        idx = []
        if isinstance(target, A.ArrayRef):
            idx = [self.expr(ix, seq) for ix in target.indices]
        dfg = seq.dfg(span.line, span.column)
        key = self._versioned_index(dfg, target) if isinstance(target, A.ArrayRef) else None
        node = self._mem(dfg, "write", target, span)
        dfg.edge(val, node.id, SCALAR_EDGE)
        for p in idx:
            dfg.edge(p, node.id, CONTROL_EDGE)
        if isinstance(target, A.ArrayRef):
            dfg.array_writes.setdefault(node.name, []).append((node.id, key))
        else:
            dfg.last_write[node.name] = node.id
            dfg.versions[node.name] += 1
        return val

    def call(self, e: A.Call, seq: _Seq) -> None:
        callee = self.shared.functions[e.callee]
        k = self.shared.instances[e.callee]
        self.shared.instances[e.callee] += 1
        prefix = f"{e.callee}#{k}::"
        rename = {}
        for p, arg in zip(callee.params, e.args):
            if p.is_array and isinstance(arg, (A.Var, A.ArrayRef)):
                rename[p.name] = self.name(arg.name)
            else:
                self.expr(arg, seq)
                rename[p.name] = prefix + p.name
        for d in callee.locals:
            rename[d.name] = prefix + d.name
        rename[RETURN_DATUM] = prefix + RETURN_DATUM
        sub = _FunctionBuilder(self.shared, callee, rename)
        g = sub.root(label=f"call:{e.callee}@{e.span.line}")
        g.callee = e.callee
        g.line, g.column = e.span.line, e.span.column
        seq.add(g)
        return None

    # -- statements ---------------------------------------------------------------

    def stmt(self, s, seq: _Seq) -> None:
        if isinstance(s, A.ExprStmt):
            self.expr(s.expr, seq)
        elif isinstance(s, A.Decl):
            if s.init is not None and not isinstance(s.init, A.InitList):
                self.assign(A.Var(s.name, s.span), s.init, seq, s.span)
        elif isinstance(s, A.Return):
            if s.value is not None:
                val = self.expr(s.value, seq)
                dfg = seq.dfg(s.span.line, s.span.column)
                node = self._mem(dfg, "write", RETURN_DATUM, s.span)
                dfg.edge(val, node.id, SCALAR_EDGE)
        elif isinstance(s, A.Break):
            pass
        elif isinstance(s, A.Block):
            seq.flush()
            g = self.body(list(s.stmts), s.span, "block")
            if g.level != DFG or g.children:
                seq.add(g)
        elif isinstance(s, A.If):
            seq.add(self.if_(s))
        elif isinstance(s, A.For):
            seq.add(self.for_(s))
        elif isinstance(s, A.While):
            seq.add(self.while_(s))
        elif isinstance(s, A.DoWhile):
            seq.add(self.do_while(s))
        elif isinstance(s, A.Switch):
            seq.add(self.switch(s))
        else:
            raise TypeError(f"unknown statement {s!r}")

    def body(self, stmts: list, span: A.SourceSpan, label: str) -> GraphNode:
        seq = _Seq(self.shared)
        for s in stmts:
            self.stmt(s, seq)
        return seq.finish(f"{label}@{span.line}", span.line, span.column)

    def branch(self, s, span: A.SourceSpan, label: str) -> GraphNode:
        if s is None:
            return empty_dfg(self.shared, span.line, span.column)
        stmts = list(s.stmts) if isinstance(s, A.Block) else [s]
        return self.body(stmts, s.span, label)

    def single(self, e, span: A.SourceSpan, static: bool = False) -> GraphNode:
        """DFG for a header expression (condition, init or step)."""
        if e is None:
            return empty_dfg(self.shared, span.line, span.column)
        seq = _Seq(self.shared)
        self._static_tests = static
        try:
            if isinstance(e, A.Decl):
                self.stmt(e, seq)
            else:
                self.expr(e, seq)
        finally:
            self._static_tests = False
        return seq.finish("header", span.line, span.column)

    def _pattern(self, pattern: str, kind: str, span: A.SourceSpan, roles: list) -> GraphNode:
        g = GraphNode(
            self.shared.graph_id(),
            CDFG,
            pattern=pattern,
            label=f"{pattern}@{span.line}",
            key=f"{self.fn.name}/{kind}@{span.line}",
            line=span.line,
            column=span.column,
        )
        for role, child in roles:
            g.children.append(child)
            g.roles[role] = child.id
        return g

    @staticmethod
    def _chain(g: GraphNode, order: list) -> None:
        for a, b in zip(order, order[1:]):
            g.edges.append(Edge(g.roles[a], g.roles[b], CONTROL_EDGE))

    def if_(self, s: A.If) -> GraphNode:
        cond = self.single(s.cond, s.span)
        t = self.branch(s.then, s.span, "then")
        f = self.branch(s.orelse, s.span, "else")
        g = self._pattern("if", "if", s.span, [("condition", cond), ("true-branch", t), ("false-branch", f)])
        g.edges += [
            Edge(cond.id, t.id, CONTROL_EDGE),
            Edge(cond.id, f.id, CONTROL_EDGE),
        ]
        return g

    def for_(self, s: A.For) -> GraphNode:
        var, stride, trips = loop_induction(s)
        init = self.single(s.init, s.span)
        cond = self.single(s.cond, s.span, static=trips is not None)
        body = self.branch(s.body, s.span, "body")
        step = self.single(s.step, s.span)
        g = self._pattern(
            "for", "loop", s.span, [("init", init), ("condition", cond), ("body", body), ("step", step)]
        )
        g.induction = None if var is None else self.name(var)
        g.stride = stride
        self._chain(g, ["init", "condition", "body", "step"])
        self.shared.loop_bounds[g.id] = trips
        return g

    def while_(self, s: A.While) -> GraphNode:
        cond = self.single(s.cond, s.span)
        body = self.branch(s.body, s.span, "body")
        g = self._pattern("while", "loop", s.span, [("condition", cond), ("body", body)])
        self._chain(g, ["condition", "body"])
        self.shared.loop_bounds[g.id] = None
        return g

    def do_while(self, s: A.DoWhile) -> GraphNode:
        body = self.branch(s.body, s.span, "body")
        cond = self.single(s.cond, s.span)
        g = self._pattern("do-while", "loop", s.span, [("body", body), ("condition", cond)])
        self._chain(g, ["body", "condition"])
        self.shared.loop_bounds[g.id] = None
        return g

    def switch(self, s: A.Switch) -> GraphNode:
        seq = _Seq(self.shared)
        val = self.expr(s.scrutinee, seq)
        dfg = seq.dfg(s.span.line, s.span.column)
        for case in s.cases:
            for _ in case.labels:
                node = ElementaryNode(
                    self.shared.node_id(), CONDITIONAL, op="==", line=case.span.line, column=case.span.column
                )
                dfg.add(node)
                dfg.edge(val, node.id, SCALAR_EDGE)
        cond = seq.finish("header", s.span.line, s.span.column)
        roles = [("condition", cond)]
        for case in s.cases:
            stmts = [x for x in case.body if not isinstance(x, A.Break)]
            role = "case(" + ",".join(str(l) for l in case.labels) + ")"
            roles.append((role, self.body(stmts, case.span, "case")))
        default = [x for x in (s.default or ()) if not isinstance(x, A.Break)]
        roles.append(("default", self.body(default, s.span, "default")))
        g = self._pattern("switch", "switch", s.span, roles)
        g.edges += [Edge(cond.id, child.id, CONTROL_EDGE) for _, child in roles[1:]]
        return g

    def root(self, label: Optional[str] = None) -> GraphNode:
        seq = _Seq(self.shared)
        for s in self.fn.body.stmts:
            self.stmt(s, seq)
        span = self.fn.span
        return seq.container(label or self.fn.name, span.line, span.column)


def build_hcdfg(fn: A.AstFunction, functions: Optional[dict] = None) -> Hcdfg:
    """Build the hierarchy of a normalized function.

    ``functions`` maps names to the normalized functions ``fn`` may call;
    callees are embedded as child HCDFGs.
    """
    table = dict(functions or {})
    table.setdefault(fn.name, fn)
    shared = _Shared(fn.name, table)
    root = _FunctionBuilder(shared, fn, {}).root()
    return Hcdfg(fn.name, root, dict(shared.loop_bounds))
