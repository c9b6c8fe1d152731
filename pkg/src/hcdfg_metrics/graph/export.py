"""DOT and JSON serialization of HCDFGs."""

from __future__ import annotations

import json

from ..errors import FormatError
from .model import (
    CONDITIONAL,
    MEMORY,
    MULTIDIM_EDGE,
    CONTROL_EDGE,
    Edge,
    ElementaryNode,
    GraphNode,
    Hcdfg,
    MemoryClass,
)

_SHAPES = {MEMORY: "box", CONDITIONAL: "diamond"}
_EDGE_STYLE = {CONTROL_EDGE: "dashed", MULTIDIM_EDGE: "bold"}


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _elem_label(n: ElementaryNode) -> str:
    if n.kind == MEMORY:
        return f"{n.mode} {n.name} ({n.mem_class.value})"
    return n.op


def _anchor(g: GraphNode) -> str:
    return f"anchor_{g.id}"


def to_dot(h: Hcdfg) -> str:
    lines = [f"digraph {_q(h.function)} {{", "  compound=true;", f"  label={_q(h.function)};"]

    def emit(g: GraphNode, depth: int, cluster: bool) -> None:
        pad = "  " * depth
        inner = pad
        if cluster:
            lines.append(f"{pad}subgraph {_q('cluster_' + g.id)} {{")
            title = g.label if not g.pattern else f"{g.level} {g.label}"
            lines.append(f"{pad}  label={_q(title)};")
            inner = pad + "  "
        lines.append(f"{inner}{_q(_anchor(g))} [shape=point, style=invis];")
        for c in g.children:
            if isinstance(c, GraphNode):
                emit(c, len(inner) // 2, True)
            else:
                shape = _SHAPES.get(c.kind, "ellipse")
                lines.append(f"{inner}{_q(c.id)} [label={_q(_elem_label(c))}, shape={shape}];")
        for e in g.edges:
            style = _EDGE_STYLE.get(e.kind, "solid")
            src, dst = g.child(e.src), g.child(e.dst)
            attrs = [f"style={style}"]
            a, b = e.src, e.dst
            if isinstance(src, GraphNode):
                a = _anchor(src)
                attrs.append(f"ltail={_q('cluster_' + src.id)}")
            if isinstance(dst, GraphNode):
                b = _anchor(dst)
                attrs.append(f"lhead={_q('cluster_' + dst.id)}")
            lines.append(f"{inner}{_q(a)} -> {_q(b)} [{', '.join(attrs)}];")
        if cluster:
            lines.append(f"{pad}}}")

    emit(h.root, 1, False)
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_dict(h: Hcdfg) -> dict:
    nodes, edges = [], []

    def visit(g: GraphNode, parent, role) -> None:
        rec = {
            "id": g.id,
            "level": g.level,
            "parent": parent,
            "label": g.label,
            "span": {"line": g.line, "column": g.column},
        }
        for attr in ("pattern", "key", "callee", "induction"):
            if getattr(g, attr) is not None:
                rec[attr] = getattr(g, attr)
        if g.stride is not None:
            rec["stride"] = list(g.stride)
        if role is not None:
            rec["role"] = role
        nodes.append(rec)
        role_of = {cid: r for r, cid in g.roles.items()}
        for c in g.children:
            if isinstance(c, GraphNode):
                visit(c, g.id, role_of.get(c.id))
            else:
                n = {"id": c.id, "kind": c.kind, "parent": g.id, "span": {"line": c.line, "column": c.column}}
                if c.op is not None:
                    n["operator"] = c.op
                if c.kind == MEMORY:
                    n.update(mode=c.mode, name=c.name, mem_class=c.mem_class.value, is_array=c.is_array)
                    if c.fmt is not None:
                        n["format"] = c.fmt
                    if c.index is not None:
                        n["index"] = [None if f is None else [list(p) for p in f] for f in c.index]
                if c.static_test:
                    n["static_test"] = True
                nodes.append(n)
        edges.extend({"from": e.src, "to": e.dst, "kind": e.kind, "graph": g.id} for e in g.edges)

    visit(h.root, None, None)
    bounds = {k: v for k, v in sorted(h.loop_bounds.items())}
    return {"function": h.function, "loop_bounds": bounds, "nodes": nodes, "edges": edges}


def from_json_dict(data: dict) -> Hcdfg:
    graphs: dict[str, GraphNode] = {}
    root = None
    for rec in data["nodes"]:
        span = rec.get("span", {})
        line, column = span.get("line", 1), span.get("column", 1)
        if "level" in rec:
            g = GraphNode(
                rec["id"], rec["level"], pattern=rec.get("pattern"), label=rec.get("label", ""),
                key=rec.get("key"), callee=rec.get("callee"), induction=rec.get("induction"),
                stride=tuple(rec["stride"]) if "stride" in rec else None, line=line, column=column,
            )
            graphs[g.id] = g
            if rec["parent"] is None:
                root = g
            else:
                parent = graphs[rec["parent"]]
                parent.children.append(g)
                if "role" in rec:
                    parent.roles[rec["role"]] = g.id
        else:
            index = rec.get("index")
            if index is not None:
                index = tuple(None if f is None else tuple(tuple(p) for p in f) for f in index)
            n = ElementaryNode(
                rec["id"], rec["kind"], op=rec.get("operator"), mode=rec.get("mode"), name=rec.get("name"),
                mem_class=MemoryClass(rec["mem_class"]) if "mem_class" in rec else None,
                fmt=rec.get("format"), index=index, is_array=rec.get("is_array", False),
                static_test=rec.get("static_test", False), line=line, column=column,
            )
            graphs[rec["parent"]].children.append(n)
    for e in data["edges"]:
        graphs[e["graph"]].edges.append(Edge(e["from"], e["to"], e["kind"]))
    if root is None:
        raise ValueError("graph JSON has no root node")
    return Hcdfg(data["function"], root, dict(data.get("loop_bounds", {})))


def export_graph(h: Hcdfg, fmt: str) -> bytes:
    """Serialize ``h`` as ``dot`` or ``json``."""
    if fmt == "dot":
        return to_dot(h).encode("utf-8")
    if fmt == "json":
        return (json.dumps(to_json_dict(h), indent=1, sort_keys=True) + "\n").encode("utf-8")
    raise FormatError(f"unsupported graph format {fmt!r} (expected dot or json)")


def import_graph(data: bytes) -> Hcdfg:
    return from_json_dict(json.loads(data.decode("utf-8")))
