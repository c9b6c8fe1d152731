"""Hierarchical control and data flow graph (HCDFG) construction."""

from .builder import build_hcdfg, static_trip_count
from .effects import Effects, effects
from .export import export_graph, import_graph
from .memory import classify_function, classify_memory
from .model import (
    CDFG,
    CONDITIONAL,
    CONTROL_EDGE,
    DFG,
    HCDFG,
    MEMORY,
    MULTIDIM_EDGE,
    PROCESSING,
    SCALAR_EDGE,
    Edge,
    ElementaryNode,
    GraphNode,
    Hcdfg,
    MemoryClass,
)
from .multidim import add_multidim_edges

__all__ = [
    "CDFG",
    "CONDITIONAL",
    "CONTROL_EDGE",
    "DFG",
    "HCDFG",
    "MEMORY",
    "MULTIDIM_EDGE",
    "PROCESSING",
    "SCALAR_EDGE",
    "Edge",
    "Effects",
    "ElementaryNode",
    "GraphNode",
    "Hcdfg",
    "MemoryClass",
    "add_multidim_edges",
    "build_hcdfg",
    "classify_function",
    "classify_memory",
    "effects",
    "export_graph",
    "import_graph",
    "static_trip_count",
]
