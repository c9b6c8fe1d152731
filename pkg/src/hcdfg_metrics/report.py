"""Report assembly and emission as table, JSON or CSV."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .analysis import Failure, FunctionAnalysis
from .errors import FormatError
from .graph.model import GraphNode
from .guidance import Thresholds, rank
from .metrics.combine import MetricRecord

FORMATS = ("table", "json", "csv")


@dataclass(frozen=True)
class LevelRow:
    path: str
    level: str
    pattern: Optional[str]
    depth: int
    metrics: dict


@dataclass(frozen=True)
class FunctionReport:
    name: str
    file: str
    metrics: dict
    cls: str
    rationale: str
    memory_pressure: bool
    levels: tuple = ()

    @property
    def gamma(self) -> float:
        return self.metrics["gamma"]


@dataclass(frozen=True)
class Report:
    version: str
    config: dict
    functions: tuple  # FunctionReport, sorted by name
    ranking: tuple  # function names by decreasing gamma
    failures: tuple = ()  # (file, function, message)
    projection: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "functions": [
                {
                    "name": f.name,
                    "file": f.file,
                    "metrics": f.metrics,
                    "class": f.cls,
                    "rationale": f.rationale,
                    "memory_pressure": f.memory_pressure,
                    "levels": [
                        {"path": l.path, "level": l.level, "pattern": l.pattern, "depth": l.depth, "metrics": l.metrics}
                        for l in f.levels
                    ],
                }
                for f in self.functions
            ],
            "ranking": list(self.ranking),
            "failures": [{"file": a, "function": b, "message": c} for a, b, c in self.failures],
            "projection": self.projection,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        functions = tuple(
            FunctionReport(
                f["name"], f["file"], f["metrics"], f["class"], f["rationale"], f["memory_pressure"],
                tuple(LevelRow(l["path"], l["level"], l["pattern"], l["depth"], l["metrics"]) for l in f["levels"]),
            )
            for f in d["functions"]
        )
        failures = tuple((x["file"], x["function"], x["message"]) for x in d["failures"])
        return cls(d["version"], d["config"], functions, tuple(d["ranking"]), failures, d.get("projection"))


def _depths(root: GraphNode) -> dict:
    out = {}

    def visit(g: GraphNode, depth: int) -> None:
        out[g.id] = depth
        for c in g.children:
            if isinstance(c, GraphNode):
                visit(c, depth + 1)

    visit(root, 0)
    return out


def build_report(analyses: list[FunctionAnalysis], failures: list[Failure], config: dict,
                 thresholds: Optional[Thresholds] = None, levels: Optional[int] = None,
                 projection: Optional[dict] = None) -> Report:
    funcs = []
    for a in analyses:
        rows = ()
        if levels is not None:
            depth = _depths(a.hcdfg.root)
            rows = tuple(
                LevelRow(path, g.level, g.pattern, depth[g.id], rec.to_dict())
                for path, g, rec in a.tree.rows()
                if depth[g.id] <= levels
            )
        funcs.append(
            FunctionReport(a.name, a.file, a.tree.root.to_dict(), a.cls.value, a.cls.rationale,
                           a.cls.memory_pressure, rows)
        )
    order = rank([(a.name, a.tree.root) for a in analyses], thresholds)
    fails = tuple((f.file, f.function, f.message) for f in failures)
    return Report(__version__, config, tuple(funcs), tuple(order.names()), fails, projection)


def _n(x: float) -> str:
    return f"{x:.2f}"


def to_table(report: Report) -> str:
    by_name = {}
    for f in report.functions:
        by_name.setdefault(f.name, []).append(f)
    ordered = []
    for name in report.ranking:
        if by_name.get(name):
            ordered.append(by_name[name].pop(0))
    width = max([len("function")] + [len(f.name) for f in report.functions]
                + [len(l.path) + 2 for f in report.functions for l in f.levels])
    lines = [f"{'function':<{width}}  {'gamma':>8}  {'MOM':>5}  {'COM':>5}  class"]
    for f in ordered:
        m = f.metrics
        flag = "  [memory pressure]" if f.memory_pressure else ""
        lines.append(f"{f.name:<{width}}  {_n(m['gamma']):>8}  {_n(m['mom']):>5}  {_n(m['com']):>5}  {f.cls}{flag}")
        for l in f.levels:
            if l.depth == 0:
                continue
            m = l.metrics
            unroll = f"  unroll {m['max_unroll']}" if "max_unroll" in m else ""
            label = "  " + l.path
            lines.append(f"{label:<{width}}  {_n(m['gamma']):>8}  {_n(m['mom']):>5}  {_n(m['com']):>5}  {l.level}{unroll}")
    if report.projection:
        lines.append("")
        lines.append(f"trade-off curve for {report.projection['function']}")
        lines.append(report.projection["csv"].rstrip("\n"))
    return "\n".join(lines) + "\n"


CSV_FIELDS = ["name", "path", "level", "gamma", "mom", "com", "nop", "cp", "n_proc", "n_gmem", "n_test",
              "max_unroll", "class", "memory_pressure"]


def to_csv(report: Report) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for f in report.functions:
        rows = f.levels or (LevelRow(f.name, "HCDFG", None, 0, f.metrics),)
        for l in rows:
            m = l.metrics
            top = l.depth == 0
            w.writerow([
                f.name, l.path, l.level, repr(m["gamma"]), repr(m["mom"]), repr(m["com"]), repr(m["nop"]),
                repr(m["cp"]), repr(m["n_proc"]), repr(m["n_gmem"]), repr(m["n_test"]), m.get("max_unroll", ""),
                f.cls if top else "", int(f.memory_pressure) if top else "",
            ])
    if report.projection:
        out.write("\n")
        out.write(report.projection["csv"])
    return out.getvalue()


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def emit_report(report: Report, fmt: str) -> bytes:
    if fmt == "table":
        text = to_table(report)
    elif fmt == "json":
        text = to_json(report)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise FormatError(f"unsupported report format {fmt!r} (expected one of {', '.join(FORMATS)})")
    return text.encode("utf-8")
