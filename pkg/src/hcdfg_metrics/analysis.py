"""End-to-end pipeline: source files to characterized, classified functions."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .errors import AnalysisError, FrontendError
from .frontend import load_functions
from .frontend.ast import AstFunction
from .graph import add_multidim_edges, build_hcdfg
from .graph.model import Hcdfg
from .guidance import FunctionClass, Thresholds, classify
from .metrics import CharacterizationTree, CostTable, Profile, characterize


@dataclass
class FunctionAnalysis:
    name: str
    file: str
    hcdfg: Hcdfg
    tree: CharacterizationTree
    cls: FunctionClass


@dataclass(frozen=True)
class Failure:
    file: str
    function: Optional[str]
    message: str

    def __str__(self) -> str:
        if self.function is None or self.message.startswith(self.file):
            return self.message
        return f"{self.file}: {self.function}: {self.message}"


@dataclass
class SourceUnit:
    file: str
    functions: list  # AstFunction

    @property
    def table(self) -> dict:
        return {f.name: f for f in self.functions}


def load_unit(path) -> SourceUnit:
    path = str(path)
    text = Path(path).read_text(encoding="utf-8")
    return SourceUnit(path, load_functions(text, path))


def build(unit: SourceUnit, fn: AstFunction) -> Hcdfg:
    return add_multidim_edges(build_hcdfg(fn, unit.table))


def analyze_function(unit: SourceUnit, fn: AstFunction, costs: CostTable, profile: Profile,
                     thresholds: Thresholds) -> FunctionAnalysis:
    h = build(unit, fn)
    tree = characterize(h, costs, profile)
    return FunctionAnalysis(fn.name, unit.file, h, tree, classify(tree.root, thresholds))


def load_units(paths: Iterable) -> tuple[list[SourceUnit], list[Failure]]:
    units, failures = [], []
    for p in paths:
        try:
            units.append(load_unit(p))
        except FrontendError as exc:
            failures.append(Failure(str(p), None, str(exc)))
        except OSError as exc:
            failures.append(Failure(str(p), None, f"{p}: cannot read: {exc.strerror}"))
    return units, failures


def analyze_paths(paths: Iterable, costs: Optional[CostTable] = None, profile: Optional[Profile] = None,
                  thresholds: Optional[Thresholds] = None,
                  jobs: int = 1) -> tuple[list[FunctionAnalysis], list[Failure]]:
    """Analyze every function of every file; failures do not stop the others.

    Results come back sorted by (function, file) whatever the worker count.
    """
    costs = costs or CostTable()
    profile = profile or Profile()
    thresholds = thresholds or Thresholds()
    units, failures = load_units(paths)
    work = [(u, f) for u in units for f in u.functions]

    def run(item):
        unit, fn = item
        try:
            return analyze_function(unit, fn, costs, profile, thresholds)
        except AnalysisError as exc:
            return Failure(unit.file, fn.name, str(exc))

    if jobs > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, work))
    else:
        results = [run(w) for w in work]
    done = [r for r in results if isinstance(r, FunctionAnalysis)]
    failures += [r for r in results if isinstance(r, Failure)]
    done.sort(key=lambda a: (a.name, a.file))
    failures.sort(key=lambda f: (f.file, f.function or ""))
    return done, failures
