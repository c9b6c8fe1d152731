"""Implementation-affinity classes and criticality ranking of functions."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, Optional

from .errors import ConfigError
from .metrics.combine import MetricRecord
from .metrics.config import load_toml

HW = "hw-candidate"
SW = "sw-candidate"
EXPLORE = "explore"


@dataclass(frozen=True)
class Thresholds:
    gamma_high: float = 4.0
    gamma_low: float = 1.5
    com_high: float = 0.15
    mom_high: float = 0.7

    def __post_init__(self):
        for k, v in asdict(self).items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
                raise ConfigError(f"threshold {k} must be a positive number, got {v!r}")
        if not self.gamma_low < self.gamma_high:
            raise ConfigError("gamma_low must be below gamma_high")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "Thresholds":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown thresholds: {sorted(unknown)}")
        return cls(**dict(data))

    @classmethod
    def load(cls, path) -> "Thresholds":
        return cls.from_mapping(load_toml(path))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FunctionClass:
    value: str
    rationale: str
    memory_pressure: bool = False


def _f(x: float) -> str:
    return f"{x:.2f}"


def classify(record: MetricRecord, th: Thresholds = Thresholds()) -> FunctionClass:
    """Data-flow dominated and parallel code goes to hardware, sequential code to software.

    A very high γ (at least twice ``gamma_high``) outweighs a test density
    above ``com_high``.
    """
    g, com, mom = record.gamma, record.com, record.mom
    pressure = mom >= th.mom_high
    note = f"; MOM {_f(mom)} >= {_f(th.mom_high)}: memory pressure" if pressure else ""
    if g >= th.gamma_high and com <= th.com_high:
        why = f"gamma {_f(g)} >= {_f(th.gamma_high)} and COM {_f(com)} <= {_f(th.com_high)}"
        return FunctionClass(HW, why + note, pressure)
    if g >= 2 * th.gamma_high:
        why = f"gamma {_f(g)} >= 2 x {_f(th.gamma_high)} outweighs COM {_f(com)} > {_f(th.com_high)}"
        return FunctionClass(HW, why + note, pressure)
    if g <= th.gamma_low:
        return FunctionClass(SW, f"gamma {_f(g)} <= {_f(th.gamma_low)}" + note, pressure)
    if g >= th.gamma_high:
        why = f"gamma {_f(g)} >= {_f(th.gamma_high)} but COM {_f(com)} > {_f(th.com_high)}"
    else:
        why = f"{_f(th.gamma_low)} < gamma {_f(g)} < {_f(th.gamma_high)}"
    return FunctionClass(EXPLORE, why + note, pressure)


@dataclass(frozen=True)
class GuidanceRow:
    name: str
    gamma: float
    mom: float
    com: float
    cls: FunctionClass

    @property
    def memory_pressure(self) -> bool:
        return self.cls.memory_pressure


@dataclass(frozen=True)
class GuidanceReport:
    rows: tuple

    def names(self) -> list[str]:
        return [r.name for r in self.rows]


def rank(records: Iterable[tuple[str, MetricRecord]], th: Optional[Thresholds] = None) -> GuidanceReport:
    """Rows by descending γ, ties by name."""
    th = th or Thresholds()
    rows = [GuidanceRow(n, r.gamma, r.mom, r.com, classify(r, th)) for n, r in records]
    rows.sort(key=lambda row: (-row.gamma, row.name))
    return GuidanceReport(tuple(rows))
