"""Cost tables and execution profiles.

Both load from TOML files.  A cost table maps operator tokens (``+``,
``*``, ``<<``...) or the pseudo-keys ``read``, ``write``, ``test`` and
``local`` to cycle counts::

    "*" = 2
    read = 1
    test = 1

A profile carries loop trip counts and branch probabilities keyed by
``function/kind@line`` (kind is ``loop``, ``if`` or ``switch``)::

    [trip_counts]
    "label/loop@14" = 640

    [branch_probabilities]
    "label/if@20" = 0.9            # P(true)
    "label/switch@31" = [0.5, 0.25, 0.25]   # cases in order, then default
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Mapping, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from ..errors import ConfigError, ProbabilityError
from ..graph.model import CONDITIONAL, MEMORY, ElementaryNode

PROB_TOLERANCE = 1e-9

# Processing operators and global (N1) accesses take one cycle.  Tests and
# register-level (non-N1) accesses are free by default so that a DFG's
# critical path never exceeds its operation count; set ``test``/``local``
# to charge them.
DEFAULT_COSTS = {"read": 1, "write": 1, "test": 0, "local": 0}
DEFAULT_OP_COST = 1


def load_toml(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class CostTable:
    entries: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_COSTS))
    default: float = DEFAULT_OP_COST

    def __post_init__(self):
        for k, v in self.entries.items():
            if not isinstance(v, (int, float)) or isinstance(v, bool) or v < 0 or math.isnan(v):
                raise ConfigError(f"cost for {k!r} must be a non-negative number, got {v!r}")

    def cost(self, node: ElementaryNode) -> float:
        if node.kind == MEMORY:
            if node.is_global_access:
                return self.entries.get(node.mode, self.default)
            return self.entries.get("local", self.default)
        if node.kind == CONDITIONAL:
            if node.op in self.entries:
                return self.entries[node.op]
            return self.entries.get("test", self.default)
        return self.entries.get(node.op, self.default)

    def scaled(self, c: float) -> "CostTable":
        return CostTable({k: v * c for k, v in self.entries.items()}, self.default * c)

    @classmethod
    def unit(cls) -> "CostTable":
        """Every node, tests and local accesses included, costs one cycle."""
        return cls({"read": 1, "write": 1, "test": 1, "local": 1})

    @classmethod
    def from_mapping(cls, data: Mapping) -> "CostTable":
        entries = dict(DEFAULT_COSTS)
        default = data.get("default", DEFAULT_OP_COST)
        for k, v in data.items():
            if k != "default":
                entries[str(k)] = v
        return cls(entries, default)

    @classmethod
    def load(cls, path) -> "CostTable":
        return cls.from_mapping(load_toml(path))

    def to_dict(self) -> dict:
        return {"default": self.default, **{k: self.entries[k] for k in sorted(self.entries)}}


def check_probabilities(probs, what: str = "branch") -> tuple:
    probs = tuple(float(p) for p in probs)
    for p in probs:
        if not (0.0 <= p <= 1.0) or math.isnan(p):
            raise ProbabilityError(f"{what} probability {p} outside [0, 1]")
    if abs(sum(probs) - 1.0) > PROB_TOLERANCE:
        raise ProbabilityError(f"{what} probabilities {list(probs)} do not sum to 1")
    return probs


@dataclass(frozen=True)
class Profile:
    trip_counts: Mapping[str, int] = field(default_factory=dict)
    branch_probabilities: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        for k, n in self.trip_counts.items():
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise ConfigError(f"trip count for {k!r} must be a non-negative integer, got {n!r}")

    def trips(self, key: Optional[str]) -> Optional[int]:
        return None if key is None else self.trip_counts.get(key)

    def if_probs(self, key: Optional[str]) -> tuple[float, float]:
        p = self.branch_probabilities.get(key) if key else None
        if p is None:
            return 0.5, 0.5
        if len(p) == 1:
            return check_probabilities((p[0], 1.0 - p[0]))
        return check_probabilities(p)

    def switch_probs(self, key: Optional[str], n_arms: int) -> tuple:
        p = self.branch_probabilities.get(key) if key else None
        if p is None:
            return tuple(1.0 / n_arms for _ in range(n_arms))
        if len(p) != n_arms:
            raise ProbabilityError(f"{key}: expected {n_arms} probabilities, got {len(p)}")
        return check_probabilities(p, "switch")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "Profile":
        unknown = set(data) - {"trip_counts", "branch_probabilities"}
        if unknown:
            raise ConfigError(f"unknown profile sections: {sorted(unknown)}")
        trips = dict(data.get("trip_counts", {}))
        probs = {}
        for k, v in data.get("branch_probabilities", {}).items():
            seq = (v,) if isinstance(v, (int, float)) else tuple(v)
            try:
                check_probabilities((seq[0], 1.0 - seq[0]) if len(seq) == 1 else seq)
            except (ProbabilityError, TypeError, IndexError) as exc:
                raise ConfigError(f"branch probabilities for {k!r}: {exc}") from exc
            probs[k] = seq
        return cls(trips, probs)

    @classmethod
    def load(cls, path) -> "Profile":
        return cls.from_mapping(load_toml(path))

    def to_dict(self) -> dict:
        return {
            "trip_counts": {k: self.trip_counts[k] for k in sorted(self.trip_counts)},
            "branch_probabilities": {k: list(self.branch_probabilities[k]) for k in sorted(self.branch_probabilities)},
        }
