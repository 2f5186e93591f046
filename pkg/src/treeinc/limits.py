"""Resource caps, read from the environment.

TREEINC_MAX_FAMILY   largest family universe (number of count vectors) per cell
TREEINC_MAX_TABLE    largest number of family slots held at once (rows x universe)
TREEINC_UNION_BUDGET stop a run once this many set operations were counted
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from .errors import InstanceTimeout, ResourceCapExceeded


def _env_int(name: str, default: int | None) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return int(raw)


@dataclass
class Limits:
    max_family: int = 1 << 20
    max_table: int = 1 << 27
    union_budget: int | None = None
    deadline: float | None = None  # time.monotonic() value

    @classmethod
    def from_env(cls, timeout: float | None = None) -> "Limits":
        return cls(
            max_family=_env_int("TREEINC_MAX_FAMILY", 1 << 20),
            max_table=_env_int("TREEINC_MAX_TABLE", 1 << 27),
            union_budget=_env_int("TREEINC_UNION_BUDGET", None),
            deadline=None if timeout is None else time.monotonic() + timeout,
        )

    def check_family(self, universe: int, rows: int) -> None:
        if universe > self.max_family:
            raise ResourceCapExceeded(
                f"family universe {universe} exceeds TREEINC_MAX_FAMILY={self.max_family}"
            )
        if universe * rows > self.max_table:
            raise ResourceCapExceeded(
                f"family table {rows}x{universe} exceeds TREEINC_MAX_TABLE={self.max_table}"
            )

    def check_progress(self, counters: "Counters") -> None:
        if self.union_budget is not None and counters.set_unions > self.union_budget:
            raise ResourceCapExceeded(
                f"{counters.set_unions} set operations exceed TREEINC_UNION_BUDGET={self.union_budget}"
            )
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise InstanceTimeout("instance deadline passed")


@dataclass
class Counters:
    set_unions: int = 0
    branches: int = 0
    dp_cells: int = 0
    match_augmentations: int = 0
    alg_calls: int = 0
    alg_branches: int = 0
    two_sat_calls: int = 0
    cells: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "setUnions": self.set_unions,
            "branches": self.branches,
            "dpCells": self.dp_cells,
            "matchAugmentations": self.match_augmentations,
            "algCalls": self.alg_calls,
            "algBranches": self.alg_branches,
            "twoSatCalls": self.two_sat_calls,
        }
