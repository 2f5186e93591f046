"""Run results and cross-algorithm witness validation."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .limits import Counters
from .tree import LabeledTree


@dataclass
class RunResult:
    included: bool
    minimal_roots: list[int]
    algo: str
    witness: list[tuple[int, int]] | None = None
    counters: Counters = field(default_factory=Counters)
    wall_time_micros: int = 0

    def to_dict(self) -> dict:
        return {
            "included": self.included,
            "minimalRoots": list(self.minimal_roots),
            "witness": None if self.witness is None else [list(pair) for pair in self.witness],
            "algo": self.algo,
            "counters": self.counters.as_dict(),
            "wallTimeMicros": self.wall_time_micros,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class Stopwatch:
    def __init__(self):
        self.start = time.perf_counter()

    def micros(self) -> int:
        return int((time.perf_counter() - self.start) * 1e6)


def mapping_violations(p: LabeledTree, t: LabeledTree, pairs) -> list[str]:
    """Check an inclusion mapping; return human-readable violations.

    Checks: total over the pattern, injective both ways, labels preserved,
    ancestry preserved in both directions.
    """
    problems = []
    pairs = [(int(a), int(b)) for a, b in pairs]
    us = [a for a, _ in pairs]
    vs = [b for _, b in pairs]
    if sorted(us) != list(range(len(p))):
        problems.append("mapping does not cover every pattern node exactly once")
    if len(set(vs)) != len(vs):
        problems.append("two pattern nodes share a text node")
    for a, b in pairs:
        if p.labels[a] != t.labels[b]:
            problems.append(f"label mismatch at ({a},{b})")
    for a1, b1 in pairs:
        for a2, b2 in pairs:
            if a1 != a2 and p.is_ancestor(a1, a2) != t.is_ancestor(b1, b2):
                problems.append(f"ancestry differs for ({a1},{b1}) and ({a2},{b2})")
    return problems
