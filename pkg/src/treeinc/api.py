"""One entry point for every decision procedure."""

from __future__ import annotations

from .fast import decide as fast_decide
from .km import km_decide
from .limits import Counters, Limits
from .occ import choose_algo, occ_decide
from .oracle import included_bruteforce, minimal_roots_bruteforce
from .result import RunResult, Stopwatch
from .tree import LabeledTree

ALGOS = ("oracle", "km", "alginc1", "alginc2", "occ2", "occ3", "auto")


def oracle_decide(p: LabeledTree, t: LabeledTree, witness: bool = True) -> RunResult:
    clock = Stopwatch()
    roots = sorted(minimal_roots_bruteforce(p, t))
    pairs = included_bruteforce(p, t) if roots and witness else None
    return RunResult(bool(roots), roots, "oracle", pairs, Counters(), clock.micros())


def decide(p: LabeledTree, t: LabeledTree, algo: str = "auto", witness: bool = True,
           limits: Limits | None = None) -> RunResult:
    """Decide whether ``p`` is included in ``t`` and find all minimal roots."""
    if algo == "auto":
        algo = choose_algo(p, t)
    if algo == "oracle":
        return oracle_decide(p, t, witness)
    if algo == "km":
        return km_decide(p, t, witness, limits)
    if algo in ("alginc1", "alginc2"):
        return fast_decide(p, t, algo, witness, limits)
    if algo in ("occ2", "occ3"):
        return occ_decide(p, t, algo, witness, limits)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGOS}")
