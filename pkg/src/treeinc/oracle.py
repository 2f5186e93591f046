"""Brute-force ground truth for small instances.

The inclusion oracle searches label-, injectivity- and ancestry-preserving
mappings directly, assigning pattern nodes in preorder with backtracking.
It shares no tables with the dynamic programs it is used to check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import PreconditionError, SizeGuardError
from .tree import LabeledTree

MAX_PATTERN = 12
MAX_TEXT = 20
MAX_SETS = 20


def _guard(p: LabeledTree, t: LabeledTree, max_pattern: int, max_text: int) -> None:
    if len(p) > max_pattern or len(t) > max_text:
        raise SizeGuardError(
            f"oracle limited to |P|<={max_pattern}, |T|<={max_text}; got {len(p)}, {len(t)}"
        )


def _search(p: LabeledTree, t: LabeledTree, roots: Sequence[int]) -> list[tuple[int, int]] | None:
    m = len(p)
    image = [-1] * m
    used: set[int] = set()

    def fits(u: int, w: int) -> bool:
        if p.labels[u] != t.labels[w] or w in used:
            return False
        for x in range(u):
            # x precedes u in preorder, so u is never an ancestor of x
            if p.is_ancestor(x, u) != t.is_ancestor(image[x], w):
                return False
            if t.is_ancestor(w, image[x]):
                return False
        return True

    def extend(u: int) -> bool:
        if u == m:
            return True
        cands = roots if u == 0 else t.descendants(image[p.parent[u]])
        for w in cands:
            if fits(u, w):
                image[u] = w
                used.add(w)
                if extend(u + 1):
                    return True
                used.discard(w)
                image[u] = -1
        return False

    if extend(0):
        return [(u, image[u]) for u in range(m)]
    return None


def included_bruteforce(p: LabeledTree, t: LabeledTree, max_pattern: int = MAX_PATTERN,
                        max_text: int = MAX_TEXT) -> list[tuple[int, int]] | None:
    """A witness mapping of all of ``p`` into ``t``, or None."""
    _guard(p, t, max_pattern, max_text)
    return _search(p, t, range(len(t)))


def pinned_bruteforce(p: LabeledTree, t: LabeledTree, v: int) -> list[tuple[int, int]] | None:
    """A witness with the pattern root mapped to ``v``, or None."""
    return _search(p, t, [v])


def minimal_roots_bruteforce(p: LabeledTree, t: LabeledTree, max_pattern: int = MAX_PATTERN,
                             max_text: int = MAX_TEXT) -> set[int]:
    _guard(p, t, max_pattern, max_text)
    pinned = {v for v in range(len(t)) if t.labels[v] == p.labels[0] and pinned_bruteforce(p, t, v)}
    return {v for v in pinned if not any(w in pinned for w in t.descendants(v))}


@dataclass(frozen=True)
class X3CInstance:
    universe: tuple[str, ...]
    sets: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        elems = set(self.universe)
        if len(elems) != len(self.universe):
            raise PreconditionError("universe has repeated elements")
        if len(self.universe) % 3:
            raise PreconditionError("universe size must be divisible by 3")
        count = dict.fromkeys(self.universe, 0)
        for s in self.sets:
            if len(s) != 3 or len(set(s)) != 3:
                raise PreconditionError(f"set {s} is not a 3-element set")
            for x in s:
                if x not in elems:
                    raise PreconditionError(f"set {s} uses unknown element {x!r}")
                count[x] += 1
        for x, c in count.items():
            if c == 0:
                raise PreconditionError(f"element {x!r} is in no set")
            if c > 3:
                raise PreconditionError(f"element {x!r} is in {c} sets (at most 3 allowed)")

    @property
    def n(self) -> int:
        return len(self.universe)

    @property
    def m(self) -> int:
        return len(self.sets)


def x3c_cover(inst: X3CInstance, max_sets: int = MAX_SETS) -> list[int] | None:
    """Indices of an exact cover, found by enumerating n/3-subsets."""
    if inst.m > max_sets:
        raise SizeGuardError(f"x3c oracle limited to {max_sets} sets, got {inst.m}")
    target = set(inst.universe)
    for combo in combinations(range(inst.m), inst.n // 3):
        covered = set()
        for i in combo:
            covered.update(inst.sets[i])
        if covered == target:
            return list(combo)
    return None


def x3c_bruteforce(inst: X3CInstance, max_sets: int = MAX_SETS) -> bool:
    return x3c_cover(inst, max_sets) is not None
