"""Bottom-up dynamic programming over (pattern node, text node) cells.

Pattern nodes are processed in postorder, so every child row is final
before its parent is computed. Each algorithm supplies a row solver that
fills ``inc[u, :]`` for an internal pattern node ``u``; minimality is then
derived from inclusion. Pattern nodes with isomorphic subtrees share rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .family import ClassLayout
from .limits import Counters, Limits
from .tree import LabeledTree, iso_code


@dataclass
class DPTable:
    inc: np.ndarray
    minimal: np.ndarray
    inc_below: np.ndarray

    @classmethod
    def empty(cls, m: int, n: int) -> "DPTable":
        return cls(
            np.zeros((m, n), dtype=np.bool_),
            np.zeros((m, n), dtype=np.bool_),
            np.zeros((m, n), dtype=np.bool_),
        )


@dataclass
class ChildClasses:
    """Children of one pattern node grouped by subtree isomorphism."""

    reps: list[int]
    members: list[list[int]]
    layout: ClassLayout

    @classmethod
    def of(cls, p: LabeledTree, codes: list[str], u: int) -> "ChildClasses":
        groups: dict[str, list[int]] = {}
        for c in p.children[u]:
            groups.setdefault(codes[c], []).append(c)
        members = list(groups.values())
        return cls([g[0] for g in members], members, ClassLayout.from_mults([len(g) for g in members]))


@dataclass
class DPContext:
    p: LabeledTree
    t: LabeledTree
    limits: Limits = field(default_factory=Limits.from_env)
    counters: Counters = field(default_factory=Counters)

    def __post_init__(self):
        self.table = DPTable.empty(len(self.p), len(self.t))
        self.codes = iso_code(self.p)
        ids: dict[str, int] = {}
        self.p_lab = np.array([ids.setdefault(x, len(ids)) for x in self.p.labels], dtype=np.int64)
        self.t_lab = np.array([ids.setdefault(x, len(ids)) for x in self.t.labels], dtype=np.int64)
        self._classes: dict[int, ChildClasses] = {}
        self.solved_rep: dict[str, int] = {}
        self.done = False

    def classes(self, u: int) -> ChildClasses:
        if u not in self._classes:
            self._classes[u] = ChildClasses.of(self.p, self.codes, u)
        return self._classes[u]

    def label_matches(self, u: int) -> np.ndarray:
        return self.t_lab == self.p_lab[u]

    def has_below(self, pattern_node: int, v: int) -> bool:
        """Some strict descendant of text node v includes pattern_node."""
        t = self.t
        return bool(self.table.inc[pattern_node, v + 1 : v + int(t.size[v])].any())


def update_minimality(t: LabeledTree, table: DPTable, u: int) -> None:
    """Derive ``minimal`` and ``inc_below`` for row ``u`` from ``inc``.

    Subtrees are contiguous preorder ranges, so counts of inclusions inside
    a subtree come from one prefix sum.
    """
    row = table.inc[u]
    n = len(row)
    prefix = np.concatenate(([0], np.cumsum(row, dtype=np.int64)))
    starts = np.arange(n)
    ends = starts + t.size
    inside = prefix[ends] - prefix[starts]
    table.inc_below[u] = inside > 0
    strictly_below = inside - row
    table.minimal[u] = row & (strictly_below == 0)


RowSolver = Callable[[DPContext, int], np.ndarray]


def run(ctx: DPContext, solve_row: RowSolver) -> DPTable:
    p, table = ctx.p, ctx.table
    for u in p.postorder:
        code = ctx.codes[u]
        rep = ctx.solved_rep.get(code)
        if rep is not None:
            table.inc[u] = table.inc[rep]
            table.minimal[u] = table.minimal[rep]
            table.inc_below[u] = table.inc_below[rep]
            continue
        if p.is_leaf(u):
            table.inc[u] = ctx.label_matches(u)
        else:
            table.inc[u] = solve_row(ctx, u)
        update_minimality(ctx.t, table, u)
        ctx.solved_rep[code] = u
        ctx.limits.check_progress(ctx.counters)
    ctx.done = True
    return table


def candidate_cells(ctx: DPContext, u: int) -> list[int]:
    """Text nodes where cell (u, v) can still hold.

    Labels must match, T(v) needs at least deg(u) strict descendants, and
    every child class must be included somewhere strictly below v.
    """
    t = ctx.t
    reps = ctx.classes(u).reps
    need = len(ctx.p.children[u])
    out = []
    for v in np.flatnonzero(ctx.label_matches(u)):
        v = int(v)
        if t.size[v] - 1 >= need and all(ctx.has_below(r, v) for r in reps):
            out.append(v)
    return out


def minimal_roots(ctx: DPContext) -> list[int]:
    return [int(v) for v in np.flatnonzero(ctx.table.minimal[ctx.p.root])]
