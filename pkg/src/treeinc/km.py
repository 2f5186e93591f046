"""Baseline inclusion by pairwise union folds, O(d 4^d mn).

For a fixed pattern node u every text node w gets B(w), the child subsets
of u whose forest embeds into T(w). It is the left-to-right fold
``S := {A ∪ B : A in S, B in B(c)}`` over the children c of w, plus the
singletons of children minimally included at w. The cell (u, v) holds iff
labels match and the full child set is in the fold at v. Each fold step
examines every (A, B) pair, which is the quadratic-in-2^d cost the fast
algorithm avoids.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .dp import DPContext, minimal_roots, run
from .limits import Limits
from .result import RunResult, Stopwatch
from .tree import LabeledTree


def _fold_children(ctx: DPContext, w: int, B: np.ndarray, layout, keep_prefix=False):
    F = np.zeros(layout.universe, dtype=np.bool_)
    F[0] = True
    prefix = [F] if keep_prefix else None
    for c in ctx.t.children[w]:
        F, pairs = _kernels.fold_pairs(F, B[c], layout)
        ctx.counters.set_unions += pairs
        if keep_prefix:
            prefix.append(F)
    return F, prefix


def _singletons(ctx: DPContext, u: int, w: int, family: np.ndarray, layout) -> None:
    reps = ctx.classes(u).reps
    for c, r in enumerate(reps):
        if ctx.table.minimal[r, w]:
            family[layout.strides[c]] = True


def km_families(ctx: DPContext, u: int, top: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """B(w) and S(w) for every w in T(top) (whole text by default).

    ``S[w]`` is the fold over the children of w, i.e. the subsets embeddable
    strictly below w.
    """
    t = ctx.t
    layout = ctx.classes(u).layout
    top = t.root if top is None else top
    lo, hi = top, top + int(t.size[top])
    ctx.limits.check_family(layout.universe, 2 * (hi - lo))
    B = np.zeros((len(t), layout.universe), dtype=np.bool_) if hi - lo == len(t) else {}
    S = {}
    for w in t.postorder:
        if not lo <= w < hi:
            continue
        F, _ = _fold_children(ctx, w, B, layout)
        S[w] = F
        fam = F.copy()
        _singletons(ctx, u, w, fam, layout)
        B[w] = fam
        ctx.limits.check_progress(ctx.counters)
    return B, S


def km_row(ctx: DPContext, u: int) -> np.ndarray:
    layout = ctx.classes(u).layout
    matches = ctx.label_matches(u)
    _, S = km_families(ctx, u)
    row = np.zeros(len(ctx.t), dtype=np.bool_)
    for v in np.flatnonzero(matches):
        ctx.counters.dp_cells += 1
        row[v] = S[int(v)][layout.full]
    return row


def km_cell(ctx: DPContext, u: int, v: int) -> np.ndarray:
    """S(v) for fixed u: the fold over the children of v."""
    _, S = km_families(ctx, u, top=v)
    return S[v]


class _Decomposer:
    """Recover a child assignment from the folds of one cell."""

    def __init__(self, ctx: DPContext, u: int, v: int):
        self.ctx = ctx
        self.u = u
        self.layout = ctx.classes(u).layout
        self.B, self.S = km_families(ctx, u, top=v)

    def _subset(self, b: int, target: int) -> bool:
        d = self.layout.digits
        return bool(np.all(d[b] <= d[target]))

    def decompose(self, w: int, target: int) -> list[tuple[int, int]]:
        kids = self.ctx.t.children[w]
        _, prefix = _fold_children(self.ctx, w, self.B, self.layout, keep_prefix=True)
        out = []
        for i in range(len(kids) - 1, -1, -1):
            if target == 0:
                break
            c = kids[i]
            for b in np.flatnonzero(self.B[c])[::-1]:
                b = int(b)
                if self._subset(b, target) and prefix[i][target - b]:
                    break
            else:
                raise RuntimeError("fold decomposition failed")
            out.extend(self.expand(c, b))
            target -= b
        return out

    def expand(self, w: int, b: int) -> list[tuple[int, int]]:
        if b == 0:
            return []
        layout = self.layout
        counts = layout.decode(b)
        if sum(counts) == 1:
            c = counts.index(1)
            if self.ctx.table.minimal[self.ctx.classes(self.u).reps[c], w]:
                return [(c, w)]
        return self.decompose(w, b)


def km_assign_children(ctx: DPContext, u: int, v: int) -> list[tuple[int, int]]:
    saved = ctx.counters.set_unions
    dec = _Decomposer(ctx, u, v)
    by_class = dec.decompose(v, dec.layout.full)
    ctx.counters.set_unions = saved
    pending = [list(g) for g in ctx.classes(u).members]
    return sorted((pending[c].pop(), w) for c, w in by_class)


def km_witness(ctx: DPContext, root: int) -> list[tuple[int, int]]:
    pairs = []
    stack = [(ctx.p.root, root)]
    while stack:
        u, v = stack.pop()
        pairs.append((u, v))
        if ctx.p.children[u]:
            stack.extend(km_assign_children(ctx, u, v))
    return sorted(pairs)


def build_table(p: LabeledTree, t: LabeledTree, limits: Limits | None = None) -> DPContext:
    ctx = DPContext(p, t, limits or Limits.from_env())
    run(ctx, km_row)
    return ctx


def km_decide(p: LabeledTree, t: LabeledTree, witness: bool = True,
              limits: Limits | None = None) -> RunResult:
    clock = Stopwatch()
    ctx = build_table(p, t, limits)
    roots = minimal_roots(ctx)
    pairs = km_witness(ctx, roots[0]) if roots and witness else None
    return RunResult(bool(roots), roots, "km", pairs, ctx.counters, clock.micros())
