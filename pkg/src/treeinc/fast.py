"""O*(2^d) unordered tree inclusion.

For a cell (u, v) every strict descendant x of v gets the family of child
subsets that embed into the part of T(v) left of x, optionally plus one
child minimally included at x itself. Families flow along a left-of DAG;
``alginc1`` uses every left-of arc, ``alginc2`` the sparse virtual-leaf DAG.
The cell holds iff the labels match and the full child set reaches some
real vertex.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .dag import LeftDag, dense_dag, virtual_dag
from .dp import DPContext, candidate_cells, minimal_roots, run
from .family import ClassLayout
from .limits import Limits
from .result import RunResult, Stopwatch
from .tree import LabeledTree

VARIANTS = ("alginc1", "alginc2")


class FastSolver:
    def __init__(self, variant: str = "alginc2"):
        if variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        self.variant = variant
        self._dags: dict[int, LeftDag] = {}

    def dag(self, t: LabeledTree, v: int) -> LeftDag:
        # independent of u, so built once per text node
        dag = self._dags.get(v)
        if dag is None:
            dag = dense_dag(t, v) if self.variant == "alginc1" else virtual_dag(t, v)
            self._dags[v] = dag
        return dag

    def match_lists(self, ctx: DPContext, u: int, dag: LeftDag) -> tuple[np.ndarray, np.ndarray]:
        """CSR of M(x): child classes minimally included at each vertex."""
        reps = ctx.classes(u).reps
        cols = np.where(dag.is_virtual, 0, dag.text_id)
        mm = ctx.table.minimal[np.ix_(reps, cols)] & ~dag.is_virtual[None, :]
        xs, cs = np.nonzero(mm.T)
        ptr = np.zeros(len(dag) + 1, dtype=np.int64)
        ptr[1:] = np.cumsum(np.bincount(xs, minlength=len(dag)))
        return ptr, cs.astype(np.int64)

    def run_cell(self, ctx: DPContext, u: int, v: int, early_exit=True, track=False):
        dag = self.dag(ctx.t, v)
        layout = ctx.classes(u).layout
        ctx.limits.check_family(layout.universe, len(dag))
        m_ptr, m_idx = self.match_lists(ctx, u, dag)
        hit, ops, fam, src, add = _kernels.dag_families(
            dag.pred_ptr, dag.pred_idx, m_ptr, m_idx, dag.is_virtual, layout,
            early_exit=early_exit, track=track,
        )
        ctx.counters.set_unions += ops
        return dag, layout, hit, fam, src, add

    def cell(self, ctx: DPContext, u: int, v: int) -> bool:
        if ctx.p_lab[u] != ctx.t_lab[v]:
            return False
        ctx.counters.dp_cells += 1
        return self.run_cell(ctx, u, v)[2] >= 0

    def __call__(self, ctx: DPContext, u: int) -> np.ndarray:
        row = np.zeros(len(ctx.t), dtype=np.bool_)
        for v in candidate_cells(ctx, u):
            row[v] = self.cell(ctx, u, v)
            ctx.limits.check_progress(ctx.counters)
        return row

    # ------------------------------------------------------------------

    def assign_children(self, ctx: DPContext, u: int, v: int) -> list[tuple[int, int]]:
        """Child-to-text-node assignment for a true cell, by back-pointers."""
        saved = ctx.counters.set_unions
        dag, layout, hit, _, src, add = self.run_cell(ctx, u, v, early_exit=True, track=True)
        ctx.counters.set_unions = saved
        if hit < 0:
            raise RuntimeError(f"cell ({u},{v}) does not hold")
        classes = ctx.classes(u)
        pending = [list(g) for g in classes.members]
        out = []
        x, s = hit, layout.full
        while s:
            kind = src[x, s]
            if kind == -2:
                c = int(add[x, s])
                out.append((pending[c].pop(), int(dag.text_id[x])))
                s -= int(layout.strides[c])
            elif kind >= 0:
                x = int(kind)
            else:
                raise RuntimeError("broken back-pointer chain")
        return sorted(out)

    def witness(self, ctx: DPContext, root: int) -> list[tuple[int, int]]:
        pairs = []
        stack = [(ctx.p.root, root)]
        while stack:
            u, v = stack.pop()
            pairs.append((u, v))
            if ctx.p.children[u]:
                stack.extend(self.assign_children(ctx, u, v))
        return sorted(pairs)


def build_table(p: LabeledTree, t: LabeledTree, variant: str = "alginc2",
                limits: Limits | None = None) -> tuple[DPContext, FastSolver]:
    ctx = DPContext(p, t, limits or Limits.from_env())
    solver = FastSolver(variant)
    run(ctx, solver)
    return ctx, solver


def decide(p: LabeledTree, t: LabeledTree, variant: str = "alginc2", witness: bool = True,
           limits: Limits | None = None) -> RunResult:
    clock = Stopwatch()
    ctx, solver = build_table(p, t, variant, limits)
    roots = minimal_roots(ctx)
    pairs = solver.witness(ctx, roots[0]) if roots and witness else None
    return RunResult(bool(roots), roots, variant, pairs, ctx.counters, clock.micros())


def cell_alginc1(ctx: DPContext, u: int, v: int) -> bool:
    return FastSolver("alginc1").cell(ctx, u, v)


def cell_alginc2(ctx: DPContext, u: int, v: int) -> bool:
    return FastSolver("alginc2").cell(ctx, u, v)


def cell_families(ctx: DPContext, u: int, v: int, variant: str = "alginc2"):
    """All families of cell (u, v), without early exit.

    Returns ``(layout, per_node, union)``: ``per_node`` maps each real
    strict descendant of v to its family and ``union`` is their union.
    Child rows of ``u`` must already be in the table.
    """
    solver = FastSolver(variant)
    dag, layout, _, fam, _, _ = solver.run_cell(ctx, u, v, early_exit=False)
    per_node = {int(dag.text_id[x]): fam[x].copy() for x in range(len(dag)) if not dag.is_virtual[x]}
    union = np.zeros(layout.universe, dtype=np.bool_)
    for f in per_node.values():
        union |= f
    return layout, per_node, union


def layout_for(ctx: DPContext, u: int) -> ClassLayout:
    return ctx.classes(u).layout
