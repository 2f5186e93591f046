"""Left-of precedence DAGs over the strict descendants of a text node.

``dense_dag`` has an arc for every left-of pair. ``virtual_dag`` inserts
an unlabeled leaf between each pair of consecutive siblings and keeps only
arcs between real nodes and these virtual leaves, which leaves O(n) arcs
with the same reachability among real nodes.

Vertices are numbered in a topological order; ``text_id[x]`` is the text
node behind vertex ``x`` or -1 for a virtual leaf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tree import LabeledTree


@dataclass(frozen=True)
class LeftDag:
    text_id: np.ndarray
    is_virtual: np.ndarray
    pred_ptr: np.ndarray
    pred_idx: np.ndarray
    # (left sibling, right sibling) text ids for each virtual vertex, else None
    between: tuple

    def __len__(self) -> int:
        return len(self.text_id)

    def preds(self, x: int) -> np.ndarray:
        return self.pred_idx[self.pred_ptr[x] : self.pred_ptr[x + 1]]

    @property
    def n_edges(self) -> int:
        return len(self.pred_idx)

    def edges(self) -> list[tuple[int, int]]:
        return [(int(p), x) for x in range(len(self)) for p in self.preds(x)]

    def vertex_of(self, text_node: int) -> int:
        hits = np.flatnonzero(self.text_id == text_node)
        if not hits.size:
            raise KeyError(text_node)
        return int(hits[0])


def _csr(preds: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(preds) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(p) for p in preds])
    idx = np.fromiter((q for p in preds for q in p), dtype=np.int64, count=int(ptr[-1]))
    return ptr, idx


def dense_dag(t: LabeledTree, v: int) -> LeftDag:
    nodes = np.arange(v + 1, v + int(t.size[v]), dtype=np.int64)
    pre, post = t.euler
    preds = []
    for x, node in enumerate(nodes):
        # preorder is topological: everything left of node comes before it
        left = np.flatnonzero(post[nodes[:x]] < pre[node])
        preds.append(left.tolist())
    ptr, idx = _csr(preds)
    return LeftDag(nodes, np.zeros(len(nodes), dtype=np.bool_), ptr, idx, (None,) * len(nodes))


def virtual_dag(t: LabeledTree, v: int) -> LeftDag:
    """Sparse DAG on the virtual-leaf extension of ``T(v)``, minus ``v``.

    ``v`` itself has no arcs in the extended tree and is left out.
    """
    text_id: list[int] = []
    between: list = []
    local: dict[int, int] = {}
    stack: list = [("kids", v)]
    while stack:
        kind, item = stack.pop()
        if kind == "node":
            local[item] = len(text_id)
            text_id.append(item)
            between.append(None)
            stack.append(("kids", item))
        elif kind == "virt":
            text_id.append(-1)
            between.append(item)
        else:
            kids = t.children[item]
            for i in range(len(kids) - 1, -1, -1):
                stack.append(("node", kids[i]))
                if i:
                    stack.append(("virt", (kids[i - 1], kids[i])))

    def rightmost(x):
        path = [x]
        while t.children[x]:
            x = t.children[x][-1]
            path.append(x)
        return path

    preds: list[list[int]] = [[] for _ in text_id]
    for w, pair in enumerate(between):
        if pair is None:
            continue
        left, right = pair
        preds[w] = sorted(local[x] for x in rightmost(left))
        x = right
        while True:
            preds[local[x]].append(w)
            if not t.children[x]:
                break
            x = t.children[x][0]
    ptr, idx = _csr(preds)
    is_virtual = np.array([tid < 0 for tid in text_id], dtype=np.bool_)
    return LeftDag(np.array(text_id, dtype=np.int64), is_virtual, ptr, idx, tuple(between))


def build_virtual_dag(t: LabeledTree, v: int) -> LeftDag:
    if not t.children[v]:
        raise ValueError("node has no children")
    return virtual_dag(t, v)


def closure_over_real(dag: LeftDag) -> set[tuple[int, int]]:
    """Reachability restricted to real vertices, as text-id pairs."""
    n = len(dag)
    reach = [set() for _ in range(n)]
    for x in range(n):
        for p in dag.preds(x):
            reach[x] |= reach[p]
            reach[x].add(int(p))
    out = set()
    for x in range(n):
        if dag.is_virtual[x]:
            continue
        for p in reach[x]:
            if not dag.is_virtual[p]:
                out.add((int(dag.text_id[p]), int(dag.text_id[x])))
    return out
