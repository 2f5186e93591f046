"""Hot loops over subset families, with numba and pure-numpy backends.

The backend is chosen at import from ``TREEINC_BACKEND`` (``numba`` by
default, ``numpy`` to disable JIT) and can be switched at runtime with
:func:`set_backend`. Both backends return identical families and identical
operation counts.
"""

from __future__ import annotations

import os

import numpy as np

from .family import ClassLayout

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")


def _initial_backend() -> str:
    name = os.environ.get("TREEINC_BACKEND", "numba").strip().lower()
    if name not in BACKENDS:
        raise ValueError(f"TREEINC_BACKEND must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


_backend = _initial_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


# ----------------------------------------------------------------------
# left-of DAG traversal (one cell of the fast inclusion DP)
#
# Vertices are in topological order. For vertex x:
#   S0 = union of the families of its predecessors, or {empty} if none
#   S  = S0 + { s plus one child of class c : s in S0, c in M(x) }
# Counted operations: every member read from a predecessor family and
# every extension candidate generated.
# src[x, s]: predecessor that supplied s, -1 for the empty base, -2 when s
# was generated at x itself by adding class add[x, s].


def _dag_numpy(pred_ptr, pred_idx, m_ptr, m_idx, is_virtual, layout, full, early_exit, track, fam, src, add):
    n_vert = len(pred_ptr) - 1
    digits = layout.digits if m_idx.size else None
    ops = 0
    hit = -1
    for x in range(n_vert):
        row = fam[x]
        row[:] = False
        lo, hi = pred_ptr[x], pred_ptr[x + 1]
        if lo == hi:
            row[0] = True
            if track:
                src[x, 0] = -1
        else:
            for p in pred_idx[lo:hi]:
                prow = fam[p]
                ops += int(np.count_nonzero(prow))
                if track:
                    fresh = prow & ~row
                    src[x, fresh] = p
                row |= prow
        mlo, mhi = m_ptr[x], m_ptr[x + 1]
        if mlo < mhi:
            base = row.copy()
            for c in m_idx[mlo:mhi]:
                st = layout.strides[c]
                cand = np.flatnonzero(base & (digits[:, c] < layout.mults[c]))
                ops += cand.size
                targets = cand + st
                if track:
                    fresh = targets[~row[targets]]
                    src[x, fresh] = -2
                    add[x, fresh] = c
                row[targets] = True
        if not is_virtual[x] and row[full]:
            if hit < 0:
                hit = x
            if early_exit:
                break
    return hit, ops


def _fold_numpy(S, B, layout):
    out = np.zeros_like(S)
    a_idx = np.flatnonzero(S)
    b_idx = np.flatnonzero(B)
    pairs = a_idx.size * b_idx.size
    if pairs == 0:
        return out, 0
    chunk = max(1, (1 << 22) // b_idx.size)
    if layout.bitmask:
        for i in range(0, a_idx.size, chunk):
            out[(a_idx[i : i + chunk, None] | b_idx[None, :]).ravel()] = True
    else:
        digits = layout.digits
        db = digits[b_idx]
        for i in range(0, a_idx.size, chunk):
            da = digits[a_idx[i : i + chunk]]
            summed = np.minimum(da[:, None, :] + db[None, :, :], layout.mults)
            out[(summed @ layout.strides).ravel()] = True
    return out, pairs


if HAVE_NUMBA:

    @njit(cache=True)
    def _dag_nb(pred_ptr, pred_idx, m_ptr, m_idx, is_virtual, strides, mults, universe, full, early_exit, track, fam, src, add):
        n_vert = pred_ptr.shape[0] - 1
        base = np.zeros(universe, dtype=np.bool_)
        ops = 0
        hit = -1
        for x in range(n_vert):
            for s in range(universe):
                fam[x, s] = False
            lo = pred_ptr[x]
            hi = pred_ptr[x + 1]
            if lo == hi:
                fam[x, 0] = True
                if track:
                    src[x, 0] = -1
            else:
                for q in range(lo, hi):
                    p = pred_idx[q]
                    for s in range(universe):
                        if fam[p, s]:
                            ops += 1
                            if not fam[x, s]:
                                fam[x, s] = True
                                if track:
                                    src[x, s] = p
            mlo = m_ptr[x]
            mhi = m_ptr[x + 1]
            if mlo < mhi:
                for s in range(universe):
                    base[s] = fam[x, s]
                for q in range(mlo, mhi):
                    c = m_idx[q]
                    st = strides[c]
                    mc = mults[c]
                    for s in range(universe):
                        if base[s] and (s // st) % (mc + 1) < mc:
                            ops += 1
                            t = s + st
                            if not fam[x, t]:
                                fam[x, t] = True
                                if track:
                                    src[x, t] = -2
                                    add[x, t] = c
            if not is_virtual[x] and fam[x, full]:
                if hit < 0:
                    hit = x
                if early_exit:
                    break
        return hit, ops

    @njit(cache=True)
    def _fold_bits_nb(a_idx, b_idx, out):
        for a in a_idx:
            for b in b_idx:
                out[a | b] = True

    @njit(cache=True)
    def _fold_multi_nb(a_idx, b_idx, out, strides, mults):
        k = strides.shape[0]
        for a in a_idx:
            for b in b_idx:
                code = 0
                for c in range(k):
                    st = strides[c]
                    m = mults[c]
                    s = (a // st) % (m + 1) + (b // st) % (m + 1)
                    if s > m:
                        s = m
                    code += s * st
                out[code] = True


def dag_families(pred_ptr, pred_idx, m_ptr, m_idx, is_virtual, layout: ClassLayout,
                 early_exit: bool = True, track: bool = False):
    """Run one left-of DAG pass.

    Returns ``(hit, ops, fam, src, add)`` where ``hit`` is the first
    non-virtual vertex whose family contains the full child set (-1 if
    none) and ``fam[x]`` is the family of vertex ``x``.
    """
    n_vert = len(pred_ptr) - 1
    universe = layout.universe
    fam = np.zeros((n_vert, universe), dtype=np.bool_)
    shape = (n_vert, universe) if track else (1, 1)
    src = np.full(shape, -3, dtype=np.int64)
    add = np.full(shape, -1, dtype=np.int64)
    if _backend == "numba":
        hit, ops = _dag_nb(pred_ptr, pred_idx, m_ptr, m_idx, is_virtual, layout.strides,
                           layout.mults, universe, layout.full, early_exit, track, fam, src, add)
    else:
        hit, ops = _dag_numpy(pred_ptr, pred_idx, m_ptr, m_idx, is_virtual, layout,
                              layout.full, early_exit, track, fam, src, add)
    return int(hit), int(ops), fam, src, add


def fold_pairs(S: np.ndarray, B: np.ndarray, layout: ClassLayout):
    """``{A ∪ B : A in S, B in B}`` with multiset counts capped by multiplicity.

    Returns the new family and the number of (A, B) pairs examined.
    """
    if _backend == "numpy":
        return _fold_numpy(S, B, layout)
    out = np.zeros_like(S)
    a_idx = np.flatnonzero(S)
    b_idx = np.flatnonzero(B)
    if layout.bitmask:
        _fold_bits_nb(a_idx, b_idx, out)
    else:
        _fold_multi_nb(a_idx, b_idx, out, layout.strides, layout.mults)
    return out, int(a_idx.size * b_idx.size)
