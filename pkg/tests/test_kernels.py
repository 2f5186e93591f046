import numpy as np
import pytest
from hypothesis import given, strategies as st

from treeinc import _kernels
from treeinc.api import decide
from treeinc.dag import virtual_dag
from treeinc.family import ClassLayout, format_family
from treeinc.generators import star

from conftest import trees


def test_layout_bitmask():
    lay = ClassLayout.from_mults([1, 1, 1])
    assert lay.bitmask and lay.universe == 8 and lay.full == 7
    assert lay.encode([1, 0, 1]) == 5 and lay.decode(5) == (1, 0, 1)


def test_layout_multiset():
    lay = ClassLayout.from_mults([2, 1])
    assert not lay.bitmask and lay.universe == 6 and lay.full == 5
    for code in range(lay.universe):
        assert lay.encode(lay.decode(code)) == code
    assert lay.digits[lay.full].tolist() == [2, 1]


def test_format_family_canonical():
    lay = ClassLayout.from_mults([2, 1])
    fam = np.zeros(lay.universe, dtype=bool)
    for counts in [(0, 0), (0, 1), (2, 0), (1, 0)]:
        fam[lay.encode(counts)] = True
    assert format_family(lay, fam, ["x", "y"]) == "{∅, {x}, {y}, {x,x}}"


def _naive_fold(S, B, lay):
    out = np.zeros_like(S)
    for a in np.flatnonzero(S):
        for b in np.flatnonzero(B):
            counts = np.minimum(np.add(lay.decode(a), lay.decode(b)), lay.mults)
            out[lay.encode(counts)] = True
    return out


@given(st.lists(st.integers(1, 3), min_size=1, max_size=4), st.data())
def test_fold_pairs_matches_naive(mults, data):
    lay = ClassLayout.from_mults(mults)
    S = np.array(data.draw(st.lists(st.booleans(), min_size=lay.universe, max_size=lay.universe)))
    B = np.array(data.draw(st.lists(st.booleans(), min_size=lay.universe, max_size=lay.universe)))
    want = _naive_fold(S, B, lay)
    old = _kernels.get_backend()
    try:
        for name in _kernels.BACKENDS:
            _kernels.set_backend(name)
            out, pairs = _kernels.fold_pairs(S, B, lay)
            assert np.array_equal(out, want)
            assert pairs == S.sum() * B.sum()
    finally:
        _kernels.set_backend(old)


@given(trees(min_nodes=2, max_nodes=12), st.lists(st.integers(1, 2), min_size=1, max_size=3), st.data())
def test_dag_families_backends_agree(t, mults, data):
    lay = ClassLayout.from_mults(mults)
    dag = virtual_dag(t, 0)
    n = len(dag)
    lists = [sorted(data.draw(st.sets(st.integers(0, lay.k - 1), max_size=lay.k))) for _ in range(n)]
    m_ptr = np.zeros(n + 1, dtype=np.int64)
    m_ptr[1:] = np.cumsum([len(x) for x in lists])
    m_idx = np.array([c for x in lists for c in x], dtype=np.int64)
    outs = {}
    old = _kernels.get_backend()
    try:
        for name in _kernels.BACKENDS:
            _kernels.set_backend(name)
            outs[name] = _kernels.dag_families(dag.pred_ptr, dag.pred_idx, m_ptr, m_idx,
                                               dag.is_virtual, lay, early_exit=False, track=True)
    finally:
        _kernels.set_backend(old)
    a, b = outs["numba"], outs["numpy"]
    assert a[0] == b[0] and a[1] == b[1]
    assert np.array_equal(a[2], b[2])


def test_set_backend_rejects():
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")



def test_counters_equal_across_backends():
    p, t = star(9)
    got = {}
    old = _kernels.get_backend()
    try:
        for name in _kernels.BACKENDS:
            _kernels.set_backend(name)
            got[name] = [decide(p, t, a, witness=False).counters.set_unions for a in ("km", "alginc1", "alginc2")]
    finally:
        _kernels.set_backend(old)
    assert got["numba"] == got["numpy"]
