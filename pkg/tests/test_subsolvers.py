import random

from hypothesis import given, strategies as st
import pytest

from treeinc.matching import bipartite_match, saturates
from treeinc.twosat import TwoSatInstance, two_sat_solve

from brute import max_matching_size, sat_by_truth_table


def test_two_sat_examples():
    inst = TwoSatInstance(1)
    inst.add(1, 1)
    inst.add(-1, -1)
    assert two_sat_solve(inst) is None
    inst = TwoSatInstance(2)
    inst.add(1, 2)
    got = two_sat_solve(inst)
    assert got is not None and (got[0] or got[1])


def test_two_sat_unit_and_empty():
    assert two_sat_solve(TwoSatInstance(0)) == []
    inst = TwoSatInstance(2)
    inst.unit(-2)
    inst.add(1, 2)
    assert two_sat_solve(inst) == [True, False]


@pytest.mark.parametrize("lit", [0, 3, -3])
def test_two_sat_rejects_literal(lit):
    with pytest.raises(ValueError):
        TwoSatInstance(2).add(1, lit)


clauses = st.lists(st.tuples(st.integers(1, 5), st.booleans(), st.integers(1, 5), st.booleans()),
                   max_size=14)


@given(clauses)
def test_two_sat_vs_truth_table(cl):
    pairs = [(a if sa else -a, b if sb else -b) for a, sa, b, sb in cl]
    inst = TwoSatInstance(5)
    for a, b in pairs:
        inst.add(a, b)
    got = two_sat_solve(inst)
    assert (got is not None) == sat_by_truth_table(5, pairs)
    if got is not None:
        val = lambda x: got[abs(x) - 1] == (x > 0)  # noqa: E731
        assert all(val(a) or val(b) for a, b in pairs)


def test_two_sat_long_chain():
    # implication chain deep enough to break a recursive SCC search
    n = 20_000
    inst = TwoSatInstance(n)
    for i in range(1, n):
        inst.add(-i, i + 1)
    inst.unit(1)
    assert all(two_sat_solve(inst))


def test_matching_examples():
    m, _ = bipartite_match({0: ["a", "b"], 1: ["a", "b"]})
    assert len(m) == 2
    m, _ = bipartite_match({0: ["x"], 1: ["x"], 2: ["x"]})
    assert len(m) == 1
    assert saturates({0: [1], 1: [1, 2]})[0]
    assert not saturates({0: [1], 1: [1]})[0]
    assert bipartite_match({}) == ({}, 0)


@given(st.lists(st.integers(0, 63), max_size=6))
def test_matching_vs_bruteforce(rows):
    edges = {i: [j for j in range(6) if r >> j & 1] for i, r in enumerate(rows)}
    m, _ = bipartite_match(edges)
    assert len(set(m.values())) == len(m)
    assert all(r in edges[l] for l, r in m.items())
    assert len(m) == max_matching_size(tuple(rows))


def test_matching_large_path():
    rng = random.Random(3)
    n = 3000
    edges = {i: [i, (i + 1) % n] + [rng.randrange(n)] for i in range(n)}
    m, _ = bipartite_match(edges)
    assert len(m) == n
