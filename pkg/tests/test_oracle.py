import pytest

from treeinc.errors import PreconditionError, SizeGuardError
from treeinc.oracle import (X3CInstance, included_bruteforce, minimal_roots_bruteforce,
                            pinned_bruteforce, x3c_bruteforce, x3c_cover)
from treeinc.result import mapping_violations
from treeinc.tree import parse_tree


def test_identity():
    assert included_bruteforce(parse_tree("a"), parse_tree("a")) == [(0, 0)]


def test_ancestry_reversed():
    assert included_bruteforce(parse_tree("a(b)"), parse_tree("b(a)")) is None


def test_minimal_roots_examples():
    assert minimal_roots_bruteforce(parse_tree("a"), parse_tree("a(a)")) == [1] or \
        sorted(minimal_roots_bruteforce(parse_tree("a"), parse_tree("a(a)"))) == [1]
    assert not minimal_roots_bruteforce(parse_tree("a"), parse_tree("b"))


def test_witness_valid():
    p, t = parse_tree("a(b,c(d))"), parse_tree("a(x(c(e,d)),b)")
    pairs = included_bruteforce(p, t)
    assert pairs is not None and mapping_violations(p, t, pairs) == []


def test_pinned():
    p, t = parse_tree("a(b)"), parse_tree("a(a(b),c)")
    assert pinned_bruteforce(p, t, 1) is not None
    assert pinned_bruteforce(p, t, 2) is None


def test_size_guard():
    big = parse_tree("a(" + ",".join("b" for _ in range(30)) + ")")
    with pytest.raises(SizeGuardError):
        included_bruteforce(parse_tree("a(b)"), big)


def test_x3c_examples():
    assert x3c_bruteforce(X3CInstance(("a", "b", "c"), (("a", "b", "c"),)))
    inst = X3CInstance(tuple("abcdef"), (("a", "b", "c"), ("a", "b", "d"), ("c", "d", "e"),
                                         ("b", "e", "f"), ("d", "e", "f")))
    assert x3c_cover(inst) == [0, 4]
    assert not x3c_bruteforce(X3CInstance(tuple("abcdef"), (("a", "b", "c"), ("a", "d", "e"),
                                                           ("b", "e", "f"))))


@pytest.mark.parametrize("universe,sets", [
    (("a", "b"), (("a", "b", "a"),)),
    (("a", "b", "c"), (("a", "b"),)),
    (("a", "b", "c"), (("a", "b", "z"),)),
    (tuple("abcdef"), (("a", "b", "c"),)),
    (("a", "b", "c"), (("a", "b", "c"),) * 4),
])
def test_x3c_invalid(universe, sets):
    with pytest.raises(PreconditionError):
        X3CInstance(universe, sets)


def test_mapping_violations_detects():
    p, t = parse_tree("a(b,c)"), parse_tree("a(b(c))")
    assert mapping_violations(p, t, [(0, 0), (1, 1), (2, 2)])  # ancestry, not siblings
    assert mapping_violations(p, t, [(0, 0), (1, 1)])
    assert mapping_violations(p, parse_tree("a(b,b,c)"), [(0, 0), (1, 1), (2, 1)])
