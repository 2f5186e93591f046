from itertools import permutations, product

import pytest
from hypothesis import given

from treeinc.errors import TreeSyntaxError
from treeinc.generators import enumerate_ordered_shapes
from treeinc.tree import (LabeledTree, iso_code, left_of, parse_tree, read_tree, serialize_tree,
                          stats, write_tree)

from conftest import trees


def test_parse_single_node():
    t = parse_tree("a")
    assert len(t) == 1 and t.labels == ("a",)


def test_parse_nested():
    t = parse_tree("a(b,c(d,e))")
    assert len(t) == 5 and t.height == 2
    assert t.labels == ("a", "b", "c", "d", "e")
    assert t.children[0] == (1, 2) and t.children[2] == (3, 4)


@pytest.mark.parametrize("text", ["", "   ", "a(", "a(b,)", "a b", "a)(", "(a)", "a(b))", "a,b"])
def test_parse_rejects(text):
    with pytest.raises(TreeSyntaxError):
        parse_tree(text)


def test_syntax_error_has_offset():
    with pytest.raises(TreeSyntaxError) as err:
        parse_tree("a(b,)")
    assert "4" in str(err.value)


def test_quoted_labels_roundtrip():
    t = LabeledTree.from_nested(("root node", [("a,b", []), ('q"x', []), ("(", [])]))
    assert parse_tree(serialize_tree(t)) == t


def test_serialize_examples():
    assert serialize_tree(parse_tree("a")) == "a"
    assert serialize_tree(LabeledTree.from_nested(("a", ["b", "c"]))) == "a(b,c)"


@given(trees(max_nodes=20))
def test_roundtrip(t):
    s = serialize_tree(t)
    assert parse_tree(s) == t
    assert serialize_tree(parse_tree(s)) == s


def test_file_roundtrip(tmp_path):
    t = parse_tree("a(b(c),d)")
    write_tree(tmp_path / "t.tree", t)
    assert read_tree(tmp_path / "t.tree") == t


def test_preorder_and_size():
    t = parse_tree("a(b(c,d),e(f))")
    assert list(t.size) == [6, 3, 1, 1, 2, 1]
    assert list(t.descendants(1)) == [2, 3]
    assert t.ancestors(3) == [1, 0] or sorted(t.ancestors(3)) == [0, 1]


def test_left_of_examples():
    t = parse_tree("a(b,c)")
    assert left_of(t, 1, 2) and not left_of(t, 2, 1)
    t = parse_tree("a(b(c))")
    assert not left_of(t, 1, 2) and t.is_ancestor(1, 2)


def test_left_of_rejects_bad_ids():
    t = parse_tree("a(b,c)")
    with pytest.raises(ValueError):
        t.left_of(1, 1)
    with pytest.raises((ValueError, IndexError)):
        t.left_of(0, 7)


@given(trees(max_nodes=15))
def test_trichotomy(t):
    for a in range(len(t)):
        for b in range(len(t)):
            if a == b:
                continue
            facts = [t.left_of(a, b), t.left_of(b, a), t.is_ancestor(a, b) or t.is_ancestor(b, a)]
            assert sum(facts) == 1


@given(trees(max_nodes=15))
def test_euler_invariants(t):
    pre, post = t.euler
    for a in range(len(t)):
        assert pre[a] < post[a]
        for b in range(len(t)):
            if a != b:
                assert t.is_ancestor(a, b) == (pre[a] < pre[b] and post[b] < post[a])


def test_iso_code_examples():
    assert iso_code(parse_tree("a(b,c)"))[0] == iso_code(parse_tree("a(c,b)"))[0]
    assert iso_code(parse_tree("a(b)"))[0] != iso_code(parse_tree("a(c)"))[0]


def _brute_iso(s: LabeledTree, x: int, t: LabeledTree, y: int) -> bool:
    if s.labels[x] != t.labels[y] or len(s.children[x]) != len(t.children[y]):
        return False
    return any(all(_brute_iso(s, a, t, b) for a, b in zip(s.children[x], perm))
               for perm in permutations(t.children[y]))


def test_iso_code_matches_bruteforce():
    pool = []
    for n in range(1, 6):
        for shape in enumerate_ordered_shapes(n):
            for labs in product("ab", repeat=n):
                pool.append(LabeledTree(tuple(labs), shape.parent, shape.children))
    codes = [iso_code(t)[0] for t in pool]
    for i, s in enumerate(pool):
        for j in range(i, len(pool)):
            if len(s) == len(pool[j]):
                assert (codes[i] == codes[j]) == _brute_iso(s, 0, pool[j], 0)


def test_stats_single():
    s = stats(parse_tree("a"))
    assert (s.size, s.degree, s.height, s.OCC) == (1, 0, 0, 1)


@given(trees(max_nodes=20))
def test_stats_recount(t):
    s = stats(t)
    assert s.size == len(t)
    assert s.degree == max(len(c) for c in t.children)
    assert s.height == max(len(t.ancestors(v)) for v in range(len(t)))
    assert sum(s.occ.values()) == len(t)
    assert s.OCC == max(s.occ[t.labels[v]] for v in range(len(t)) if not t.children[v])


def test_from_parents_renumbers():
    t = LabeledTree.from_parents(["c", "r", "b"], [1, -1, 1])
    assert serialize_tree(t) == "r(c,b)"


@pytest.mark.parametrize("parents", [[-1, -1], [1, 0], [-1, 5]])
def test_from_parents_rejects(parents):
    with pytest.raises(ValueError):
        LabeledTree.from_parents(["a"] * len(parents), parents)
