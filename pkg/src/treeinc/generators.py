"""Instance factories.

* ``gen_random``: seeded random pattern/text pairs with degree, alphabet
  and occurrence caps. The text is usually a planted copy of the pattern,
  perturbed and grown by node insertions, with optional decoy copies of
  pattern subtrees to create conflicting candidates.
* ``gen_x3c_random`` / ``gen_x3c_reduction``: exact-cover instances and the
  reduction to height-2 inclusion instances with one internal label.
* Fixed families: the ``family_example`` example and the ``star`` family used for
  counter growth measurements.
* ``enumerate_trees``: every unordered labeled tree of a given size, one
  representative per isomorphism class.
"""

from __future__ import annotations

import random
import string
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

from .errors import InfeasibleSpec
from .oracle import X3CInstance
from .tree import LabeledTree, has_unique_leaves, occ_pattern_text, serialize_tree, stats, parse_tree

FILLER = "~"  # internal-only label, exempt from occurrence caps
ALPHA = "#"


def alphabet(labels: int | Sequence[str]) -> list[str]:
    if isinstance(labels, int):
        if labels < 1:
            raise InfeasibleSpec("alphabet needs at least one label")
        base = list(string.ascii_lowercase)
        return base[:labels] if labels <= 26 else [f"l{i}" for i in range(labels)]
    out = [str(x) for x in labels]
    if not out or len(set(out)) != len(out) or FILLER in out:
        raise InfeasibleSpec("explicit label list must be non-empty, distinct and avoid '~'")
    return out


@dataclass(frozen=True)
class GenSpec:
    seed: int = 0
    pattern_nodes: int = 5
    text_nodes: int = 12
    max_degree: int = 3
    labels: int | tuple[str, ...] = 3
    occ_cap: int | None = None
    unique_pattern_leaves: bool = False
    planted: bool = True  # text grows around a copy of P, perturbed now and then
    exact_occ: bool = False  # push OCC(P,T) up to occ_cap exactly

    def validate(self) -> None:
        if self.pattern_nodes < 1 or self.text_nodes < 1:
            raise InfeasibleSpec("trees need at least one node")
        if self.max_degree < 1 and max(self.pattern_nodes, self.text_nodes) > 1:
            raise InfeasibleSpec("max_degree 0 only allows single-node trees")
        if self.occ_cap is not None and self.occ_cap < 1:
            raise InfeasibleSpec("occ_cap must be positive")
        if self.exact_occ and self.occ_cap is None:
            raise InfeasibleSpec("exact_occ needs occ_cap")


class _Builder:
    """Mutable tree with stable node handles; child lists keep order."""

    def __init__(self):
        self.labels: list[str] = []
        self.kids: list[list[int]] = []
        self.parent: list[int] = []
        self.alive: list[bool] = []

    def add(self, label: str, parent: int = -1, index: int | None = None) -> int:
        v = len(self.labels)
        self.labels.append(label)
        self.kids.append([])
        self.parent.append(parent)
        self.alive.append(True)
        if parent >= 0:
            if index is None:
                self.kids[parent].append(v)
            else:
                self.kids[parent].insert(index, v)
        return v

    def nodes(self) -> list[int]:
        return [v for v in range(len(self.labels)) if self.alive[v]]

    def __len__(self) -> int:
        return sum(self.alive)

    def degree(self, v: int) -> int:
        return len(self.kids[v])

    def copy_subtree(self, t: LabeledTree, src: int, parent: int, index: int | None = None) -> int:
        top = self.add(t.labels[src], parent, index)
        stack = [(src, top)]
        while stack:
            a, b = stack.pop()
            for c in t.children[a]:
                stack.append((c, self.add(t.labels[c], b)))
        return top

    def adopt(self, w: int, start: int, stop: int, label: str) -> int:
        """New child of ``w`` that takes over ``w``'s children [start, stop)."""
        taken = self.kids[w][start:stop]
        v = self.add(label, w, start)
        del self.kids[w][start + 1 : start + 1 + len(taken)]
        self.kids[v] = taken
        for c in taken:
            self.parent[c] = v
        return v

    def contract(self, v: int) -> None:
        """Remove non-root ``v``; its children take its place."""
        p = self.parent[v]
        i = self.kids[p].index(v)
        self.kids[p][i : i + 1] = self.kids[v]
        for c in self.kids[v]:
            self.parent[c] = p
        self.kids[v] = []
        self.alive[v] = False

    def tree(self) -> LabeledTree:
        def nest(root):
            out = (self.labels[root], [])
            stack = [(root, out)]
            while stack:
                v, holder = stack.pop()
                for c in self.kids[v]:
                    sub = (self.labels[c], [])
                    holder[1].append(sub)
                    stack.append((c, sub))
            return out

        return LabeledTree.from_nested(nest(0))


class _Labels:
    """Label-pool accounting: no capped label may exceed ``cap`` text nodes."""

    def __init__(self, rng: random.Random, pool: list[str], cap: int | None):
        self.rng = rng
        self.pool = pool
        self.cap = cap
        self.count: Counter = Counter()

    def room(self, label: str, extra: int = 1) -> bool:
        return self.cap is None or label == FILLER or self.count[label] + extra <= self.cap

    def take(self, label: str) -> str:
        self.count[label] += 1
        return label

    def pick(self, internal: bool) -> str | None:
        free = [x for x in self.pool if self.room(x)]
        if free:
            return self.take(self.rng.choice(free))
        return FILLER if internal else None


def _random_shape(rng: random.Random, n: int, max_degree: int) -> list[int]:
    """Parents of a random tree grown by leaf attachment with degree rejection."""
    parents = [-1]
    deg = [0]
    for i in range(1, n):
        open_nodes = [v for v in range(i) if deg[v] < max_degree]
        p = rng.choice(open_nodes)
        parents.append(p)
        deg[p] += 1
        deg.append(0)
    return parents


def _random_pattern(spec: GenSpec, rng: random.Random, pool: list[str]) -> LabeledTree:
    parents = _random_shape(rng, spec.pattern_nodes, spec.max_degree)
    n = len(parents)
    has_kid = [False] * n
    for p in parents[1:]:
        has_kid[p] = True
    leaves = [v for v in range(n) if not has_kid[v]]
    labels = _Labels(rng, pool, spec.occ_cap)
    out = [""] * n
    if spec.unique_pattern_leaves:
        if len(leaves) > len(pool):
            raise InfeasibleSpec(f"{len(leaves)} distinct leaf labels needed, alphabet has {len(pool)}")
        for v, lab in zip(leaves, rng.sample(pool, len(leaves))):
            out[v] = labels.take(lab)
    else:
        for v in leaves:
            lab = labels.pick(internal=False)
            if lab is None:
                raise InfeasibleSpec("occ_cap too small for the pattern's leaves")
            out[v] = lab
    for v in range(n):
        if has_kid[v]:
            out[v] = labels.pick(internal=True)
    return LabeledTree.from_parents(out, parents)


def _grow_text(spec: GenSpec, rng: random.Random, pool: list[str], p: LabeledTree) -> LabeledTree:
    b = _Builder()
    labels = _Labels(rng, pool, spec.occ_cap)
    d = spec.max_degree
    if spec.planted:
        b.copy_subtree(p, 0, -1)
        for x in p.labels:
            labels.take(x)
        _perturb(b, rng, labels, d, pool)
    else:
        b.add(labels.pick(internal=False) or labels.take(pool[0]))

    decoys = spec.unique_pattern_leaves and spec.occ_cap is not None
    attempts = 0
    while len(b) < spec.text_nodes and attempts < 50 * spec.text_nodes:
        attempts += 1
        r = rng.random()
        if decoys and r < 0.25:
            _add_decoy(b, rng, labels, p, d, spec.text_nodes - len(b))
        elif r < 0.55:
            # inner node adopting a run of siblings
            cands = [v for v in b.nodes() if b.degree(v) > 0]
            w = rng.choice(cands) if cands else None
            if w is None:
                continue
            k = b.degree(w)
            start = rng.randrange(k)
            stop = rng.randint(start + 1, k)
            b.adopt(w, start, stop, labels.pick(internal=True))
        else:
            open_nodes = [v for v in b.nodes() if b.degree(v) < d]
            lab = labels.pick(internal=False) if open_nodes else None
            if lab is None:
                continue
            w = rng.choice(open_nodes)
            b.add(lab, w, rng.randint(0, b.degree(w)))

    if spec.exact_occ:
        _raise_occ(b, rng, labels, p, d, spec.occ_cap)
    return b.tree()


def _perturb(b: _Builder, rng: random.Random, labels: _Labels, d: int, pool: list[str]) -> None:
    """Sometimes break the planted copy so that negative instances appear."""
    r = rng.random()
    nodes = b.nodes()[1:]
    if r < 0.2 and nodes:
        v = rng.choice(nodes)
        par = b.parent[v]
        lone_filler = b.degree(par) == 1 and b.labels[par] == FILLER and b.degree(v) == 0
        if b.degree(par) - 1 + b.degree(v) <= d and not lone_filler:
            labels.count[b.labels[v]] -= 1
            b.contract(v)
    elif r < 0.35:
        v = rng.choice(b.nodes())
        if b.labels[v] != FILLER:
            free = [x for x in pool if x != b.labels[v] and labels.room(x)]
            if free:
                labels.count[b.labels[v]] -= 1
                b.labels[v] = labels.take(rng.choice(free))


def _add_decoy(b: _Builder, rng, labels: _Labels, p: LabeledTree, d: int, budget: int) -> bool:
    """Insert a copy of a pattern subtree, possibly adopting siblings."""
    subs = [c for c in range(1, len(p)) if int(p.size[c]) <= max(budget, 1)]
    if not subs:
        return False
    c = rng.choice(subs)
    need = Counter(p.labels[x] for x in range(c, c + int(p.size[c])))
    if not all(labels.room(x, k) for x, k in need.items()):
        return False
    nodes = b.nodes()
    w = rng.choice(nodes)
    if b.degree(w) > 0 and rng.random() < 0.5:
        # the copy's root adopts a run of w's children, above other occurrences
        room = d - len(p.children[c])
        if room < 1:
            return False
        k = b.degree(w)
        start = rng.randrange(k)
        stop = rng.randint(start + 1, min(k, start + room))
        top = b.adopt(w, start, stop, p.labels[c])
        for x in p.children[c]:
            b.copy_subtree(p, x, top)
    else:
        if b.degree(w) >= d:
            return False
        b.copy_subtree(p, c, w, rng.randint(0, b.degree(w)))
    for x, k in need.items():
        labels.count[x] += k
    return True


def _raise_occ(b: _Builder, rng, labels: _Labels, p: LabeledTree, d: int, cap: int) -> None:
    leaf_labels = sorted({p.labels[v] for v in p.leaves()} - {FILLER})
    if not leaf_labels:
        return
    if max(labels.count[x] for x in leaf_labels) >= cap:
        return
    # try decoys first, they create structure; then single leaves
    for _ in range(20):
        _add_decoy(b, rng, labels, p, d, len(p))
        if max(labels.count[x] for x in leaf_labels) >= cap:
            return
    target = max(leaf_labels, key=lambda x: (labels.count[x], x))
    while labels.count[target] < cap:
        open_nodes = [v for v in b.nodes() if b.degree(v) < d]
        w = rng.choice(open_nodes)
        b.add(labels.take(target), w, rng.randint(0, b.degree(w)))


def gen_random(spec: GenSpec) -> tuple[LabeledTree, LabeledTree]:
    spec.validate()
    rng = random.Random(spec.seed)
    pool = alphabet(spec.labels)
    p = _random_pattern(spec, rng, pool)
    t = _grow_text(spec, rng, pool, p)
    _audit(spec, p, t)
    return p, t


def _audit(spec: GenSpec, p: LabeledTree, t: LabeledTree) -> None:
    if p.degree > spec.max_degree or t.degree > spec.max_degree:
        raise AssertionError("degree cap violated")
    if spec.unique_pattern_leaves and not has_unique_leaves(p):
        raise AssertionError("pattern leaves are not unique")
    if spec.occ_cap is not None:
        if stats(t).OCC > spec.occ_cap or occ_pattern_text(p, t) > spec.occ_cap:
            raise AssertionError("occurrence cap violated")
        if spec.exact_occ and occ_pattern_text(p, t) != spec.occ_cap:
            raise AssertionError("OCC(P,T) below the requested cap")


# ----------------------------------------------------------------------
# X3C


def gen_x3c_random(n: int, m: int, seed: int) -> X3CInstance:
    """Random X3C instance over elements ``1..n`` (as strings)."""
    if n <= 0 or n % 3:
        raise InfeasibleSpec("n must be a positive multiple of 3")
    if 3 * m < n:
        raise InfeasibleSpec(f"{m} triples cannot cover {n} elements")
    if m > n:
        raise InfeasibleSpec(f"{m} triples need some element in more than 3 sets")
    if m > _count_triples(n):
        raise InfeasibleSpec("more sets than distinct triples")
    rng = random.Random(seed)
    universe = tuple(str(i) for i in range(1, n + 1))
    for _ in range(1000):
        count = Counter()
        sets: list[tuple[str, str, str]] = []
        seen = set()
        ok = True
        for i in range(m):
            uncovered = [x for x in universe if count[x] == 0]
            must = max(0, len(uncovered) - 3 * (m - i - 1))
            if must > 3:
                ok = False
                break
            pick = rng.sample(uncovered, must)
            rest = [x for x in universe if count[x] < 3 and x not in pick]
            if len(rest) < 3 - must:
                ok = False
                break
            pick += rng.sample(rest, 3 - must)
            key = frozenset(pick)
            if key in seen:
                ok = False
                break
            seen.add(key)
            for x in pick:
                count[x] += 1
            sets.append(tuple(sorted(pick, key=int)))
        if ok and all(count[x] > 0 for x in universe):
            return X3CInstance(universe, tuple(sets))
    raise InfeasibleSpec(f"no X3C instance found for n={n}, m={m}")


def _count_triples(n: int) -> int:
    return n * (n - 1) * (n - 2) // 6


def read_x3c(path) -> X3CInstance:
    return parse_x3c(Path(path).read_text())


def parse_x3c(text: str) -> X3CInstance:
    """``n m`` on the first line, then m lines of three 1-based element indices."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ValueError("first line must be 'n m'")
    n, m = (int(x) for x in lines[0])
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} set lines, found {len(lines) - 1}")
    universe = tuple(str(i) for i in range(1, n + 1))
    sets = []
    for row in lines[1:]:
        if len(row) != 3:
            raise ValueError(f"set line {' '.join(row)!r} must have 3 indices")
        idx = [int(x) for x in row]
        if any(not 1 <= i <= n for i in idx):
            raise ValueError(f"index out of range in {row}")
        sets.append(tuple(str(i) for i in idx))
    return X3CInstance(universe, tuple(sets))


def format_x3c(inst: X3CInstance) -> str:
    pos = {x: i + 1 for i, x in enumerate(inst.universe)}
    rows = [f"{inst.n} {inst.m}"] + [" ".join(str(pos[x]) for x in s) for s in inst.sets]
    return "\n".join(rows) + "\n"


def write_x3c(path, inst: X3CInstance) -> None:
    Path(path).write_text(format_x3c(inst))


@dataclass
class X3CReduction:
    instance: X3CInstance
    pattern: LabeledTree
    text: LabeledTree
    element_labels: dict[str, str] = field(default_factory=dict)
    w_labels: list[str] = field(default_factory=list)
    alpha: str = ALPHA

    @classmethod
    def build(cls, inst: X3CInstance) -> "X3CReduction":
        inst.validate()
        m, q = inst.m, inst.n // 3
        elab = {x: f"u{i + 1}" for i, x in enumerate(inst.universe)}

        def s(i: int, j: int) -> str:
            return f"s{i}_{j}"

        def t_of(leaves: list[str]):
            return (ALPHA, list(leaves))

        text_kids = []
        for i, S in enumerate(inst.sets, start=1):
            text_kids.append(t_of([s(i, 0)] + [elab[x] for x in S]))
        for i in range(1, m + 1):
            for j in range(1, q + 1):
                text_kids.append(t_of([s(i, j - 1), s(i, j)]))
        for j in range(1, q + 1):
            text_kids.append(t_of([s(i, j) for i in range(1, m + 1)]))
        w = [s(i, j) for i in range(1, m + 1) for j in range(0, q + 1)]
        pattern = (ALPHA, [elab[x] for x in inst.universe] + [t_of([x]) for x in w])
        red = cls(inst, LabeledTree.from_nested(pattern), LabeledTree.from_nested((ALPHA, text_kids)),
                  elab, w)
        red.check()
        return red

    def check(self) -> None:
        p, t = self.pattern, self.text
        sp, st = stats(p), stats(t)
        internal = {p.labels[v] for v in range(len(p)) if not p.is_leaf(v)}
        internal |= {t.labels[v] for v in range(len(t)) if not t.is_leaf(v)}
        problems = []
        if sp.height != 2 or st.height != 2:
            problems.append(f"heights {sp.height}, {st.height}")
        if sp.OCC != 1:
            problems.append(f"OCC(P)={sp.OCC}")
        if st.OCC > 3 or (self.instance.n >= 6 and st.OCC != 3):
            problems.append(f"OCC(T)={st.OCC}")
        if internal != {ALPHA}:
            problems.append(f"internal labels {sorted(internal)}")
        leaves_p = {p.labels[v] for v in p.leaves()}
        leaves_t = {t.labels[v] for v in t.leaves()}
        if leaves_p != leaves_t:
            problems.append("pattern and text leaf alphabets differ")
        if problems:
            raise AssertionError("reduction invariants violated: " + "; ".join(problems))


def gen_x3c_reduction(inst: X3CInstance) -> tuple[LabeledTree, LabeledTree]:
    red = X3CReduction.build(inst)
    return red.pattern, red.text


def x3c_example() -> X3CInstance:
    """Elements a..f with five triples; {a,b,c}, {d,e,f} is the exact cover."""
    sets = (("a", "b", "c"), ("a", "b", "d"), ("c", "d", "e"), ("b", "e", "f"), ("d", "e", "f"))
    return X3CInstance(tuple("abcdef"), sets)


# ----------------------------------------------------------------------
# fixed families


@dataclass(frozen=True)
class FamilyExample:
    pattern: LabeledTree
    text: LabeledTree
    child_names: dict[int, str]  # pattern child -> "u_A" etc.
    text_names: dict[str, int]  # "v", "v0".."v4" -> text node


def family_example() -> FamilyExample:
    """Pattern u with children u_A..u_F and a text v realizing

    u_A, u_B minimal at v1; u_C at v2; u_D, u_E at v3; u_D, u_F at v4,
    where v0 and v1 are the children of v, v2 sits under v1, and v3, v4
    are the children of v2 (u_D is also included at v2, but not minimally).
    """
    names = "ABCDEF"
    p = LabeledTree.from_nested(("p", [("x", [c]) for c in names]))
    t = parse_tree("p(z, x(A, B, x(C, x(D, E), x(D, F))))")
    child_names = {c: f"u_{names[i]}" for i, c in enumerate(p.children[0])}
    text_names = {"v": 0, "v0": 1, "v1": 2, "v2": 5, "v3": 7, "v4": 10}
    return FamilyExample(p, t, child_names, text_names)


def star(d: int) -> tuple[LabeledTree, LabeledTree]:
    """Pattern r(l1..ld); text r(x(l1..l_{d-1}), x(l2..ld)).

    Every subset of the first d-1 leaves embeds in the left x, so the
    pairwise fold at the root sees about 4^(d-1) pairs while the full child
    set only shows up at the last leaf.
    """
    if d < 2:
        raise InfeasibleSpec("star family needs d >= 2")
    leaves = [f"l{i}" for i in range(1, d + 1)]
    p = LabeledTree.from_nested(("r", leaves))
    t = LabeledTree.from_nested(("r", [("x", leaves[:-1]), ("x", leaves[1:])]))
    return p, t


def gen_nested_occ(seed: int, d: int, inner: int, occ: int = 3) -> tuple[LabeledTree, LabeledTree]:
    """Conflict-rich instances with OCC(P,T) = occ and unique pattern leaves.

    P = r(y(a1), ..., y(ad)). T is a random tree of ``inner`` y-nodes under
    an r root; each label a_i is hung under ``occ`` random y-nodes, so the
    candidates of different children are often nested or shared.
    """
    if d < 1 or inner < 1 or occ < 1:
        raise InfeasibleSpec("d, inner and occ must be positive")
    rng = random.Random(seed)
    leaves = [f"a{i}" for i in range(1, d + 1)]
    p = LabeledTree.from_nested(("r", [("y", [x]) for x in leaves]))
    b = _Builder()
    b.add("r")
    ys = []
    for _ in range(inner):
        # a third of the y-nodes hang off the root, which keeps the tree wide
        parent = 0 if not ys or rng.random() < 1 / 3 else rng.choice(ys)
        ys.append(b.add("y", parent))
    for x in leaves:
        hosts = rng.sample(ys, min(occ, len(ys)))
        while len(hosts) < occ:
            hosts.append(rng.choice(ys))
        for h in hosts:
            b.add(x, h, rng.randint(0, b.degree(h)))
    return p, b.tree()


# ----------------------------------------------------------------------
# exhaustive enumeration


@lru_cache(maxsize=None)
def _trees(n: int, labels: tuple[str, ...]) -> tuple[str, ...]:
    out = []
    for lab in labels:
        for forest in _forests(n - 1, labels, None):
            out.append(lab if not forest else f"{lab}({','.join(forest)})")
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(n: int, labels: tuple[str, ...], bound: str | None) -> tuple[tuple[str, ...], ...]:
    # multisets of trees of total size n, listed in non-increasing order of
    # their serialization so every multiset appears once
    if n == 0:
        return ((),)
    res = []
    for k in range(1, n + 1):
        for first in _trees(k, labels):
            if bound is not None and first > bound:
                continue
            for rest in _forests(n - k, labels, first):
                res.append((first,) + rest)
    return tuple(res)


def enumerate_trees(n: int, labels: Sequence[str] = ("a", "b")) -> Iterator[LabeledTree]:
    """All unordered trees with exactly n nodes over ``labels``, up to isomorphism."""
    for text in _trees(n, tuple(labels)):
        yield parse_tree(text)


def enumerate_upto(max_nodes: int, labels: Sequence[str] = ("a", "b")) -> list[LabeledTree]:
    return [t for n in range(1, max_nodes + 1) for t in enumerate_trees(n, labels)]


def enumerate_ordered_shapes(n: int, label: str = "a") -> Iterator[LabeledTree]:
    """Every ordered tree shape with n nodes (Catalan many), one label."""
    for text in _ordered(n, label):
        yield parse_tree(text)


@lru_cache(maxsize=None)
def _ordered(n: int, label: str) -> tuple[str, ...]:
    return tuple(label if not f else f"{label}({','.join(f)})" for f in _ordered_forests(n - 1, label))


@lru_cache(maxsize=None)
def _ordered_forests(n: int, label: str) -> tuple[tuple[str, ...], ...]:
    if n == 0:
        return ((),)
    return tuple(
        (first,) + rest
        for k in range(1, n + 1)
        for first in _ordered(k, label)
        for rest in _ordered_forests(n - k, label)
    )


def serialize_pair(p: LabeledTree, t: LabeledTree) -> str:
    return f"{serialize_tree(p)}\t{serialize_tree(t)}"
