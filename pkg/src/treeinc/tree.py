"""Rooted, node-labeled, unordered trees with a fixed child order.

Node ids are preorder ranks, so the subtree of ``v`` is the contiguous id
range ``[v, v + size[v])``. The stored child order is the order used for
every left-of query.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import TreeSyntaxError

_BARE = re.compile(r"[A-Za-z0-9_]+")

Nested = tuple  # (label, [Nested, ...])


@dataclass(frozen=True, eq=False)
class LabeledTree:
    labels: tuple[str, ...]
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise ValueError("a tree needs at least one node")
        if len(self.parent) != n or len(self.children) != n:
            raise ValueError("labels, parent and children must have equal length")
        if self.parent[0] != -1:
            raise ValueError("node 0 must be the root")
        # preorder check: walking the children lists must visit 0..n-1 in order
        expected = 0
        stack = [0]
        while stack:
            v = stack.pop()
            if v != expected:
                raise ValueError("node ids are not preorder ranks")
            expected += 1
            for c in self.children[v]:
                if self.parent[c] != v:
                    raise ValueError(f"inconsistent parent link for node {c}")
            stack.extend(reversed(self.children[v]))
        if expected != n:
            raise ValueError("tree is disconnected")

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_nested(cls, nested: Nested) -> "LabeledTree":
        """Build from ``(label, [child, ...])`` tuples; a bare string is a leaf."""
        labels: list[str] = []
        parent: list[int] = []
        children: list[list[int]] = []
        stack = [(nested, -1)]
        while stack:
            node, par = stack.pop()
            if isinstance(node, str):
                label, kids = node, ()
            else:
                label, kids = node[0], node[1] if len(node) > 1 else ()
            v = len(labels)
            labels.append(str(label))
            parent.append(par)
            children.append([])
            if par >= 0:
                children[par].append(v)
            for k in reversed(list(kids)):
                stack.append((k, v))
        return cls(tuple(labels), tuple(parent), tuple(tuple(c) for c in children))

    @classmethod
    def from_parents(cls, labels: Sequence[str], parents: Sequence[int]) -> "LabeledTree":
        """Build from a parent array with arbitrary ids.

        Siblings keep the relative order of their original ids. The result
        is renumbered to preorder.
        """
        n = len(labels)
        if n == 0:
            raise ValueError("a tree needs at least one node")
        roots = [i for i, p in enumerate(parents) if p < 0]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        kids: list[list[int]] = [[] for _ in range(n)]
        for i, p in enumerate(parents):
            if p >= 0:
                if not 0 <= p < n:
                    raise ValueError(f"parent {p} out of range")
                kids[p].append(i)
        seen = 0

        def nest(root):
            nonlocal seen
            out = [labels[root], []]
            stack = [(root, out)]
            while stack:
                v, holder = stack.pop()
                seen += 1
                for c in kids[v]:
                    sub = [labels[c], []]
                    holder[1].append(sub)
                    stack.append((c, sub))
            return out

        nested = nest(roots[0])
        if seen != n:
            raise ValueError("parent array contains a cycle or unreachable nodes")
        return cls.from_nested(nested)

    def to_nested(self, v: int = 0) -> Nested:
        return (self.labels[v], [self.to_nested(c) for c in self.children[v]])

    # ------------------------------------------------------------------
    # derived structure

    def __len__(self) -> int:
        return len(self.labels)

    # structural equality; the cached arrays are not compared
    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledTree):
            return NotImplemented
        return self.labels == other.labels and self.parent == other.parent

    def __hash__(self) -> int:
        return hash((self.labels, self.parent))

    @property
    def root(self) -> int:
        return 0

    @cached_property
    def size(self) -> np.ndarray:
        """Subtree sizes (including the node itself)."""
        n = len(self.labels)
        size = np.ones(n, dtype=np.int64)
        for v in range(n - 1, 0, -1):
            size[self.parent[v]] += size[v]
        return size

    @cached_property
    def euler(self) -> tuple[np.ndarray, np.ndarray]:
        """Entry and exit timestamps of a child-order depth-first walk."""
        n = len(self.labels)
        pre = np.empty(n, dtype=np.int64)
        post = np.empty(n, dtype=np.int64)
        clock = 0
        stack = [(0, False)]
        while stack:
            v, done = stack.pop()
            if done:
                post[v] = clock
                clock += 1
                continue
            pre[v] = clock
            clock += 1
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))
        return pre, post

    @cached_property
    def depth(self) -> np.ndarray:
        depth = np.zeros(len(self.labels), dtype=np.int64)
        for v in range(1, len(self.labels)):
            depth[v] = depth[self.parent[v]] + 1
        return depth

    @cached_property
    def postorder(self) -> tuple[int, ...]:
        out: list[int] = []
        stack = [(0, False)]
        while stack:
            v, done = stack.pop()
            if done:
                out.append(v)
                continue
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))
        return tuple(out)

    @property
    def height(self) -> int:
        return int(self.depth.max())

    @property
    def degree(self) -> int:
        return max(len(c) for c in self.children)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def leaves(self) -> list[int]:
        return [v for v in range(len(self.labels)) if not self.children[v]]

    def descendants(self, v: int) -> range:
        """Strict descendants of ``v``."""
        return range(v + 1, v + int(self.size[v]))

    def ancestors(self, v: int) -> list[int]:
        out = []
        v = self.parent[v]
        while v >= 0:
            out.append(v)
            v = self.parent[v]
        return out

    def _check(self, v: int) -> None:
        if not 0 <= v < len(self.labels):
            raise IndexError(f"node id {v} out of range for tree of size {len(self.labels)}")

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff ``a`` is a strict ancestor of ``b``."""
        self._check(a)
        self._check(b)
        return a < b < a + int(self.size[a])

    def related(self, a: int, b: int) -> bool:
        """Equal or ancestor-related."""
        return a == b or self.is_ancestor(a, b) or self.is_ancestor(b, a)

    def left_of(self, a: int, b: int) -> bool:
        self._check(a)
        self._check(b)
        if a == b:
            raise ValueError("left_of needs two distinct nodes")
        pre, post = self.euler
        return bool(post[a] < pre[b])

    def __repr__(self) -> str:
        text = serialize_tree(self)
        if len(text) > 60:
            text = text[:57] + "..."
        return f"LabeledTree({text!r})"


def left_of(t: LabeledTree, a: int, b: int) -> bool:
    return t.left_of(a, b)


# ----------------------------------------------------------------------
# text format


def quote_label(label: str) -> str:
    if _BARE.fullmatch(label):
        return label
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_tree(t: LabeledTree) -> str:
    parts: list[str] = []
    stack: list = [0]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        parts.append(quote_label(t.labels[item]))
        kids = t.children[item]
        if kids:
            stack.append(")")
            for i in range(len(kids) - 1, -1, -1):
                stack.append(kids[i])
                if i:
                    stack.append(",")
            stack.append("(")
    return "".join(parts)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        # byte offsets for error messages
        self._utf8 = text.isascii()

    def offset(self, pos: int | None = None) -> int:
        pos = self.pos if pos is None else pos
        return pos if self._utf8 else len(self.text[:pos].encode("utf-8"))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def label(self) -> str:
        self.skip_ws()
        text, start = self.text, self.pos
        if start >= len(text):
            raise TreeSyntaxError("expected a label, found end of input", self.offset())
        if text[start] == '"':
            out = []
            i = start + 1
            while i < len(text):
                ch = text[i]
                if ch == "\\":
                    if i + 1 >= len(text) or text[i + 1] not in '"\\':
                        raise TreeSyntaxError("bad escape in quoted label", self.offset(i))
                    out.append(text[i + 1])
                    i += 2
                elif ch == '"':
                    self.pos = i + 1
                    return "".join(out)
                else:
                    out.append(ch)
                    i += 1
            raise TreeSyntaxError("unterminated quoted label", self.offset(start))
        m = _BARE.match(text, start)
        if not m:
            raise TreeSyntaxError(f"unexpected character {text[start]!r}", self.offset())
        self.pos = m.end()
        return m.group()


def parse_tree(text: str) -> LabeledTree:
    """Parse ``label | label "(" tree ("," tree)* ")"``.

    Whitespace between tokens is ignored. Raises TreeSyntaxError with the
    byte offset of the first problem.
    """
    sc = _Scanner(text)
    if not sc.peek():
        raise TreeSyntaxError("empty input", sc.offset())
    labels: list[str] = []
    parent: list[int] = []
    children: list[list[int]] = []
    open_nodes: list[int] = []

    def new_node() -> int:
        v = len(labels)
        labels.append(sc.label())
        parent.append(open_nodes[-1] if open_nodes else -1)
        children.append([])
        if open_nodes:
            children[open_nodes[-1]].append(v)
        return v

    v = new_node()
    while True:
        ch = sc.peek()
        if ch == "(":
            sc.pos += 1
            open_nodes.append(v)
            v = new_node()
            continue
        while open_nodes:
            ch = sc.peek()
            if ch == ",":
                sc.pos += 1
                v = new_node()
                break
            if ch == ")":
                sc.pos += 1
                v = open_nodes.pop()
                continue
            if not ch:
                raise TreeSyntaxError("unexpected end of input, missing ')'", sc.offset())
            raise TreeSyntaxError(f"expected ',' or ')', found {ch!r}", sc.offset())
        else:
            break
    ch = sc.peek()
    if ch:
        if ch == "," or _BARE.match(ch) or ch == '"':
            raise TreeSyntaxError("more than one root", sc.offset())
        raise TreeSyntaxError(f"trailing input {ch!r}", sc.offset())
    return LabeledTree(tuple(labels), tuple(parent), tuple(tuple(c) for c in children))


def read_tree(path) -> LabeledTree:
    with open(path, encoding="utf-8") as fh:
        return parse_tree(fh.read())


def write_tree(path, t: LabeledTree) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_tree(t) + "\n")


# ----------------------------------------------------------------------
# isomorphism codes and statistics


def iso_code(t: LabeledTree) -> list[str]:
    """Canonical code per node; equal codes iff isomorphic subtrees.

    A node's code is its quoted label followed by the sorted codes of its
    children, which is itself a serialization of a canonical reordering.
    """
    codes: list[str] = [""] * len(t)
    for v in t.postorder:
        kids = t.children[v]
        head = quote_label(t.labels[v])
        if kids:
            codes[v] = head + "(" + ",".join(sorted(codes[c] for c in kids)) + ")"
        else:
            codes[v] = head
    return codes


@dataclass(frozen=True)
class TreeStats:
    size: int
    degree: int
    height: int
    occ: dict
    OCC: int


def stats(t: LabeledTree) -> TreeStats:
    occ = Counter(t.labels)
    leaf_labels = {t.labels[v] for v in t.leaves()}
    return TreeStats(
        size=len(t),
        degree=t.degree,
        height=t.height,
        occ=dict(occ),
        OCC=max(occ[c] for c in leaf_labels),
    )


def has_unique_leaves(p: LabeledTree) -> bool:
    labels = [p.labels[v] for v in p.leaves()]
    return len(labels) == len(set(labels))


def occ_pattern_text(p: LabeledTree, t: LabeledTree) -> int:
    """OCC(P,T): the largest number of text nodes sharing a pattern-leaf label."""
    occ = Counter(t.labels)
    return max(occ.get(p.labels[v], 0) for v in p.leaves())


def relabel_permuted(t: LabeledTree, order: Iterable[Sequence[int]]) -> LabeledTree:
    """Rebuild ``t`` with each node's children reordered by ``order[v]``."""
    order = list(order)

    def nest(v):
        return (t.labels[v], [nest(t.children[v][i]) for i in order[v]])

    return LabeledTree.from_nested(nest(0))
