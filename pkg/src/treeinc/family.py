"""Mixed-radix encoding of subset families over iso-classes of children.

A pattern node's children are grouped into classes of isomorphic subtrees.
A member of a family is a count vector (how many children of each class)
encoded as ``sum(count[c] * stride[c])``. A family is a boolean array over
all ``prod(mult + 1)`` codes. With every multiplicity equal to one the code
is a plain bitmask over the children.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ClassLayout:
    mults: np.ndarray
    strides: np.ndarray

    @classmethod
    def from_mults(cls, mults: Sequence[int]) -> "ClassLayout":
        mults = np.asarray(mults, dtype=np.int64)
        strides = np.ones(len(mults), dtype=np.int64)
        for c in range(1, len(mults)):
            strides[c] = strides[c - 1] * (mults[c - 1] + 1)
        return cls(mults, strides)

    @property
    def k(self) -> int:
        return len(self.mults)

    @cached_property
    def universe(self) -> int:
        return int(np.prod(self.mults + 1)) if self.k else 1

    @property
    def full(self) -> int:
        return int(np.dot(self.mults, self.strides)) if self.k else 0

    @property
    def bitmask(self) -> bool:
        return bool(np.all(self.mults == 1))

    def encode(self, counts: Sequence[int]) -> int:
        return int(np.dot(np.asarray(counts, dtype=np.int64), self.strides))

    def decode(self, code: int) -> tuple[int, ...]:
        return tuple(int((code // s) % (m + 1)) for s, m in zip(self.strides, self.mults))

    @cached_property
    def digits(self) -> np.ndarray:
        """``digits[code, c]`` is the count of class ``c`` in ``code``."""
        codes = np.arange(self.universe, dtype=np.int64)
        return (codes[:, None] // self.strides[None, :]) % (self.mults[None, :] + 1)

    def members(self, family: np.ndarray) -> list[tuple[int, ...]]:
        return [self.decode(int(c)) for c in np.flatnonzero(family)]


def format_family(layout: ClassLayout, family: np.ndarray, names: Sequence[str]) -> str:
    """Canonical text of a family: members sorted by size, then by names.

    ``names[c]`` names class ``c``; a class of multiplicity two contributes
    its name twice.
    """
    rendered = []
    for counts in layout.members(family):
        items = sorted(n for n, cnt in zip(names, counts) for _ in range(cnt))
        rendered.append((len(items), items))
    rendered.sort()
    parts = ["∅" if not items else "{" + ",".join(items) + "}" for _, items in rendered]
    return "{" + ", ".join(parts) + "}"
