"""Brute-force references shared by the tests."""

from functools import lru_cache
from itertools import combinations_with_replacement, product


def all_clauses(n: int) -> list[tuple[int, int]]:
    """Every 2-clause over variables 1..n, tautologies and (a, a) included."""
    lits = [x for v in range(1, n + 1) for x in (v, -v)]
    return list(combinations_with_replacement(lits, 2))


def clause_masks(n: int, clauses) -> list[int]:
    """For each assignment, the bitmask of clauses it satisfies."""
    masks = []
    for bits in product((False, True), repeat=n):
        holds = lambda lit: bits[abs(lit) - 1] == (lit > 0)  # noqa: E731
        masks.append(sum(1 << i for i, (a, b) in enumerate(clauses) if holds(a) or holds(b)))
    return masks


def sat_by_truth_table(n: int, clauses) -> bool:
    return any(m == (1 << len(clauses)) - 1 for m in clause_masks(n, clauses))


def max_matching_size(rows) -> int:
    """Maximum matching where ``rows[i]`` is the right-neighbour bitmask of left vertex i."""

    @lru_cache(maxsize=None)
    def best(i: int, used: int) -> int:
        if i == len(rows):
            return 0
        out = best(i + 1, used)
        free = rows[i] & ~used
        while free:
            bit = free & -free
            out = max(out, 1 + best(i + 1, used | bit))
            free ^= bit
        return out

    return best(0, 0)
