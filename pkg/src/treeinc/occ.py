"""Inclusion for patterns with uniquely labeled leaves and few occurrences.

With unique pattern leaves, each child u_i of u has at most OCC(P,T)
minimal occurrences below v (they are pairwise unrelated, and each one
holds its own copy of a leaf label of u_i). So P(u) is included at v
exactly when every child can take one of its candidates, with all chosen
nodes pairwise distinct and unrelated by ancestry.

* ``solve_occ2``: two candidates per child at most, decided by 2-SAT.
* ``find_mapping_occ3``: three candidates at most. Conflicting pairs of
  three-candidate children are branched on until no such pair is left,
  and then ``alg_hashhash`` finishes with 2-SAT or bipartite matching.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .dp import DPContext, candidate_cells, minimal_roots, run
from .errors import PreconditionError
from .limits import Counters, Limits
from .matching import saturates
from .result import RunResult, Stopwatch
from .tree import LabeledTree, has_unique_leaves, occ_pattern_text
from .twosat import TwoSatInstance, two_sat_solve

ALGOS = ("occ2", "occ3")

Cands = dict[int, tuple[int, ...]]


class Conflicts:
    """conflict(a, b): same node, or one is an ancestor of the other."""

    def __init__(self, t: LabeledTree):
        self.size = t.size

    def __call__(self, a: int, b: int) -> bool:
        if a > b:
            a, b = b, a
        return b < a + self.size[a]


@dataclass
class OccProfile:
    d2: int
    d3: int
    k: int


@dataclass
class OccurrenceMap:
    """Candidates of each child of ``u``: its minimal occurrences below ``v``."""

    u: int
    v: int
    cands: Cands

    @property
    def pairs(self) -> set[tuple[int, int]]:
        return {(c, w) for c, ws in self.cands.items() for w in ws}

    def occ(self, c: int) -> int:
        return len(self.cands[c])

    def profile(self) -> OccProfile:
        counts = [len(ws) for ws in self.cands.values()]
        d3 = counts.count(3)
        return OccProfile(counts.count(2), d3, d3)

    @property
    def max_occ(self) -> int:
        return max((len(ws) for ws in self.cands.values()), default=0)


def require_unique_leaves(p: LabeledTree) -> None:
    if not has_unique_leaves(p):
        raise PreconditionError(
            "pattern leaves must carry distinct labels for the occ algorithms; "
            "use alginc2 (or km) for general patterns"
        )


def build_occurrence_map(ctx: DPContext, u: int, v: int) -> OccurrenceMap:
    """Minimal occurrences of each child of u strictly inside T(v)."""
    t = ctx.t
    lo, hi = v + 1, v + int(t.size[v])
    cands = {}
    for c in ctx.p.children[u]:
        cands[c] = tuple(int(w) + lo for w in np.flatnonzero(ctx.table.minimal[c, lo:hi]))
    return OccurrenceMap(u, v, cands)


# ----------------------------------------------------------------------
# OCC = 2


class ConflictGraph:
    """Conflicts among the candidate nodes of one cell, precomputed."""

    def __init__(self, t: LabeledTree, nodes):
        conflict = Conflicts(t)
        nodes = sorted(set(nodes))
        self.nbrs: dict[int, tuple[int, ...]] = {
            a: tuple(b for b in nodes if conflict(a, b)) for a in nodes
        }
        self.conflict = conflict

    @classmethod
    def of(cls, t: LabeledTree, cands: Cands) -> "ConflictGraph":
        return cls(t, (w for ws in cands.values() for w in ws))

    def __call__(self, a: int, b: int) -> bool:
        return self.conflict(a, b)


def _two_sat(cands: Cands, graph: ConflictGraph, counters: Counters | None,
             strict: bool = True) -> dict[int, int] | None:
    """2-SAT over children with at most two candidates.

    With ``strict=False`` children with more candidates are left out, which
    gives a relaxation: unsatisfiable means no assignment at all exists.
    """
    items = []
    var = {}
    users: dict[int, list[tuple[int, int]]] = {}
    for c, ws in cands.items():
        if len(ws) == 0:
            return None
        if len(ws) > 2:
            if strict:
                raise PreconditionError(f"child {c} has {len(ws)} candidates; 2-SAT needs at most 2")
            continue
        for w in ws:
            items.append((c, w))
            var[c, w] = len(items)
            users.setdefault(w, []).append((c, len(items)))
    inst = TwoSatInstance(len(items))
    for c, ws in cands.items():
        if len(ws) == 1:
            inst.unit(var[c, ws[0]])
        elif len(ws) == 2:
            a, b = var[c, ws[0]], var[c, ws[1]]
            inst.add(a, b)
            inst.add(-a, -b)
    for (c1, w1), x1 in var.items():
        for w2 in graph.nbrs[w1]:
            for c2, x2 in users.get(w2, ()):
                if c2 != c1 and x2 > x1:
                    inst.add(-x1, -x2)
    if counters is not None:
        counters.two_sat_calls += 1
    sol = two_sat_solve(inst)
    if sol is None:
        return None
    return {c: w for (c, w), val in zip(items, sol) if val}


def solve_occ2(m: OccurrenceMap, t: LabeledTree, counters: Counters | None = None) -> dict[int, int] | None:
    """Child -> text node assignment, or None when none exists."""
    return _two_sat(m.cands, ConflictGraph.of(t, m.cands), counters)


# ----------------------------------------------------------------------
# OCC = 3


class _Occ3:
    """FindMapping and ALG-## over one cell.

    ``prune`` adds a sound cut on top of the plain recursion: 2-SAT over the
    children that have at most two candidates left. Dropping children only
    makes the problem easier, so an unsatisfiable relaxation ends the branch.
    """

    def __init__(self, graph: ConflictGraph, counters: Counters, limits: Limits | None = None,
                 prune: bool = True):
        self.graph = graph
        self.counters = counters
        self.limits = limits
        self.prune = prune

    def _commit(self, cands: Cands, fixed: dict[int, int], c: int, w: int) -> Cands:
        fixed[c] = w
        bad = set(self.graph.nbrs[w])
        return {o: tuple(x for x in ws if x not in bad) for o, ws in cands.items() if o != c}

    def propagate(self, cands: Cands, fixed: dict[int, int]) -> Cands | None:
        """Commit single-candidate children until none is left."""
        while True:
            if any(not ws for ws in cands.values()):
                return None
            single = next((c for c, ws in cands.items() if len(ws) == 1), None)
            if single is None:
                return cands
            cands = self._commit(cands, fixed, single, cands[single][0])

    def relaxed_ok(self, cands: Cands) -> bool:
        if not self.prune:
            return True
        return _two_sat(cands, self.graph, self.counters, strict=False) is not None

    def hashhash_pair(self, cands: Cands):
        """The conflicting pair of two three-candidate children to branch on.

        Smallest first node in preorder, then smallest second node.
        """
        owner: dict[int, list[int]] = {}
        for c in sorted(cands):
            if len(cands[c]) == 3:
                for w in cands[c]:
                    owner.setdefault(w, []).append(c)
        for w1 in sorted(owner):
            for w2 in self.graph.nbrs[w1]:
                for c1 in owner[w1]:
                    for c2 in owner.get(w2, ()):
                        if c1 != c2:
                            return (c1, w1), (c2, w2)
        return None

    def find(self, cands: Cands, fixed: dict[int, int]) -> dict[int, int] | None:
        if self.limits is not None:
            self.limits.check_progress(self.counters)
        fixed = dict(fixed)
        cands = self.propagate(cands, fixed)
        if cands is None:
            return None
        if any(len(ws) > 3 for ws in cands.values()):
            raise PreconditionError("a child has more than 3 candidates")
        if not self.relaxed_ok(cands):
            return None
        pair = self.hashhash_pair(cands)
        if pair is None:
            return self.alg_hashhash(cands, fixed)

        self.counters.branches += 1
        (c1, w1), _ = pair
        k = sum(len(ws) == 3 for ws in cands.values())

        # (#2) drop the pair
        dropped = dict(cands)
        dropped[c1] = tuple(x for x in cands[c1] if x != w1)
        assert sum(len(ws) == 3 for ws in dropped.values()) == k - 1
        got = self.find(dropped, fixed)
        if got is not None:
            return got

        # (#3) commit it and remove everything related to w1
        fixed3 = dict(fixed)
        taken = self._commit(cands, fixed3, c1, w1)
        assert sum(len(ws) == 3 for ws in taken.values()) <= k - 2
        return self.find(taken, fixed3)

    def alg_hashhash(self, cands: Cands, fixed: dict[int, int]) -> dict[int, int] | None:
        if self.hashhash_pair(cands) is not None:
            raise PreconditionError("condition (##) does not hold")
        self.counters.alg_calls += 1
        two = sorted(c for c, ws in cands.items() if len(ws) == 2)
        three = sorted(c for c, ws in cands.items() if len(ws) == 3)
        if len(three) <= len(two):
            return self._via_two_sat(cands, dict(fixed), three, 0)
        return self._via_matching(cands, dict(fixed), two, three, 0)

    def _via_two_sat(self, cands, fixed, three, i):
        # fix three[i] at its first candidate, or drop that candidate
        if i == len(three):
            self.counters.alg_branches += 1
            got = _two_sat(cands, self.graph, self.counters)
            if got is None:
                return None
            fixed.update(got)
            return fixed
        c = three[i]
        if c not in cands or len(cands[c]) < 3:
            # already settled by an earlier choice
            return self._via_two_sat(cands, fixed, three, i + 1)
        w = cands[c][0]
        for take in (True, False):
            fx = dict(fixed)
            if take:
                cur = self._commit(cands, fx, c, w)
            else:
                cur = dict(cands)
                cur[c] = cands[c][1:]
            cur = self.propagate(cur, fx)
            if cur is None or not self.relaxed_ok(cur):
                continue
            got = self._via_two_sat(cur, fx, three, i + 1)
            if got is not None:
                return got
        return None

    def _via_matching(self, cands, fixed, two, three, i):
        # pick one of the two candidates of each two-candidate child,
        # then match the three-candidate children
        while i < len(two) and (two[i] not in cands or len(cands[two[i]]) != 2):
            i += 1
        if i == len(two):
            self.counters.alg_branches += 1
            rest = {c: list(ws) for c, ws in cands.items()}
            full, matching, aug = saturates(rest)
            self.counters.match_augmentations += aug
            if not full:
                return None
            chosen = list(matching.values())
            if any(self.graph(a, b) for j, a in enumerate(chosen) for b in chosen[j + 1 :]):
                return None
            out = dict(fixed)
            out.update(matching)
            return out
        c = two[i]
        for w in cands[c]:
            fx = dict(fixed)
            cur = self._commit(cands, fx, c, w)
            cur = self.propagate(cur, fx)
            if cur is None:
                continue
            got = self._via_matching(cur, fx, two, three, i + 1)
            if got is not None:
                return got
        return None


def find_mapping_occ3(m: OccurrenceMap, t: LabeledTree, counters: Counters | None = None,
                      limits: Limits | None = None, prune: bool = True) -> dict[int, int] | None:
    graph = ConflictGraph.of(t, m.cands)
    return _Occ3(graph, counters or Counters(), limits, prune).find(dict(m.cands), {})


def alg_hashhash(m: OccurrenceMap, t: LabeledTree, counters: Counters | None = None) -> dict[int, int] | None:
    solver = _Occ3(ConflictGraph.of(t, m.cands), counters or Counters(), prune=False)
    fixed: dict[int, int] = {}
    cands = solver.propagate(dict(m.cands), fixed)
    if cands is None:
        return None
    return solver.alg_hashhash(cands, fixed)


def check_assignment(m: OccurrenceMap, t: LabeledTree, got: dict[int, int]) -> list[str]:
    """Problems with a child assignment: coverage, candidates, conflicts."""
    problems = []
    conflict = Conflicts(t)
    if set(got) != set(m.cands):
        problems.append("assignment does not cover every child")
    for c, w in got.items():
        if w not in m.cands.get(c, ()):
            problems.append(f"child {c} mapped to non-candidate {w}")
    items = sorted(got.items())
    for i, (c1, w1) in enumerate(items):
        for c2, w2 in items[i + 1 :]:
            if conflict(w1, w2):
                problems.append(f"children {c1} and {c2} conflict at {w1}, {w2}")
    return problems


# ----------------------------------------------------------------------
# whole-tree decision


class OccSolver:
    def __init__(self, algo: str, prune: bool = True):
        if algo not in ALGOS:
            raise ValueError(f"algo must be one of {ALGOS}")
        self.algo = algo
        self.prune = prune
        self.assignments: dict[tuple[int, int], dict[int, int]] = {}

    def cell(self, ctx: DPContext, u: int, v: int) -> bool:
        ctx.counters.dp_cells += 1
        m = build_occurrence_map(ctx, u, v)
        limit = 2 if self.algo == "occ2" else 3
        if m.max_occ > limit:
            raise PreconditionError(
                f"cell ({u},{v}) has a child with {m.max_occ} candidates; {self.algo} allows {limit}"
            )
        c = ctx.counters
        before = (c.branches, c.alg_calls, c.alg_branches)
        if self.algo == "occ2":
            got = solve_occ2(m, ctx.t, c)
        else:
            got = find_mapping_occ3(m, ctx.t, c, ctx.limits, self.prune)
        prof = m.profile()
        c.cells.append({
            "u": u, "v": v, "d2": prof.d2, "d3": prof.d3, "k": prof.k,
            "branches": c.branches - before[0],
            "algCalls": c.alg_calls - before[1],
            "algBranches": c.alg_branches - before[2],
            "included": got is not None,
        })
        if got is None:
            return False
        self.assignments[u, v] = got
        return True

    def __call__(self, ctx: DPContext, u: int) -> np.ndarray:
        row = np.zeros(len(ctx.t), dtype=np.bool_)
        for v in candidate_cells(ctx, u):
            row[v] = self.cell(ctx, u, v)
            ctx.limits.check_progress(ctx.counters)
        return row

    def witness(self, ctx: DPContext, root: int) -> list[tuple[int, int]]:
        pairs = []
        stack = [(ctx.p.root, root)]
        while stack:
            u, v = stack.pop()
            pairs.append((u, v))
            if ctx.p.children[u]:
                stack.extend(self.assignments[u, v].items())
        return sorted(pairs)


def occ_decide(p: LabeledTree, t: LabeledTree, algo: str = "occ3", witness: bool = True,
               limits: Limits | None = None, prune: bool = True) -> RunResult:
    """``prune=False`` runs FindMapping without the 2-SAT relaxation cut."""
    clock = Stopwatch()
    require_unique_leaves(p)
    ctx = DPContext(p, t, limits or Limits.from_env())
    solver = OccSolver(algo, prune)
    run(ctx, solver)
    roots = minimal_roots(ctx)
    pairs = solver.witness(ctx, roots[0]) if roots and witness else None
    return RunResult(bool(roots), roots, algo, pairs, ctx.counters, clock.micros())


def choose_algo(p: LabeledTree, t: LabeledTree) -> str:
    """occ2 / occ3 when their preconditions hold, otherwise alginc2."""
    if has_unique_leaves(p):
        k = occ_pattern_text(p, t)
        if k <= 2:
            return "occ2"
        if k == 3:
            return "occ3"
    return "alginc2"
