"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""

import random
import time
from itertools import combinations, combinations_with_replacement

import pytest

from treeinc.api import decide
from treeinc.dag import closure_over_real, virtual_dag
from treeinc.family import format_family
from treeinc.fast import build_table, cell_families
from treeinc.generators import (GenSpec, X3CReduction, enumerate_ordered_shapes, enumerate_upto,
                                family_example, format_x3c, gen_nested_occ, gen_random, gen_x3c_random,
                                parse_x3c, star)
from treeinc.matching import bipartite_match
from treeinc.oracle import x3c_bruteforce
from treeinc.tree import LabeledTree, occ_pattern_text, stats
from treeinc.twosat import TwoSatInstance, two_sat_solve
from treeinc.verify import check_pair, random_pair

from brute import all_clauses, clause_masks, max_matching_size

pytestmark = pytest.mark.slow

EXPECTED_FAMILIES = {
    "v0": "{∅}",
    "v1": "{∅, {u_A}, {u_B}}",
    "v2": "{∅, {u_C}}",
    "v3": "{∅, {u_D}, {u_E}}",
    "v4": "{∅, {u_D}, {u_E}, {u_F}, {u_D,u_E}, {u_D,u_F}, {u_E,u_F}}",
}


def test_c1_family_example_families(verdict):
    start = time.perf_counter()
    ex = family_example()
    names = [ex.child_names[c] for c in ex.pattern.children[0]]
    bad = []
    for variant in ("alginc1", "alginc2"):
        ctx, _ = build_table(ex.pattern, ex.text, variant)
        layout, per_node, _ = cell_families(ctx, 0, ex.text_names["v"], variant)
        for node, want in EXPECTED_FAMILIES.items():
            got = format_family(layout, per_node[ex.text_names[node]], names)
            if got != want:
                bad.append(f"{variant} S(v,{node}) = {got}, expected {want}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1.0
    verdict("C1 family example", ok, "; ".join(bad) or f"10 families exact in {elapsed:.3f}s")
    assert ok, bad


def test_c2_exhaustive_oracle(verdict):
    patterns = enumerate_upto(4)
    texts = enumerate_upto(6)
    bad = []
    for p in patterns:
        for t in texts:
            ref = decide(p, t, "oracle", witness=False)
            for algo in ("km", "alginc1", "alginc2"):
                res = decide(p, t, algo, witness=False)
                if res.included != ref.included or res.minimal_roots != ref.minimal_roots:
                    bad.append((algo, p, t))
    n = len(patterns) * len(texts)
    verdict("C2 exhaustive |P|<=4 |T|<=6", not bad, f"{n} pairs, {len(bad)} disagreements")
    assert not bad, bad[:5]


def test_c3_random_oracle(verdict):
    bad = []
    for seed in range(10_000):
        p, t = random_pair(seed, 8, 14, 3)
        problems = check_pair(p, t)
        if problems:
            bad.append((seed, problems))
    verdict("C3 10000 random instances", not bad, f"{len(bad)} disagreements or invalid witnesses")
    assert not bad, bad[:5]


def _x3c_algos(p: LabeledTree) -> list[str]:
    # occ3 always applies; the set-family algorithms only while 2^d stays small
    algos = ["occ3"]
    if p.degree <= 18:
        algos.append("alginc2")
    if p.degree <= 12:
        algos.append("km")
    return algos


def test_c4_x3c_round_trip(verdict):
    rng = random.Random(2024)
    bad = []
    answers = {True: 0, False: 0}
    runs = 0
    for seed in range(200):
        n = 6 if seed % 2 == 0 else 9
        m = rng.randint(n // 3, min(8, n))
        inst = gen_x3c_random(n, m, seed)
        if parse_x3c(format_x3c(inst)) != inst:
            bad.append((seed, "instance file round trip"))
        red = X3CReduction.build(inst)
        p, t = red.pattern, red.text
        shape = (p.height, t.height, stats(p).OCC, stats(t).OCC)
        if shape != (2, 2, 1, 3):
            bad.append((seed, f"h(P), h(T), OCC(P), OCC(T) = {shape}"))
        truth = x3c_bruteforce(inst)
        answers[truth] += 1
        for algo in _x3c_algos(p):
            runs += 1
            if decide(p, t, algo, witness=False).included != truth:
                bad.append((seed, algo))
    detail = f"{runs} runs, {answers[True]} coverable, {answers[False]} not, {len(bad)} mismatches"
    verdict("C4 X3C round trip", not bad, detail)
    assert not bad, bad[:5]


def _occ_specs(cap: int, count: int):
    sizes = [(8, 20, 3, 10), (10, 28, 4, 14), (12, 36, 4, 16)]
    for seed in range(count):
        pn, tn, deg, labels = sizes[seed % len(sizes)]
        yield GenSpec(seed=seed, pattern_nodes=pn, text_nodes=tn, max_degree=deg, labels=labels,
                      occ_cap=cap, unique_pattern_leaves=True, exact_occ=True)


def test_c5_occ2(verdict):
    bad, branches, included = [], 0, 0
    for spec in _occ_specs(2, 1000):
        p, t = gen_random(spec)
        assert occ_pattern_text(p, t) == 2
        ref = decide(p, t, "alginc2", witness=False)
        res = decide(p, t, "occ2", witness=False)
        branches += res.counters.branches
        included += ref.included
        if res.included != ref.included or res.minimal_roots != ref.minimal_roots:
            bad.append(spec.seed)
    ok = not bad and branches == 0
    verdict("C5 OCC=2 path", ok, f"1000 instances ({included} included), {len(bad)} disagreements, "
            f"{branches} branches")
    assert ok, bad[:5]


def _occ3_instances():
    for spec in _occ_specs(3, 250):
        yield f"random/{spec.seed}", *gen_random(spec)
    sizes = [(6, 12), (8, 14), (8, 16), (10, 20)]
    for seed in range(250):
        d, inner = sizes[seed % len(sizes)]
        yield f"nested/{seed}", *gen_nested_occ(seed, d, inner)


def test_c6_occ3(verdict):
    bad, violations, worst, branchy = [], [], 0.0, 0
    for key, p, t in _occ3_instances():
        assert occ_pattern_text(p, t) == 3
        ref = decide(p, t, "alginc2", witness=False)
        res = decide(p, t, "occ3", witness=False)
        if res.included != ref.included or res.minimal_roots != ref.minimal_roots:
            bad.append(key)
        k = max((c["k"] for c in res.counters.cells), default=0)
        bound = 2 * 1.62 ** k
        branchy += res.counters.branches > 0
        worst = max(worst, res.counters.branches / bound)
        if res.counters.branches > bound:
            violations.append((key, res.counters.branches, k))
    ok = not bad and not violations
    verdict("C6 OCC=3 path", ok, f"500 instances ({branchy} branching), {len(bad)} disagreements, "
            f"{len(violations)} bound violations, max branches/bound {worst:.3f}")
    assert ok, (bad[:5], violations[:5])


def test_c7_star_separation(verdict):
    counts = {}
    for d in range(8, 17):
        p, t = star(d)
        counts[d] = {a: decide(p, t, a, witness=False).counters.set_unions for a in ("km", "alginc2")}
    problems = []
    for d in range(9, 17):
        rk = counts[d]["km"] / counts[d - 1]["km"]
        ra = counts[d]["alginc2"] / counts[d - 1]["alginc2"]
        if not 3.2 <= rk <= 5.2:
            problems.append(f"km ratio {rk:.3f} at d={d}")
        if not 1.6 <= ra <= 2.6:
            problems.append(f"alginc2 ratio {ra:.3f} at d={d}")
    for d in range(10, 17):
        if not counts[d]["alginc2"] < counts[d]["km"]:
            problems.append(f"alginc2 not below km at d={d}")
    last = counts[16]
    verdict("C7 star family exponents", not problems,
            "; ".join(problems) or f"d=16: km {last['km']}, alginc2 {last['alginc2']}")
    assert not problems, problems


def _random_tree(rng: random.Random, n: int) -> LabeledTree:
    parents = [-1] + [rng.randrange(i) for i in range(1, n)]
    return LabeledTree.from_parents(["a"] * n, parents)


def test_c8_sparsity_and_closure(verdict):
    rng = random.Random(8)
    sparse_bad = 0
    for _ in range(1000):
        t = _random_tree(rng, rng.randint(2, 60))
        for v in range(len(t)):
            if t.children[v]:
                dag = virtual_dag(t, v)
                # the vertex set of T'(v) is v itself plus the DAG vertices
                if dag.n_edges > 2 * (len(dag) + 1):
                    sparse_bad += 1
    closure_bad, shapes = 0, 0
    for n in range(1, 8):
        for t in enumerate_ordered_shapes(n):
            shapes += 1
            for v in range(len(t)):
                if not t.children[v]:
                    continue
                want = {(a, b) for a in t.descendants(v) for b in t.descendants(v)
                        if a != b and t.left_of(a, b)}
                if closure_over_real(virtual_dag(t, v)) != want:
                    closure_bad += 1
    ok = sparse_bad == 0 and closure_bad == 0
    verdict("C8 sparsity and closure", ok,
            f"{sparse_bad} edge-bound violations on 1000 trees, {closure_bad} closure mismatches "
            f"over {shapes} shapes")
    assert ok


def test_c9_subsolvers(verdict):
    sat_bad = sat_n = 0
    for inst, truth in _two_sat_instances():
        sat_n += 1
        got = two_sat_solve(inst)
        if (got is not None) != truth or (got is not None and not _satisfies(inst, got)):
            sat_bad += 1
    match_bad = match_n = 0
    for nr, rows in _bipartite_graphs():
        match_n += 1
        edges = {i: [j for j in range(nr) if row >> j & 1] for i, row in enumerate(rows)}
        m, _ = bipartite_match(edges)
        valid = all(r in edges[l] for l, r in m.items()) and len(set(m.values())) == len(m)
        if not valid or len(m) != max_matching_size(rows):
            match_bad += 1
    ok = sat_bad == 0 and match_bad == 0
    verdict("C9 2-SAT and matching", ok,
            f"{sat_n} 2-SAT instances, {sat_bad} wrong; {match_n} graphs, {match_bad} wrong")
    assert ok


def _satisfies(inst: TwoSatInstance, assign: list[bool]) -> bool:
    val = lambda lit: assign[abs(lit) - 1] == (lit > 0)  # noqa: E731
    return all(val(a) or val(b) for a, b in inst.clauses)


def _two_sat_instances():
    """Yield (instance, satisfiable by truth table).

    Every clause set over 1..3 variables with up to 8 clauses and over 4
    variables with up to 4 clauses, then seeded 4-variable sets of 5..8.
    """
    for n, max_k in ((1, 8), (2, 8), (3, 8), (4, 4)):
        clauses = all_clauses(n)
        sat_masks = clause_masks(n, clauses)
        for k in range(max_k + 1):
            for combo in combinations(range(len(clauses)), k):
                mask = sum(1 << i for i in combo)
                inst = TwoSatInstance(n)
                for i in combo:
                    inst.add(*clauses[i])
                yield inst, any(mask & ~sat == 0 for sat in sat_masks)
    rng = random.Random(9)
    clauses = all_clauses(4)
    sat_masks = clause_masks(4, clauses)
    for _ in range(50_000):
        combo = rng.sample(range(len(clauses)), rng.randint(5, 8))
        mask = sum(1 << i for i in combo)
        inst = TwoSatInstance(4)
        for i in combo:
            inst.add(*clauses[i])
        yield inst, any(mask & ~sat == 0 for sat in sat_masks)


def _bipartite_graphs():
    """Every bipartite graph with up to 5+5 vertices, up to reordering the left side."""
    for nl in range(0, 6):
        for nr in range(0, 6):
            for rows in combinations_with_replacement(range(1 << nr), nl):
                yield nr, rows
