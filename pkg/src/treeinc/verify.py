"""Cross-check every applicable algorithm against the brute-force oracle."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .api import decide
from .generators import GenSpec, _Builder, enumerate_upto, gen_random
from .result import mapping_violations
from .tree import LabeledTree, has_unique_leaves, occ_pattern_text, parse_tree, serialize_tree

BASE_ALGOS = ("km", "alginc1", "alginc2")


def applicable(p: LabeledTree, t: LabeledTree) -> list[str]:
    algos = list(BASE_ALGOS)
    if has_unique_leaves(p):
        k = occ_pattern_text(p, t)
        if k <= 2:
            algos.append("occ2")
        if k <= 3:
            algos.append("occ3")
    return algos


def check_pair(p: LabeledTree, t: LabeledTree, algos: Iterable[str] | None = None) -> list[str]:
    """Disagreements with the oracle, as readable strings (empty when all agree)."""
    ref = decide(p, t, "oracle", witness=False)
    problems = []
    for algo in algos or applicable(p, t):
        res = decide(p, t, algo)
        if res.included != ref.included:
            problems.append(f"{algo}: included={res.included}, oracle says {ref.included}")
        elif res.minimal_roots != ref.minimal_roots:
            problems.append(f"{algo}: minimal roots {res.minimal_roots}, oracle {ref.minimal_roots}")
        if res.included:
            bad = mapping_violations(p, t, res.witness or [])
            if bad:
                problems.append(f"{algo}: witness invalid ({bad[0]})")
    return problems


def _contractions(t: LabeledTree) -> Iterator[LabeledTree]:
    for v in range(1, len(t)):
        b = _Builder()
        for x in range(len(t)):
            b.add(t.labels[x], t.parent[x])
        b.contract(v)
        yield b.tree()


def shrink(p: LabeledTree, t: LabeledTree, fails: Callable[[LabeledTree, LabeledTree], bool]):
    """Greedily contract nodes of either tree while the failure persists."""
    changed = True
    while changed:
        changed = False
        for q in _contractions(t):
            if fails(p, q):
                t, changed = q, True
                break
        if changed:
            continue
        for q in _contractions(p):
            if fails(q, t):
                p, changed = q, True
                break
    return p, t


def random_pair(seed: int, max_pattern: int, max_text: int, max_labels: int = 3):
    rng = random.Random(seed)
    pn = rng.randint(1, max_pattern)
    tn = rng.randint(pn, max_text)
    spec = GenSpec(
        seed=seed,
        pattern_nodes=pn,
        text_nodes=tn,
        max_degree=rng.randint(1, 4),
        labels=rng.randint(1, max_labels),
        planted=rng.random() < 0.8,
    )
    return gen_random(spec)


@dataclass
class Report:
    instances: int = 0
    disagreements: list[dict] = field(default_factory=list)
    per_algo: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _job(args):
    kind, key, p_text, t_text = args
    p, t = parse_tree(p_text), parse_tree(t_text)
    algos = applicable(p, t)
    problems = check_pair(p, t, algos)
    return key, algos, problems, p_text, t_text


def _random_jobs(seeds, max_pattern, max_text, max_labels):
    for s in seeds:
        p, t = random_pair(s, max_pattern, max_text, max_labels)
        yield ("random", s, serialize_tree(p), serialize_tree(t))


def _exhaustive_jobs(max_pattern, max_text, labels):
    ps = enumerate_upto(max_pattern, labels)
    ts = enumerate_upto(max_text, labels)
    i = 0
    for p in ps:
        for t in ts:
            yield ("exhaustive", i, serialize_tree(p), serialize_tree(t))
            i += 1


def run_verify(seeds: Iterable[int] = (), max_pattern: int = 8, max_text: int = 14,
               max_labels: int = 3, exhaustive: bool = False, labels=("a", "b"),
               jobs: int = 1, do_shrink: bool = True) -> Report:
    if exhaustive:
        work = _exhaustive_jobs(max_pattern, max_text, labels)
    else:
        work = _random_jobs(seeds, max_pattern, max_text, max_labels)
    report = Report()
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_job, work, chunksize=64))
    else:
        results = map(_job, work)
    for key, algos, problems, p_text, t_text in results:
        report.instances += 1
        for a in algos:
            report.per_algo[a] = report.per_algo.get(a, 0) + 1
        if problems:
            entry = {"key": key, "pattern": p_text, "text": t_text, "problems": problems}
            if do_shrink:
                sp, st = shrink(parse_tree(p_text), parse_tree(t_text), lambda a, b: bool(check_pair(a, b)))
                entry["shrunk"] = [serialize_tree(sp), serialize_tree(st)]
            report.disagreements.append(entry)
    return report
