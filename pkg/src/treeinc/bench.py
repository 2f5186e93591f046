"""Benchmark suites: instance families parameterized by d, counters to CSV.

A suite is JSON::

    {"schema": 1, "timeout": 30,
     "families": [
        {"name": "star", "kind": "star", "d": [8, 9, 10], "algos": ["km", "alginc2"]},
        {"name": "occ3", "kind": "nested_occ", "d": [6, 8], "inner": 2.0,
         "seeds": [0, 1, 2], "algos": ["occ3"]},
        {"name": "rnd", "kind": "random", "seeds": [0, 1],
         "spec": {"pattern_nodes": 8, "text_nodes": 20}, "algos": ["alginc2"]},
        {"name": "x3c", "kind": "x3c", "n": 6, "m": 4, "seeds": [0], "algos": ["occ3"]},
        {"name": "dot", "kind": "single", "text_nodes": [10, 50], "algos": ["km"]}
     ]}

Counters are the scaling evidence; wall time is reported alongside.
"""

from __future__ import annotations

import csv
import json
import platform
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from . import _kernels
from .api import decide
from .errors import InstanceTimeout, ResourceCapExceeded, SizeGuardError
from .generators import GenSpec, gen_nested_occ, gen_random, gen_x3c_random, gen_x3c_reduction, star
from .limits import Limits
from .tree import LabeledTree

SCHEMA_VERSION = 1
COLUMNS = ["instance", "algo", "d", "d2", "d3", "k", "setUnions", "branches", "dpCells",
           "timeMicros", "included"]


@dataclass
class Instance:
    id: str
    pattern: LabeledTree
    text: LabeledTree


def _single(n: int) -> tuple[LabeledTree, LabeledTree]:
    p = LabeledTree.from_nested(("a", []))
    t = LabeledTree.from_nested(("a", [("b" if i % 2 else "a", []) for i in range(n - 1)]))
    return p, t


def instances(family: dict) -> Iterator[Instance]:
    kind = family["kind"]
    name = family.get("name", kind)
    if kind == "star":
        for d in family["d"]:
            yield Instance(f"{name}/d={d}", *star(d))
    elif kind == "nested_occ":
        factor = float(family.get("inner", 2.0))
        for d in family["d"]:
            for s in family.get("seeds", [0]):
                p, t = gen_nested_occ(s, d, max(1, round(factor * d)), family.get("occ", 3))
                yield Instance(f"{name}/d={d}/seed={s}", p, t)
    elif kind == "random":
        base = dict(family.get("spec", {}))
        for s in family.get("seeds", [0]):
            spec = GenSpec(seed=s, **base)
            yield Instance(f"{name}/seed={s}", *gen_random(spec))
    elif kind == "x3c":
        for s in family.get("seeds", [0]):
            inst = gen_x3c_random(family["n"], family["m"], s)
            yield Instance(f"{name}/n={family['n']}/m={family['m']}/seed={s}", *gen_x3c_reduction(inst))
    elif kind == "single":
        for n in family["text_nodes"]:
            yield Instance(f"{name}/n={n}", *_single(n))
    else:
        raise ValueError(f"unknown family kind {kind!r}")


def run_one(inst: Instance, algo: str, timeout: float | None) -> dict:
    row = {"instance": inst.id, "algo": algo, "d": inst.pattern.degree}
    limits = Limits.from_env(timeout)
    try:
        res = decide(inst.pattern, inst.text, algo, witness=False, limits=limits)
    except InstanceTimeout:
        row["included"] = "timeout"
        return row
    except (ResourceCapExceeded, SizeGuardError) as exc:
        row["included"] = f"skipped: {exc}"
        return row
    c = res.counters
    cells = c.cells
    row.update(
        d2=max((x["d2"] for x in cells), default=""),
        d3=max((x["d3"] for x in cells), default=""),
        k=max((x["k"] for x in cells), default=""),
        setUnions=c.set_unions,
        branches=c.branches,
        dpCells=c.dp_cells,
        timeMicros=res.wall_time_micros,
        included=res.included,
    )
    return row


def run_suite(suite: dict, out_csv, timeout: float | None = None, log=None) -> list[dict]:
    """Run every (instance, algorithm) pair; rows are written as they finish."""
    timeout = suite.get("timeout", timeout) if timeout is None else timeout
    out_csv = Path(out_csv)
    rows = []
    started = time.time()
    with out_csv.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS, restval="")
        writer.writeheader()
        for family in suite["families"]:
            for inst in instances(family):
                for algo in family["algos"]:
                    row = run_one(inst, algo, timeout)
                    writer.writerow(row)
                    fh.flush()
                    rows.append(row)
                    if log is not None:
                        log(f"{row['instance']} {algo}: {row.get('included')}")
    meta = {
        "schema": SCHEMA_VERSION,
        "columns": COLUMNS,
        "backend": _kernels.get_backend(),
        "python": platform.python_version(),
        "timeout": timeout,
        "suite": suite,
        "seconds": round(time.time() - started, 3),
    }
    Path(str(out_csv) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    return rows


def growth_ratios(rows: list[dict], algo: str, prefix: str, key: str = "setUnions") -> list[tuple[int, float]]:
    """(d, counter(d) / counter(d-1)) for consecutive d in one family."""
    pts = sorted(
        (int(r["d"]), int(r[key]))
        for r in rows
        if r["algo"] == algo and str(r["instance"]).startswith(prefix) and r.get(key, "") != ""
    )
    return [(d1, c1 / c0) for (d0, c0), (d1, c1) in zip(pts, pts[1:]) if d1 == d0 + 1 and c0 > 0]


def load_suite(path) -> dict:
    suite = json.loads(Path(path).read_text())
    if suite.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ValueError(f"unsupported suite schema {suite.get('schema')}")
    if "families" not in suite:
        raise ValueError("suite needs a 'families' list")
    return suite
