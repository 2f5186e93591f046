"""Command line: check, gen, verify, bench.

Exit codes: 0 included / success, 1 not included / disagreement, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .api import ALGOS, decide
from .bench import load_suite, run_suite
from .errors import TreeIncError
from .generators import (GenSpec, format_x3c, gen_nested_occ, gen_random, gen_x3c_random,
                         gen_x3c_reduction, read_x3c, star)
from .limits import Limits
from .tree import read_tree, serialize_tree
from .verify import run_verify

EXIT_OK, EXIT_NO, EXIT_ERR = 0, 1, 2


def _seed_range(text: str) -> range:
    """``A..B`` inclusive, or a single seed. ``5..4`` is empty."""
    if ".." in text:
        a, b = text.split("..", 1)
        return range(int(a), int(b) + 1)
    return range(int(text), int(text) + 1)


def cmd_check(args) -> int:
    p = read_tree(args.pattern)
    t = read_tree(args.text)
    res = decide(p, t, args.algo, witness=not args.no_witness, limits=Limits.from_env(args.timeout))
    if args.json:
        print(res.to_json())
    else:
        verdict = "included" if res.included else "not included"
        print(f"{verdict} (algo {res.algo}); minimal roots: {res.minimal_roots}")
        if res.witness:
            print("witness: " + " ".join(f"{a}->{b}" for a, b in res.witness))
        print("counters: " + json.dumps(res.counters.as_dict()))
    return EXIT_OK if res.included else EXIT_NO


def _emit(p, t, args) -> None:
    if args.out_pattern:
        Path(args.out_pattern).write_text(serialize_tree(p) + "\n")
    if args.out_text:
        Path(args.out_text).write_text(serialize_tree(t) + "\n")
    if not args.out_pattern and not args.out_text:
        print(serialize_tree(p))
        print(serialize_tree(t))


def cmd_gen(args) -> int:
    if args.kind == "random":
        spec = GenSpec(
            seed=args.seed,
            pattern_nodes=args.pattern_nodes,
            text_nodes=args.text_nodes,
            max_degree=args.max_degree,
            labels=args.labels,
            occ_cap=args.occ_cap,
            unique_pattern_leaves=args.unique_leaves,
            planted=not args.unplanted,
            exact_occ=args.exact_occ,
        )
        p, t = gen_random(spec)
    elif args.kind == "x3c":
        inst = read_x3c(args.instance) if args.instance else gen_x3c_random(args.n, args.m, args.seed)
        if args.out_instance:
            Path(args.out_instance).write_text(format_x3c(inst))
        p, t = gen_x3c_reduction(inst)
    elif args.kind == "star":
        p, t = star(args.d)
    else:
        p, t = gen_nested_occ(args.seed, args.d, args.inner or 2 * args.d)
    _emit(p, t, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(
        seeds=_seed_range(args.seeds) if args.seeds else range(0),
        max_pattern=args.max_pattern,
        max_text=args.max_text,
        max_labels=args.labels,
        exhaustive=args.exhaustive,
        labels=tuple("ab"[: args.labels]) if args.exhaustive else ("a", "b"),
        jobs=args.jobs,
    )
    counts = ", ".join(f"{a}={n}" for a, n in sorted(report.per_algo.items()))
    print(f"{report.instances} instances, {len(report.disagreements)} disagreements ({counts})")
    for d in report.disagreements:
        print(f"DISAGREE [{d['key']}] {d['pattern']}  in  {d['text']}")
        for prob in d["problems"]:
            print(f"    {prob}")
        if "shrunk" in d:
            print(f"    minimal: {d['shrunk'][0]}  in  {d['shrunk'][1]}")
    return EXIT_OK if report.ok else EXIT_NO


def cmd_bench(args) -> int:
    suite = load_suite(args.suite)
    log = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    rows = run_suite(suite, args.out, args.timeout, log)
    print(f"{len(rows)} rows written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treeinc", description="Unordered tree inclusion toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide whether a pattern is included in a text")
    c.add_argument("--pattern", required=True, help="pattern tree file")
    c.add_argument("--text", required=True, help="text tree file")
    c.add_argument("--algo", choices=ALGOS, default="auto")
    c.add_argument("--json", action="store_true", help="print the result as JSON")
    c.add_argument("--no-witness", action="store_true", help="skip witness extraction")
    c.add_argument("--timeout", type=float, default=None, help="seconds")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gen", help="generate instances")
    g.add_argument("kind", choices=["random", "x3c", "star", "nested"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--pattern-nodes", type=int, default=6)
    g.add_argument("--text-nodes", type=int, default=14)
    g.add_argument("--max-degree", type=int, default=3)
    g.add_argument("--labels", type=int, default=3, help="alphabet size")
    g.add_argument("--occ-cap", type=int, default=None)
    g.add_argument("--exact-occ", action="store_true", help="make OCC(P,T) equal the cap")
    g.add_argument("--unique-leaves", action="store_true")
    g.add_argument("--unplanted", action="store_true", help="text not grown from the pattern")
    g.add_argument("--n", type=int, default=6, help="x3c: universe size")
    g.add_argument("--m", type=int, default=4, help="x3c: number of triples")
    g.add_argument("--instance", help="x3c: read the instance from this file")
    g.add_argument("--out-instance", help="x3c: write the instance here")
    g.add_argument("--d", type=int, default=8, help="star / nested: pattern degree")
    g.add_argument("--inner", type=int, default=None, help="nested: number of inner text nodes")
    g.add_argument("--out-pattern")
    g.add_argument("--out-text")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="cross-check algorithms against the oracle")
    v.add_argument("--seeds", default="", help="A..B (inclusive)")
    v.add_argument("--max-pattern", type=int, default=8)
    v.add_argument("--max-text", type=int, default=14)
    v.add_argument("--labels", type=int, default=3, help="alphabet size bound")
    v.add_argument("--exhaustive", action="store_true",
                   help="every pair up to the size bounds (labels from {a,b})")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run a benchmark suite into a CSV file")
    b.add_argument("--suite", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--timeout", type=float, default=None, help="per-instance seconds")
    b.add_argument("--verbose", action="store_true")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TreeIncError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERR


if __name__ == "__main__":
    sys.exit(main())
