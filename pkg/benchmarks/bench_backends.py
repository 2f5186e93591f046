"""Compare the numba kernels with the pure-numpy fallback.

Both backends must report identical decisions and counters; only time
differs. Run:

    python benchmarks/bench_backends.py [--max-d 14] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

from treeinc import _kernels
from treeinc.fast import decide as fast_decide
from treeinc.generators import GenSpec, gen_random, star
from treeinc.km import km_decide


def workloads(max_d: int):
    for d in range(8, max_d + 1, 2):
        p, t = star(d)
        yield f"star d={d} alginc2", lambda p=p, t=t: fast_decide(p, t, "alginc2", witness=False)
        if d <= 12:
            yield f"star d={d} km", lambda p=p, t=t: km_decide(p, t, witness=False)
    for s in range(3):
        p, t = gen_random(GenSpec(seed=s, pattern_nodes=12, text_nodes=60, max_degree=6, labels=4))
        yield f"random seed={s} alginc1", lambda p=p, t=t: fast_decide(p, t, "alginc1", witness=False)
        yield f"random seed={s} alginc2", lambda p=p, t=t: fast_decide(p, t, "alginc2", witness=False)


def best_of(fn, repeats: int):
    out, best = None, float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-d", type=int, default=14)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    # compile once so the first row does not pay for jit
    _kernels.set_backend("numba")
    p, t = star(4)
    fast_decide(p, t, "alginc2")
    km_decide(p, t)

    print(f"{'workload':28s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}  same")
    for name, fn in workloads(args.max_d):
        _kernels.set_backend("numba")
        a, ta = best_of(fn, args.repeats)
        _kernels.set_backend("numpy")
        b, tb = best_of(fn, args.repeats)
        same = (a.included, a.minimal_roots, a.counters.as_dict()) == (b.included, b.minimal_roots, b.counters.as_dict())
        print(f"{name:28s} {ta:10.4f} {tb:10.4f} {tb / ta:8.1f}x  {'yes' if same else 'NO'}")
    _kernels.set_backend("numba")


if __name__ == "__main__":
    main()
