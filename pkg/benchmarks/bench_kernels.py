"""Compare the compiled kernels with their pure-Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Three workloads: raw union-find traffic, an exhaustive bounded model scan, and an
end-to-end saturation run in a subprocess with and without ``CCNAT_PURE=1``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time

from ccnat._kernels import _pure

try:
    from ccnat._kernels import _ext
except ImportError:  # extension not built
    _ext = None


def union_find(mod, n=200_000, seed=0):
    rng = random.Random(seed)
    uf = mod.UnionFind()
    for _ in range(n):
        uf.add()
    for _ in range(n):
        uf.union(rng.randrange(n), rng.randrange(n))
    roots = 0
    for i in range(n):
        roots += uf.find(i) == i
    return roots


def box_scan(mod):
    # x0 = 40 - x1 - 2 x2 - 3 x3 - x4 with x1..x4 in 0..12; the zero goal never fires, so every point is visited
    free = [1, 2, 3, 4]
    pivots = [(0, 1, 40, [1, 2, 3, 1])]
    return mod.search_box(5, free, [12, 12, 12, 12], pivots, [0] * 5, 0, 0)[1]


E2E = r"""
import time
from ccnat.term import Annot, Context, NAT, Var, App, arrow, eq, plus, numeral
from ccnat.congruence import convertible, clear_caches
from ccnat._kernels import BACKEND
f = Var("f")
ctx = Context()
for i in range(40):
    ctx = ctx.extend(f"x{i}", Annot.U, NAT)
ctx = ctx.extend("f", Annot.U, arrow(NAT, NAT))
for i in range(39):
    lhs = App(f, plus(Var(f"x{i}"), numeral(1)))
    ctx = ctx.extend(f"h{i}", Annot.R, eq(NAT, lhs, plus(Var(f"x{i+1}"), numeral(1))))
t0 = time.perf_counter()
for _ in range(REPEAT):
    clear_caches()
    convertible(ctx, App(f, App(f, plus(Var("x0"), numeral(1)))), App(f, plus(Var("x39"), numeral(1))))
print(BACKEND, (time.perf_counter() - t0) / REPEAT)
"""


def e2e(pure: bool, repeat: int) -> float:
    env = dict(os.environ)
    if pure:
        env["CCNAT_PURE"] = "1"
    else:
        env.pop("CCNAT_PURE", None)
    out = subprocess.run(
        [sys.executable, "-c", E2E.replace("REPEAT", str(repeat))], env=env, capture_output=True, text=True, check=True
    ).stdout.split()
    return float(out[1])


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = []
    for name, fn in (("union-find 2e5", union_find), ("box scan 13^4", box_scan)):
        assert _ext is None or fn(_pure) == fn(_ext), name
        p = best(lambda: fn(_pure), args.repeat)
        c = best(lambda: fn(_ext), args.repeat) if _ext is not None else float("nan")
        rows.append((name, p, c))
    rows.append(("saturation e2e", e2e(True, args.repeat), e2e(False, args.repeat) if _ext else float("nan")))
    if args.json:
        print(json.dumps([{"workload": n, "pure_s": p, "compiled_s": c, "speedup": p / c} for n, p, c in rows]))
        return 0
    print(f"{'workload':<18} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for n, p, c in rows:
        print(f"{n:<18} {p:>10.4f} {c:>13.4f} {p / c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
