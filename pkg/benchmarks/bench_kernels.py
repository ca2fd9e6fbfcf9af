"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Both backends must agree on every instance; the script exits nonzero if not.
"""

import argparse
import sys
import time

import numpy as np

from spectrum import graph as gr
from spectrum.kernels import backends
from spectrum.prob_types import Distribution, NType, type_class, type_graph


def instances(quick):
    C5 = gr.cycle(5)
    U = Distribution.uniform(range(5))
    tg = type_graph(C5, 5, U)
    out = [
        ("max_clique C5^2 (25)", "max_clique", (gr.strong_product(C5, C5).adjacency,)),
        ("max_clique complement Petersen x C5 (50)", "max_clique",
         (gr.complement(gr.strong_product(gr.petersen(), C5)).adjacency,)),
        ("chromatic C5^2 (25)", "chromatic_number", (gr.strong_product(C5, C5).adjacency,)),
        ("chromatic Petersen x K2 (20)", "chromatic_number", (gr.strong_product(gr.petersen(), gr.complete(2)).adjacency,)),
    ]
    if not quick:
        out.append(("max_clique complement C5 type graph (120)", "max_clique", (gr.complement(tg).adjacency,)))
    T = NType(tuple(range(5)), (2, 2, 1, 1, 1))
    seqs = np.array([list(s) for s in type_class(T)], dtype=np.int64)
    reach = C5.adjacency | np.eye(5, dtype=bool)
    out.append((f"strong_adjacency C5 type class ({len(seqs)})", "strong_adjacency", (seqs, reach)))
    return out


def run(fn, args, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, result


def same(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    if isinstance(a, tuple):  # (k, colouring): colourings may differ, counts may not
        return a[0] == b[0]
    return len(a) == len(b) if isinstance(a, list) else a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the slowest instance")
    args = ap.parse_args(argv)
    mods = backends()
    names = [m.BACKEND for m in mods]
    print(f"{'instance':48s}" + "".join(f"{n:>12s}" for n in names) + (f"{'speedup':>10s}" if len(mods) > 1 else ""))
    ok = True
    for label, kernel, kargs in instances(args.quick):
        times, results = [], []
        for m in mods:
            t, r = run(getattr(m, kernel), kargs, args.repeat)
            times.append(t)
            results.append(r)
        agree = all(same(results[0], r) for r in results[1:])
        ok &= agree
        line = f"{label:48s}" + "".join(f"{t:12.4f}" for t in times)
        if len(mods) > 1:
            line += f"{times[-1] / max(times[0], 1e-9):9.1f}x"
        print(line + ("" if agree else "  MISMATCH"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
