"""Compare the compiled and pure-Python canonical-labelling kernels.

Times ``canonical_form`` on a fixed corpus of coloured graphs and a full
``solve_value`` run under each backend, and checks that both backends
produce identical certificates.

    python benchmarks/bench_canon.py [--repeat 3] [--json]
"""

from __future__ import annotations

import argparse
import json
import random
import time

from onlinegraph import canon
from onlinegraph.canon import move_generator
from onlinegraph.game import Problem, solve_value
from onlinegraph.graph_core import family


def corpus(seed: int = 7, count: int = 400):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(4, 14)
        rows = [0] * n
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.4:
                    rows[u] |= 1 << v
                    rows[v] |= 1 << u
        colors = tuple(rng.randint(0, 1) for _ in range(n))
        out.append((tuple(rows), colors))
    # highly symmetric cases stress the search tree
    for name, n in (("complete_bipartite", 6), ("empty", 12), ("complete", 12), ("star", 11)):
        g = family(name, n)
        out.append((g.rows, (0,) * g.n))
    return out


def time_kernel(backend: str, graphs, repeat: int) -> float:
    canon.set_backend(backend)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for rows, colors in graphs:
            canon.canonical_form(rows, colors)
        best = min(best, time.perf_counter() - t0)
    return best


def time_solve(backend: str, repeat: int) -> float:
    canon.set_backend(backend)
    host = family("agi", 2)
    best = float("inf")
    for _ in range(repeat):
        move_generator.cache_clear()
        t0 = time.perf_counter()
        solve_value(host, Problem.IS)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    graphs = corpus()
    backends = canon.available_backends()
    original = canon.BACKEND
    certs = {}
    for b in backends:
        canon.set_backend(b)
        certs[b] = [canon.canonical_form(r, c)[1] for r, c in graphs]
    agree = all(certs[b] == certs["python"] for b in backends)

    results = {"graphs": len(graphs), "backends_agree": agree, "kernel_s": {}, "solve_agi2_s": {}}
    for b in backends:
        results["kernel_s"][b] = round(time_kernel(b, graphs, args.repeat), 4)
        results["solve_agi2_s"][b] = round(time_solve(b, args.repeat), 4)
    if "cython" in backends:
        results["kernel_speedup"] = round(results["kernel_s"]["python"] / results["kernel_s"]["cython"], 2)
        results["solve_speedup"] = round(results["solve_agi2_s"]["python"] / results["solve_agi2_s"]["cython"], 2)
    canon.set_backend(original)

    if args.json:
        print(json.dumps(results, sort_keys=True))
    else:
        print(f"{results['graphs']} coloured graphs, backends agree: {agree}")
        for b in backends:
            print(f"  {b:7s} kernel {results['kernel_s'][b]:.4f} s   solve agi(2) {results['solve_agi2_s'][b]:.4f} s")
        if "kernel_speedup" in results:
            print(f"  speedup: kernel x{results['kernel_speedup']}, solve x{results['solve_speedup']}")
    return 0 if agree else 1


if __name__ == "__main__":
    raise SystemExit(main())
