"""Time the compiled and pure-Python graph kernels on the convergence basket.

    python3 benchmarks/bench_solver.py [--repeat 200] [--d 0.05 0.00625]

Prints one row per (coupling, d) with the mean solve time of each backend,
the speedup and the largest entry-wise disagreement between the two.
"""

import argparse
import timeit

import numpy as np

from ftgraph import CouplingST, build_approximation, solve_scattering, solver

BASKET = {
    "free2": CouplingST(2, 1, [[1.0]]),
    "t2": CouplingST(2, 1, [[2.0]]),
    "ti": CouplingST(2, 1, [[1j]]),
    "n3m1": CouplingST(3, 1, [[2.0, 1j]]),
    "n3m2": CouplingST(3, 2, [[1.0], [1j]]),
    "n4m2": CouplingST(4, 2, 0.5 * np.ones((2, 2))),
    "n8m4": CouplingST(8, 4, np.exp(1j * np.arange(16).reshape(4, 4))),
}


def time_backend(name, graph, k, repeat):
    solver.set_backend(name)
    S = solve_scattering(graph, k).S
    t = timeit.timeit(lambda: solve_scattering(graph, k), number=repeat) / repeat
    return S, t


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--d", type=float, nargs="+", default=[0.05, 0.00625])
    args = ap.parse_args()

    if "compiled" not in solver.available_backends():
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
    old = solver.get_backend()
    print(f"{'coupling':8s} {'d':>9s} {'unknowns':>8s} {'compiled us':>12s} {'python us':>10s} {'speedup':>8s} {'max diff':>9s}")
    try:
        for name, c in BASKET.items():
            for d in args.d:
                g = build_approximation(c, d)
                Sc, tc = time_backend("compiled", g, args.k, args.repeat)
                Sp, tp = time_backend("python", g, args.k, args.repeat)
                size = g.n + 2 * len(g.connectors)
                diff = np.abs(Sc - Sp).max()
                print(f"{name:8s} {d:9.5f} {size:8d} {tc * 1e6:12.1f} {tp * 1e6:10.1f} {tp / tc:8.1f} {diff:9.1e}")
    finally:
        solver.set_backend(old)


if __name__ == "__main__":
    main()
