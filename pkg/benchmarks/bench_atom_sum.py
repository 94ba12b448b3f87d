"""Timing of the compiled atom-sum kernel against the numpy fallback.

    python benchmarks/bench_atom_sum.py [--repeat 5]

Prints one line per problem size with the best wall time of each backend,
the speed-up and the largest absolute difference between the two results.
"""

import argparse
import time

import numpy as np

from herglotz_lab import _kernels_py

try:
    from herglotz_lab import _kernels
except ImportError:
    _kernels = None

SIZES = [(50, 1, 200), (500, 1, 2000), (2000, 2, 1000), (200, 4, 2000)]


def best_time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def problem(n_atoms, dim, n_points, seed=0):
    rng = np.random.default_rng(seed)
    pos = np.sort(rng.uniform(-50, 50, n_atoms))
    G = rng.standard_normal((n_atoms, dim, dim)) + 1j * rng.standard_normal((n_atoms, dim, dim))
    W = G @ np.conj(np.transpose(G, (0, 2, 1))) / dim
    zs = rng.uniform(-60, 60, n_points) + 1j * rng.uniform(1e-3, 5, n_points)
    return pos, W, zs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernel not built; only the fallback is available")
    print(f"{'atoms':>6} {'dim':>4} {'points':>7} {'python s':>10} {'cython s':>10} {'speedup':>8} {'max diff':>10}")
    for n_atoms, dim, n_points in SIZES:
        data = problem(n_atoms, dim, n_points)
        tp, ref = best_time(_kernels_py.atom_sum, data, args.repeat)
        if _kernels is None:
            print(f"{n_atoms:>6} {dim:>4} {n_points:>7} {tp:>10.4f} {'-':>10} {'-':>8} {'-':>10}")
            continue
        tc, out = best_time(_kernels.atom_sum, data, args.repeat)
        diff = float(np.max(np.abs(out - ref)))
        print(f"{n_atoms:>6} {dim:>4} {n_points:>7} {tp:>10.4f} {tc:>10.4f} {tp / tc:>8.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
