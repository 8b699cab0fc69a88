"""Compare the numba and numpy observed-entry kernels.

Times each kernel pair on a matrix-completion sized problem, checks the
two backends agree, then times a full PALM solve under each backend in a
subprocess (the backend is fixed at import time).

    python3 benchmarks/bench_kernels.py [--m 2000] [--n 2000] [--d 10] [--sr 0.05]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from schatten_lr import _kernels


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


SOLVE_SNIPPET = """
import time
from schatten_lr import data, solvers, BACKEND
inst = data.synthetic_mc({m}, {n}, {r}, {sr}, 0.0, 0)
cfg = solvers.PalmConfig(d={d}, mu=2.0, max_iters=1)
solvers.palm_bitr_mc(inst.observations, cfg)  # warm-up / jit
cfg = solvers.PalmConfig(d={d}, mu=2.0, max_iters={iters}, rel_tol=1e-12)
t0 = time.perf_counter()
res = solvers.palm_bitr_mc(inst.observations, cfg)
print(BACKEND, time.perf_counter() - t0, res.trace.objective[-1])
"""


def solve_under(backend, args):
    env = dict(os.environ, SCHATTEN_LR_BACKEND=backend)
    code = SOLVE_SNIPPET.format(m=args.solve_m, n=args.solve_m, r=5, sr=0.3, d=6, iters=args.iters)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    return float(out[1]), float(out[2])


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--m", type=int, default=2000)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--d", type=int, default=10)
    p.add_argument("--sr", type=float, default=0.05)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--solve-m", type=int, default=300)
    p.add_argument("--iters", type=int, default=100)
    args = p.parse_args()

    rng = np.random.default_rng(0)
    count = int(args.sr * args.m * args.n)
    flat = np.sort(rng.choice(args.m * args.n, size=count, replace=False))
    rows, cols = flat // args.n, flat % args.n
    U = rng.standard_normal((args.m, args.d))
    V = rng.standard_normal((args.n, args.d))
    vals = rng.standard_normal(count)
    print(f"|Omega| = {count}, d = {args.d}, numba available: {_kernels.numba is not None}")

    pairs = [
        ("observed_products", lambda k: k(U, V, rows, cols),
         _kernels.observed_products_np, _kernels.observed_products_nb),
        ("sparse_matmul", lambda k: k(rows, cols, vals, V, args.m),
         _kernels.sparse_matmul_np, _kernels.sparse_matmul_nb),
        ("soft_threshold", lambda k: k(vals, 0.5),
         _kernels.soft_threshold_np, _kernels.soft_threshold_nb),
        ("half_threshold", lambda k: k(vals, 0.5),
         _kernels.half_threshold_np, _kernels.half_threshold_nb),
    ]
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}{'max diff':>11}")
    for name, call, k_np, k_nb in pairs:
        a, b = call(k_np), call(k_nb)  # second call also triggers compilation
        diff = float(np.max(np.abs(a - b)))
        t_np = best_of(lambda: call(k_np), args.repeats)
        t_nb = best_of(lambda: call(k_nb), args.repeats)
        print(f"{name:<20}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.1f}{diff:>11.1e}")

    print(f"\nPALM, {args.solve_m}x{args.solve_m}, {args.iters} iterations:")
    results = {b: solve_under(b, args) for b in ("numpy", "numba")}
    for b, (t, obj) in results.items():
        print(f"  {b:<6} {t:7.3f} s  final objective {obj!r}")
    print(f"  speedup {results['numpy'][0] / results['numba'][0]:.2f}x")


if __name__ == "__main__":
    main()
