"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--n 3] [--repeat 3]

Reports the best of ``--repeat`` wall times per kernel and path, plus the
largest difference between the two results (for ratio_simplex only up to the
optimiser stopping tolerance, since rounding steers the simplex).  The first
numba call is timed separately since it includes compilation or a cache load.
"""
import argparse
import time

import numpy as np

from spectralset import _kernels
from spectralset.ranges import _hermitian_parts, _qrange_starts


def best_time(fn, repeat):
    out = None
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(n, seed):
    rng = np.random.default_rng(seed)
    A = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)
    th = np.arange(512) * (2 * np.pi / 512)
    Hs = _hermitian_parts(A, th)
    X0 = _qrange_starts(Hs, 32, seed)
    eye = np.eye(n, dtype=complex)
    sig = 1.5 * np.exp(1j * th)
    coeffs = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    x0 = rng.standard_normal(9)
    return {
        "sphere_ascent (512 x 32 starts)":
            lambda nb: _kernels.sphere_ascent(Hs, A, eye, 0.75, X0, use_numba=nb)[0].max(axis=1),
        "poly_eval (degree 8, 512 nodes)":
            lambda nb: np.array([_kernels.poly_eval(A, 0j, coeffs, sig, use_numba=nb)[0]]),
        "ratio_simplex (degree 5, 512 nodes)":
            lambda nb: np.array([_kernels.ratio_simplex(A, 0j, sig, 1, True, x0, 1e-9, 1e-9,
                                                        4000, use_numba=nb)[1]]),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"n = {args.n}, numba {_kernels.numba.__version__}, "
          f"threads {_kernels.numba.get_num_threads()}")
    print(f"{'kernel':<38}{'first ms':>10}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}"
          f"{'max diff':>11}")
    for name, fn in cases(args.n, args.seed).items():
        t0 = time.perf_counter()
        fn(True)
        first = time.perf_counter() - t0
        t_nb, a = best_time(lambda: fn(True), args.repeat)
        t_np, b = best_time(lambda: fn(False), args.repeat)
        diff = float(np.max(np.abs(a - b)))
        print(f"{name:<38}{1e3 * first:>10.2f}{1e3 * t_nb:>10.3f}{1e3 * t_np:>10.3f}"
              f"{t_np / t_nb:>8.1f}x{diff:>11.2e}")


if __name__ == "__main__":
    main()
