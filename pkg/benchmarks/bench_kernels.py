"""Benchmark the Monte Carlo hot kernels: numba JIT vs the pure-NumPy fallback.

Runs the ADF-statistic and bounds-F kernels over a grid of replication counts
and sample sizes, with a warmup pass so JIT compilation does not pollute the
numba timings. The same innovation blocks feed both backends, and the results
are cross-checked before timing.

    python benchmarks/bench_kernels.py [--reps 20000] [--quick]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ardlkit._kernels import numba_backend, numpy_backend
from ardlkit.mc import innovations


def _time(fn, *args, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=20000)
    parser.add_argument("--quick", action="store_true", help="smaller grid")
    args = parser.parse_args()

    sizes = [100, 500] if not args.quick else [100]
    reps = args.reps if not args.quick else max(args.reps // 10, 100)

    # Warm up the JIT so compilation is not timed.
    warm = innovations(0, 16, 50)
    numba_backend.df_stats(warm, 1)
    numba_backend.bounds_fstats(innovations(0, 8, 4 * 40).reshape(8, 4, 40), 0, True)

    print(f"{'kernel':<14} {'T':>5} {'reps':>8} {'numpy (s)':>11} {'numba (s)':>11} {'speedup':>8}")
    for T in sizes:
        innov = innovations(42, reps, T)
        a = numpy_backend.df_stats(innov, 1)
        b = numba_backend.df_stats(innov, 1)
        assert np.allclose(a, b, rtol=1e-9), "backend mismatch in df_stats"
        t_np = _time(numpy_backend.df_stats, innov, 1)
        t_nb = _time(numba_backend.df_stats, innov, 1)
        print(f"{'df_stats':<14} {T:>5} {reps:>8} {t_np:>11.3f} {t_nb:>11.3f} {t_np / t_nb:>7.1f}x")

    k = 3
    for T in sizes:
        block = innovations(43, reps // 4, (k + 1) * T).reshape(reps // 4, k + 1, T)
        a = numpy_backend.bounds_fstats(block, 0, True)
        b = numba_backend.bounds_fstats(block, 0, True)
        assert np.allclose(a, b, rtol=1e-7), "backend mismatch in bounds_fstats"
        t_np = _time(numpy_backend.bounds_fstats, block, 0, True)
        t_nb = _time(numba_backend.bounds_fstats, block, 0, True)
        print(
            f"{'bounds_fstats':<14} {T:>5} {reps // 4:>8} {t_np:>11.3f} {t_nb:>11.3f} "
            f"{t_np / t_nb:>7.1f}x"
        )


if __name__ == "__main__":
    main()
