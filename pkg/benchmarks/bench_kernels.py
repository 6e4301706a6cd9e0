"""Compare the numba spline kernels with their numpy fallbacks.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from orbproj import _kernels
from orbproj._jit import HAVE_NUMBA

REPEATS = 20
SIZES = [1_000, 10_000, 100_000, 1_000_000]
ORDERS = [4, 8]


def best_time(fn, knots, ts):
    fn(knots, ts)  # warmup, also triggers compilation
    times = []
    for _ in range(REPEATS):
        start = time.perf_counter()
        fn(knots, ts)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    if not HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'order':>6}{'points':>12}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    print("-" * 68)
    for name in ("cox_de_boor", "truncated_power"):
        np_fn = getattr(_kernels, name + "_np")
        nb_fn = getattr(_kernels, name + "_nb")
        for order in ORDERS:
            knots = np.cumsum(rng.uniform(0.2, 1.0, order + 1))
            for n in SIZES:
                ts = rng.uniform(knots[0], knots[-1], n)
                assert np.allclose(np_fn(knots, ts), nb_fn(knots, ts), rtol=1e-9, atol=1e-12)
                t_np = best_time(np_fn, knots, ts)
                t_nb = best_time(nb_fn, knots, ts)
                print(f"{name:<16}{order:>6}{n:>12,}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
