"""Time the numba kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_backends.py [--n 1000000] [--k 3] [--repeat 3]
"""
import argparse
import time

import numpy as np

from partgauss import _kernels_numba as nb_kernels
from partgauss import _kernels_numpy as np_kernels
from partgauss.dist import seed_key
from partgauss.stats import frequency_grid


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(k, n):
    k0, k1 = seed_key(12345)
    idx = np.arange(n, dtype=np.int64)
    offsets = np.array([0, 5, 9], dtype=np.int64)
    bases = (offsets.max() + k) * np.arange(n // 3, dtype=np.int64)
    samples = np.random.default_rng(0).normal(size=(n, k))
    grid = frequency_grid(k)
    return {
        "draw_vectors": lambda m: m.draw_vectors(k0, k1, k, 1.0, idx),
        "path_values": lambda m: m.path_values(k0, k1, k, 1.0, 0, n),
        "window_values": lambda m: m.window_values(k0, k1, k, 1.0, offsets, bases),
        "ecf_sums": lambda m: m.ecf_sums(samples, grid),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1_000_000, help="vectors / path steps per call")
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    print(f"n={args.n} k={args.k} best of {args.repeat}")
    print(f"{'kernel':15s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, run in cases(args.k, args.n).items():
        run(nb_kernels)  # compile
        t_nb = best_of(lambda: run(nb_kernels), args.repeat)
        t_np = best_of(lambda: run(np_kernels), args.repeat)
        print(f"{name:15s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
