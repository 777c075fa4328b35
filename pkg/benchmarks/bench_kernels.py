"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--size N] [--repeat R]

The numba column excludes compilation (one warm-up call per kernel).
"""
import argparse
from time import perf_counter

import numpy as np

from revsym.kernels import numba_impl, numpy_impl


def best_of(fn, args, repeat):
    fn(*args)  # warm-up / compile
    times = []
    for _ in range(repeat):
        start = perf_counter()
        fn(*args)
        times.append(perf_counter() - start)
    return min(times)


def cases(n, rng):
    image = rng.permutation(n).astype(np.int64)
    probs = rng.random(n)
    probs /= probs.sum()
    labels = rng.integers(0, 8, n).astype(np.int64)
    obs = rng.integers(0, 8, 32).astype(np.int64)
    prior = np.ones(n, dtype=np.bool_)
    small = max(n // 500, 16)
    small_image = rng.permutation(small).astype(np.int64)
    small_labels = rng.integers(0, 4, small).astype(np.int64)
    cells = rng.integers(0, 100, n).astype(np.int64)
    src = rng.integers(0, n, 4 * n).astype(np.int64)
    dst = rng.integers(0, n, 4 * n).astype(np.int64)
    amt = np.ones(4 * n, dtype=np.int64)
    return [
        ("cycle_labels", (image,)),
        ("power_image", (image, 12345)),
        ("entropy_bits", (probs,)),
        ("push_forward", (probs, image)),
        ("project", (probs, labels, 8)),
        ("filter_sequence", (image, labels, obs, prior)),
        ("reconstruct_all", (small_image, small_labels, 16)),
        ("apply_transfers", (cells, src, dst, amt)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if numba_impl is None:
        raise SystemExit("numba is not installed")

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<18}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, inputs in cases(args.size, rng):
        t_np = best_of(getattr(numpy_impl, name), inputs, args.repeat)
        t_nb = best_of(getattr(numba_impl, name), inputs, args.repeat)
        print(f"{name:<18}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
