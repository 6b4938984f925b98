"""Compare the compiled kernels against the pure-Python fallback.

Run: python benchmarks/bench_kernels.py [--repeat N]
Prints one line per kernel with the best-of-N time for each backend.
"""
import argparse
import random
import timeit

import numpy as np

from modvertex import _pykernels as pure

try:
    from modvertex import _core as compiled
except ImportError:
    compiled = None


def workloads():
    rng = random.Random(0)
    pairs = [(rng.randint(-50, 50), rng.randint(0, 50), rng.choice((2, 3, 5, 7)))
             for _ in range(10_000)]
    mats = []
    for _ in range(50):
        p = rng.choice((2, 3, 5))
        mats.append(([[rng.randrange(p) for _ in range(40)] for _ in range(60)], 40, p))
    grid_a = np.array([[rng.randint(0, 3) for _ in range(161)] for _ in range(11)])
    grid_b = np.array([[rng.randint(0, 3) for _ in range(161)] for _ in range(11)])

    def binom(k):
        return lambda: [k.binom_mod(b, a, p) for b, a, p in pairs]

    def nullspace(k):
        return lambda: [k.nullspace_mod(m, n, p) for m, n, p in mats]

    def series(k):
        return lambda: k.series_mul2d(grid_a, grid_b, 10)

    return {"binom_mod x10k": binom, "nullspace_mod 60x40 x50": nullspace,
            "series_mul2d 11x161": series}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; only the pure backend is available")
    print(f"{'kernel':28s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>8s}")
    for name, make in workloads().items():
        t_py = min(timeit.repeat(make(pure), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{name:28s} {t_py:12.4f} {'-':>12s} {'-':>8s}")
            continue
        t_c = min(timeit.repeat(make(compiled), number=1, repeat=args.repeat))
        print(f"{name:28s} {t_py:12.4f} {t_c:12.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
