"""Compare the compiled mod-p kernels against the pure-Python fallback.

Run from the repository root:

    python3 benchmarks/bench_backends.py

Reports wall times for dense mod-p multiplication and row reduction at a
few sizes, and the speedup of the compiled extension (when built).  The
pure implementation is always imported directly; the selected backend is
whatever `diagalg.kernels` picked at import time.
"""

import random
import time

from diagalg import _modp_py
from diagalg import kernels


def bench(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = random.Random(0)
    print(f"selected backend: {kernels.backend_name()}")
    header = f"{'op':<10}{'size':>6}{'p':>6}{'pure (s)':>12}{'selected (s)':>14}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in (20, 40, 80):
        for p in (2, 5, 97):
            a = [rng.randrange(p) for _ in range(n * n)]
            b = [rng.randrange(p) for _ in range(n * n)]
            t_pure = bench(_modp_py.mat_mul_mod, a, b, n, n, n, p)
            t_fast = bench(kernels.mat_mul_mod, a, b, n, n, n, p)
            print(f"{'matmul':<10}{n:>6}{p:>6}{t_pure:>12.4f}{t_fast:>14.4f}"
                  f"{t_pure / t_fast:>9.1f}x")
    for n in (40, 80, 160):
        p = 97
        a = [rng.randrange(p) for _ in range(n * n)]
        t_pure = bench(_modp_py.mat_rref_mod, a, n, n, p)
        t_fast = bench(kernels.mat_rref_mod, a, n, n, p)
        print(f"{'rref':<10}{n:>6}{p:>6}{t_pure:>12.4f}{t_fast:>14.4f}"
              f"{t_pure / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
