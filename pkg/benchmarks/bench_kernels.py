"""Time the numba kernels against the numpy fallback and check they agree.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from cfdim import kernels

CASES = {
    "log_continuant_table(n=12, M=3)": lambda b: kernels.log_continuant_table(12, 3, backend=b),
    "logsumexp_fixed(5e6)": lambda b: kernels.logsumexp_fixed(_X, backend=b),
    "transfer_matrix(M=256, K=32)": lambda b: kernels.transfer_matrix(0.6, 256, 32, backend=b),
}

_X = np.random.default_rng(0).standard_normal(5_000_000)


def best_of(fn, repeat):
    fn()  # warm-up (jit compile)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':36s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}  max|diff|")
    for name, run in CASES.items():
        a, b = np.asarray(run("numpy")), np.asarray(run("numba"))
        diff = float(np.max(np.abs(a - b)))
        tn = best_of(lambda: run("numpy"), args.repeat)
        tb = best_of(lambda: run("numba"), args.repeat)
        print(f"{name:36s} {tn:10.4f} {tb:10.4f} {tn / tb:8.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
