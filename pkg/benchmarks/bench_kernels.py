"""Compare the numba and numpy row-reduction kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeats R] [--suite-trials T]``.
Two measurements per backend: raw ``rref`` on random dense matrices, and an
end-to-end run of the thm11 suite (which exercises resolutions, Ext and Tor).
Results are also checked for bit-identity across backends.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from phantomkit import exactla as la
from phantomkit import functors, resolve
from phantomkit.theoremlab import TrialConfig, run_suite

SHAPES = [(8, 8), (32, 32), (64, 96), (128, 128), (256, 256)]
PRIMES = [2, 3, 46337]


def _best(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_rref(repeats: int) -> list[tuple]:
    rng = np.random.default_rng(0)
    rows = []
    for p in PRIMES:
        for shape in SHAPES:
            m = rng.integers(0, p, shape)
            out = {}
            for name in ("numba", "numpy"):
                la.set_backend(name)
                la.rref(m, p)  # warm-up, includes JIT compilation
                out[name] = (_best(lambda: la.rref(m, p), repeats), la.rref(m, p))
            same = np.array_equal(out["numba"][1][0], out["numpy"][1][0])
            rows.append((p, shape, out["numba"][0], out["numpy"][0], same))
    return rows


def bench_suite(trials: int) -> dict[str, tuple[float, str]]:
    res = {}
    for name in ("numba", "numpy"):
        la.set_backend(name)
        resolve.clear_cache()
        functors.clear_caches()
        t0 = time.perf_counter()
        rep = run_suite("thm11", TrialConfig(trials=trials, theorems=("thm11",)))
        res[name] = (time.perf_counter() - t0, rep.to_json())
    return res


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--suite-trials", type=int, default=20)
    args = ap.parse_args()
    start = la.backend()

    print(f"{'p':>6} {'shape':>10} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8} same")
    for p, shape, tn, tp, same in bench_rref(args.repeats):
        print(f"{p:>6} {str(shape):>10} {tn * 1e3:>10.3f} {tp * 1e3:>10.3f} {tp / tn:>8.1f} {same}")

    suite = bench_suite(args.suite_trials)
    (tn, jn), (tp, jp) = suite["numba"], suite["numpy"]
    print(f"\nthm11 suite, {args.suite_trials} trials per algebra (cold caches):")
    print(f"  numba {tn:.2f}s   numpy {tp:.2f}s   speedup {tp / tn:.1f}x   identical reports: {jn == jp}")
    la.set_backend(start)


if __name__ == "__main__":
    main()
