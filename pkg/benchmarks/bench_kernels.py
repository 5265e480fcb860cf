"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two hot paths (Pauli expectation over the amplitude vector,
and the per-direction candidate scan inside settings maximization) on
both backends and prints the speedup.

    python3 benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from bellmono import _kernels_numba as knb
from bellmono import _kernels_numpy as knp
from bellmono.pauli import parse_label


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_expval(repeats):
    rng = np.random.default_rng(0)
    rows = []
    for n in (10, 12, 14):
        amps = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
        amps /= np.linalg.norm(amps)
        p = parse_label(("XY" * n)[:n])
        args = (amps, p.x_mask, p.z_mask, p.n_y % 4)
        knb.expval(*args)  # compile outside the timing
        loops = 200
        t_nb = timeit(lambda: [knb.expval(*args) for _ in range(loops)], repeats) / loops
        t_np = timeit(lambda: [knp.expval(*args) for _ in range(loops)], repeats) / loops
        rows.append((f"expval n={n}", t_nb, t_np))
    return rows


def bench_scan(repeats):
    rng = np.random.default_rng(1)
    # triangle-like joint problem: two 2-party experiments sharing party 0
    tensors = np.concatenate([rng.uniform(-1, 1, 9), rng.uniform(-1, 1, 9)])
    t_off = np.array([0, 9, 18], dtype=np.int64)
    parties = np.array([0, 1, 0, 2], dtype=np.int64)
    p_off = np.array([0, 2, 4], dtype=np.int64)
    settings = rng.standard_normal((3, 2, 3))
    settings /= np.linalg.norm(settings, axis=2, keepdims=True)
    cands = rng.standard_normal((576, 3))
    cands /= np.linalg.norm(cands, axis=1, keepdims=True)
    args = (tensors, t_off, parties, p_off, settings, 0, 0, 0, cands)
    knb.scan_direction(*args)
    t_nb = timeit(lambda: knb.scan_direction(*args), repeats)
    t_np = timeit(lambda: knp.scan_direction(*args), repeats)
    return [("scan 576 dirs (2 exps)", t_nb, t_np)]


def bench_objective(repeats):
    rng = np.random.default_rng(2)
    # tree-like joint problem: four 3-party experiments on 7 parties
    subs = [(0, 1, 3), (0, 1, 4), (0, 2, 5), (0, 2, 6)]
    tensors = np.concatenate([rng.uniform(-1, 1, 27) for _ in subs])
    t_off = np.array([0, 27, 54, 81, 108], dtype=np.int64)
    parties = np.array([q for s in subs for q in s], dtype=np.int64)
    p_off = np.array([0, 3, 6, 9, 12], dtype=np.int64)
    settings = rng.standard_normal((7, 2, 3))
    settings /= np.linalg.norm(settings, axis=2, keepdims=True)
    values = np.empty(4)
    args = (tensors, t_off, parties, p_off, settings, 0, values)
    knb.joint_objective(*args)
    loops = 1000
    t_nb = timeit(lambda: [knb.joint_objective(*args) for _ in range(loops)], repeats) / loops
    t_np = timeit(lambda: [knp.joint_objective(*args) for _ in range(loops)], repeats) / loops
    return [("objective (4x3-party)", t_nb, t_np)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    rows = []
    rows += bench_expval(args.repeats)
    rows += bench_scan(args.repeats)
    rows += bench_objective(args.repeats)
    print(f"{'kernel':<24} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for name, t_nb, t_np in rows:
        print(f"{name:<24} {t_nb * 1e6:>10.1f}us {t_np * 1e6:>10.1f}us "
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
