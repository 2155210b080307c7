#!/usr/bin/env python3
"""Benchmark: compiled motion kernels vs the numpy fallback.

Times the multiplicity and orbit-union kernels on representative instance
sizes and prints a speedup table.  Run after `pip install -e .`:

    python benchmarks/bench_motion_kernels.py
"""

import time

import numpy as np

from packlab._kernels import motion_py
from packlab.ffield import index_add_table
from packlab.rigidpack import motion_domain

try:
    from packlab._kernels import _motion as compiled
except ImportError:
    compiled = None


def build_instance(q, d, theta_frac, e_frac, seed=0):
    rng = np.random.default_rng(seed)
    group = motion_domain(q, d)
    n = q**d
    total = len(group) * n
    tsize = max(1, int(theta_frac * total))
    flat = rng.choice(total, size=tsize, replace=False)
    esize = max(1, int(e_frac * n))
    e_idx = np.sort(rng.choice(n, size=esize, replace=False)).astype(np.int32)
    return (
        (flat // n).astype(np.int32),
        (flat % n).astype(np.int32),
        e_idx,
        group.perm_table(),
        index_add_table(q, d),
    )


def time_fn(fn, args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    cases = [
        (3, 2, 1.0, 1.0),
        (7, 2, 0.5, 0.5),
        (11, 2, 0.5, 0.5),
        (19, 2, 0.25, 0.5),
        (23, 2, 0.25, 0.5),
        (3, 3, 0.5, 0.5),
    ]
    print(f"{'case':>18} {'pairs':>10} {'numpy ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for q, d, tf, ef in cases:
        args = build_instance(q, d, tf, ef)
        pairs = len(args[0]) * len(args[2])
        t_py = time_fn(motion_py.multiplicity_counts, args)
        row = f"q={q} d={d} mult".rjust(18) + f"{pairs:>10}" + f"{1e3 * t_py:>10.2f}"
        if compiled is not None:
            t_c = time_fn(compiled.multiplicity_counts, args)
            lam_py = motion_py.multiplicity_counts(*args)
            lam_c = compiled.multiplicity_counts(*args)
            assert (lam_py == lam_c).all(), "backends disagree"
            row += f"{1e3 * t_c:>12.2f}{t_py / t_c:>8.1f}x"
        else:
            row += f"{'n/a':>12}{'-':>8}"
        print(row)

        t_py = time_fn(motion_py.orbit_mask, args)
        row = f"q={q} d={d} orbit".rjust(18) + f"{pairs:>10}" + f"{1e3 * t_py:>10.2f}"
        if compiled is not None:
            t_c = time_fn(compiled.orbit_mask, args)
            row += f"{1e3 * t_c:>12.2f}{t_py / t_c:>8.1f}x"
        else:
            row += f"{'n/a':>12}{'-':>8}"
        print(row)
    if compiled is None:
        print("\ncompiled extension not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
