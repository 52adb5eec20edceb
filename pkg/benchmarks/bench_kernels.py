#!/usr/bin/env python3
"""Benchmark the mutual-inductance filament kernel: numba @njit vs the pure
numpy fallback. The numpy path is selected by WPTSHEET_PURE_NUMPY=1; here both
are loaded in one process for a side-by-side.

Run: python benchmarks/bench_kernels.py [filaments_per_side ...]
"""

import sys
import time

import numpy as np

from wptsheet._kernels import HAVE_NUMBA, _pair_sum_numpy
from wptsheet.model import CoilSpec
from wptsheet.mutual import spiral_filaments

if HAVE_NUMBA:
    from wptsheet._kernels import _pair_sum_numba
else:
    _pair_sum_numba = None


def bench(fn, args, repeat=5):
    fn(*args)  # warm up (jit compile / cache touch)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return result, best


def main():
    sizes = [int(a) for a in sys.argv[1:]] or [8, 16, 32, 64]
    coil = CoilSpec()
    print(f"numba available: {HAVE_NUMBA}")
    print(f"{'fil/side':>9} {'pairs':>12} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for n in sizes:
        ma, da = spiral_filaments(coil, (0.0, 0.0, 0.0), n)
        mb, db = spiral_filaments(coil, (12.0, 5.0, 10.0), n)
        pairs = ma.shape[0] * mb.shape[0]
        (v_np, _), t_np = bench(_pair_sum_numpy, (ma, da, mb, db))
        if _pair_sum_numba is not None:
            (v_nb, _), t_nb = bench(_pair_sum_numba, (ma, da, mb, db))
            if not np.isclose(v_np, v_nb, rtol=1e-9):
                raise SystemExit(f"kernel mismatch: numpy={v_np!r} numba={v_nb!r}")
            print(f"{n:>9} {pairs:>12} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms "
                  f"{t_np / t_nb:>7.1f}x")
        else:
            print(f"{n:>9} {pairs:>12} {t_np * 1e3:>10.2f}ms {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
