"""Hot numeric kernels. The filament pair sum behind mutual inductance is the
inner loop of every power estimate, so it carries a numba @njit version with a
pure-numpy fallback.

Set WPTSHEET_PURE_NUMPY=1 to force the numpy path (also used when numba is not
importable). benchmarks/bench_kernels.py compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

_FORCE_NUMPY = os.environ.get("WPTSHEET_PURE_NUMPY", "").strip().lower() in ("1", "true", "yes")


def _numba_available() -> bool:
    if _FORCE_NUMPY:
        return False
    try:
        import numba  # noqa: F401
        return True
    except ImportError:
        return False


HAVE_NUMBA = _numba_available()


def _pair_sum_numpy(mid_a, dl_a, mid_b, dl_b):
    """sum over filament pairs of dot(dl_a, dl_b)/|mid_a - mid_b| and the
    minimum pair distance, chunked to bound memory."""
    total = 0.0
    min_d = math.inf
    chunk = max(1, 2_000_000 // max(1, mid_b.shape[0]))
    for i0 in range(0, mid_a.shape[0], chunk):
        ma = mid_a[i0:i0 + chunk]
        da = dl_a[i0:i0 + chunk]
        diff = ma[:, None, :] - mid_b[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=2))
        dots = (da[:, None, :] * dl_b[None, :, :]).sum(axis=2)
        m = dist.min()
        if m < min_d:
            min_d = float(m)
        if min_d > 0.0:
            total += float((dots / dist).sum())
    return total, min_d


if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _pair_sum_numba(mid_a, dl_a, mid_b, dl_b):  # pragma: no cover - jitted
        total = 0.0
        min_d = 1e300
        for i in range(mid_a.shape[0]):
            for j in range(mid_b.shape[0]):
                dx = mid_a[i, 0] - mid_b[j, 0]
                dy = mid_a[i, 1] - mid_b[j, 1]
                dz = mid_a[i, 2] - mid_b[j, 2]
                d = math.sqrt(dx * dx + dy * dy + dz * dz)
                if d < min_d:
                    min_d = d
                if d > 0.0:
                    dot = (dl_a[i, 0] * dl_b[j, 0] + dl_a[i, 1] * dl_b[j, 1]
                           + dl_a[i, 2] * dl_b[j, 2])
                    total += dot / d
        return total, min_d

    def pair_sum(mid_a, dl_a, mid_b, dl_b):
        return _pair_sum_numba(mid_a, dl_a, mid_b, dl_b)
else:
    def pair_sum(mid_a, dl_a, mid_b, dl_b):
        return _pair_sum_numpy(mid_a, dl_a, mid_b, dl_b)


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
