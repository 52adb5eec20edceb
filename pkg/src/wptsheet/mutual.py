"""Mutual inductance between two spiral coils by filament quadrature of the
Neumann double integral

    M = (mu0 / 4 pi) * sum_ij dot(dl_i, dl_j) / |r_ij|

over straight filaments subdividing each spiral side. Subdivision starts at 8
filaments per side and doubles until two successive estimates agree to 0.5%.
Perpendicular filament pairs contribute exactly zero through the dot product.
"""

from __future__ import annotations

import math

import numpy as np

from ._kernels import pair_sum
from .errors import ValidationError
from .model import MU0, CoilSpec, coil_side_lengths

# filament midpoints closer than this are treated as coincident conductors (m)
_MIN_CLEARANCE_M = 1e-6

DEFAULT_START_FILAMENTS = 8
MAX_FILAMENTS = 256
CONVERGENCE_RTOL = 0.005
_ABS_FLOOR_H = 1e-12


def spiral_filaments(coil: CoilSpec, pose, n_fil: int):
    """Filament midpoints and direction vectors (metres) of a spiral placed at
    pose = (x_mm, y_mm, z_mm), turns traversed ccw."""
    px, py, pz = pose
    mids = []
    dls = []
    for side_mm in coil_side_lengths(coil):
        h = side_mm / 2.0
        corners = ((-h, -h), (h, -h), (h, h), (-h, h))
        for j in range(4):
            x0, y0 = corners[j]
            x1, y1 = corners[(j + 1) % 4]
            dx = (x1 - x0) / n_fil
            dy = (y1 - y0) / n_fil
            for k in range(n_fil):
                mids.append((px + x0 + dx * (k + 0.5), py + y0 + dy * (k + 0.5), pz))
                dls.append((dx, dy, 0.0))
    return (np.asarray(mids, dtype=np.float64) * 1e-3,
            np.asarray(dls, dtype=np.float64) * 1e-3)


def mutual_fixed(coil: CoilSpec, pose_a, pose_b, n_fil: int) -> float:
    """Single quadrature evaluation at a fixed filament count (no refinement).
    This is the simulation-grade estimate used per time step."""
    mid_a, dl_a = spiral_filaments(coil, pose_a, n_fil)
    mid_b, dl_b = spiral_filaments(coil, pose_b, n_fil)
    total, min_d = pair_sum(mid_a, dl_a, mid_b, dl_b)
    if min_d < _MIN_CLEARANCE_M:
        raise ValidationError(
            f"overlapping conductor centerlines: min filament distance {min_d:.3g} m")
    return MU0 / (4.0 * math.pi) * total


def mutual_inductance(coil: CoilSpec, pose_a, pose_b,
                      rtol: float = CONVERGENCE_RTOL,
                      start: int = DEFAULT_START_FILAMENTS,
                      max_fil: int = MAX_FILAMENTS):
    """Refined mutual inductance in henries.

    Returns (M, n_fil_converged). Raises if the refinement ladder is exhausted
    without two successive estimates agreeing to rtol.
    """
    prev = None
    n = start
    while n <= max_fil:
        m = mutual_fixed(coil, pose_a, pose_b, n)
        if prev is not None:
            if abs(m - prev) <= rtol * max(abs(m), _ABS_FLOOR_H):
                return m, n
        prev = m
        n *= 2
    raise ValidationError(
        f"mutual inductance quadrature did not converge to {rtol:.1%} by {max_fil} filaments/side")
