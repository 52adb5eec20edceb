"""Per-coil electrical model: DC/AC resistance with skin effect, planar-spiral
inductance, turn-to-turn stray capacitance, self-resonance, Q, and the two-coil
link-efficiency closed form.

Resistance follows the annular-shell model: at frequency f the current rides
in a shell of depth delta around the rectangular channel section, so

    A_eff = w*t - max(0, w - 2*delta) * max(0, t - 2*delta)

collapsing to the full section (r_ac = r_dc) once 2*delta covers the thinner
dimension.  Inductance uses the current-sheet approximation for square planar
spirals,

    L = K1 * mu0 * n^2 * d_avg / (1 + K2 * phi),   K1 = 2.34, K2 = 2.75

with d_out/d_in the physical winding envelope (channel outer edge to the inner
opening).  Stray capacitance is the parallel-plate sidewall model summed over
the n-1 adjacent-turn gaps, which makes C exactly linear in channel thickness;
the Q saturation then comes from a series dielectric loss term

    r_diel = tan_delta_eff * omega^3 * L^2 * C(t)

growing linearly in t while the shell resistance keeps falling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .calibration import Calibration, default_calibration
from .errors import DomainError, ValidationError
from .model import EPS0, MU0, CoilSpec, MaterialDb, coil_conductor_length, \
    coil_inner_opening, coil_side_lengths

K1_SQUARE = 2.34
K2_SQUARE = 2.75


@dataclass(frozen=True)
class ElectricalReport:
    r_dc: float                 # ohm
    r_ac: float                 # ohm
    skin_depth: float           # m
    inductance: float           # H
    stray_capacitance: float    # F
    f_self_resonance: float     # Hz (inf for a single turn)
    q_factor: float
    loss_calibration: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CouplingReport:
    mutual: float           # H
    k_coupling: float
    link_efficiency: float

    def to_dict(self) -> dict:
        return asdict(self)


def skin_depth(materials: MaterialDb, frequency: float) -> float:
    """delta = sqrt(rho / (pi * f * mu0)), metres. rho arrives in ohm*mm."""
    if not frequency > 0:
        raise ValidationError(f"frequency must be positive, got {frequency!r}")
    rho_si = materials.lm_resistivity * 1e-3
    return math.sqrt(rho_si / (math.pi * frequency * MU0))


def coil_resistance(coil: CoilSpec, materials: MaterialDb, frequency: float):
    """(r_dc, r_ac) of the spiral in ohms."""
    w = coil.xsec.width
    t = coil.xsec.thickness
    area = w * t
    if area <= 0:
        raise ValidationError("coil cross-section must have positive area")
    length_mm = coil_conductor_length(coil)
    r_dc = materials.lm_resistivity * length_mm / area
    d = skin_depth(materials, frequency) * 1e3  # mm
    a_eff = area - max(0.0, w - 2.0 * d) * max(0.0, t - 2.0 * d)
    return r_dc, materials.lm_resistivity * length_mm / a_eff


def coil_inductance(coil: CoilSpec) -> float:
    """Current-sheet inductance of the square spiral, henries."""
    opening = coil_inner_opening(coil)
    if opening <= 0:
        raise ValidationError(f"degenerate spiral: inner opening {opening:.3f} mm <= 0")
    d_out = coil.outer_side
    d_in = opening
    d_avg = (d_out + d_in) / 2.0 * 1e-3
    phi = (d_out - d_in) / (d_out + d_in)
    return K1_SQUARE * MU0 * coil.turns ** 2 * d_avg / (1.0 + K2_SQUARE * phi)


def adjacent_turn_length(coil: CoilSpec) -> float:
    """Sum over adjacent-turn gaps of the mean facing perimeter, mm."""
    perims = [4.0 * s for s in coil_side_lengths(coil)]
    return sum((perims[i] + perims[i + 1]) / 2.0 for i in range(coil.turns - 1))


def sidewall_capacitance(thickness_mm: float, facing_length_mm: float,
                         spacing_mm: float, eps_r: float) -> float:
    """Parallel-plate capacitance of facing channel sidewalls, farads."""
    return EPS0 * eps_r * (thickness_mm * 1e-3) * (facing_length_mm * 1e-3) / (spacing_mm * 1e-3)


def stray_capacitance(coil: CoilSpec, materials: MaterialDb) -> float:
    """Total adjacent-turn stray capacitance, farads. Exactly linear in t."""
    if coil.turns < 2:
        return 0.0
    return sidewall_capacitance(coil.xsec.thickness, adjacent_turn_length(coil),
                                coil.xsec.spacing, materials.pva_relative_permittivity)


def self_resonance(inductance: float, capacitance: float) -> float:
    if capacitance <= 0.0:
        return math.inf
    return 1.0 / (2.0 * math.pi * math.sqrt(inductance * capacitance))


def dielectric_series_resistance(coil: CoilSpec, materials: MaterialDb,
                                 frequency: float, tan_delta: float) -> float:
    omega = 2.0 * math.pi * frequency
    ind = coil_inductance(coil)
    return tan_delta * omega ** 3 * ind ** 2 * stray_capacitance(coil, materials)


def q_factor(coil: CoilSpec, materials: MaterialDb, frequency: float,
             cal: Calibration | None = None) -> ElectricalReport:
    """Full electrical report at the operating frequency.

    Q = omega*L / (loss_calibration * (r_ac + r_diel)); refuses to evaluate at
    or above self-resonance.
    """
    if cal is None:
        cal = default_calibration()
    r_dc, r_ac = coil_resistance(coil, materials, frequency)
    ind = coil_inductance(coil)
    cap = stray_capacitance(coil, materials)
    f_sr = self_resonance(ind, cap)
    if frequency >= f_sr:
        raise DomainError(
            f"operating above self-resonance: f={frequency:.4g} Hz >= f_sr={f_sr:.4g} Hz")
    omega = 2.0 * math.pi * frequency
    r_diel = cal.tan_delta_eff * omega ** 3 * ind ** 2 * cap
    q = omega * ind / (cal.loss_calibration * (r_ac + r_diel))
    return ElectricalReport(
        r_dc=r_dc, r_ac=r_ac, skin_depth=skin_depth(materials, frequency),
        inductance=ind, stray_capacitance=cap, f_self_resonance=f_sr,
        q_factor=q, loss_calibration=cal.loss_calibration)


def link_efficiency(q_tx: float, q_rx: float, k_coupling: float) -> float:
    """Optimal-load two-coil link efficiency.

    eta = k^2*Qt*Qr / (1 + sqrt(1 + k^2*Qt*Qr))^2
    """
    if q_tx <= 0 or q_rx <= 0:
        raise ValidationError("Q factors must be positive")
    if not (0.0 <= k_coupling < 1.0):
        raise ValidationError(f"coupling k must be in [0, 1), got {k_coupling!r}")
    x = k_coupling ** 2 * q_tx * q_rx
    return x / (1.0 + math.sqrt(1.0 + x)) ** 2


def coupling_report(mutual: float, l_tx: float, l_rx: float,
                    q_tx: float, q_rx: float) -> CouplingReport:
    k = abs(mutual) / math.sqrt(l_tx * l_rx)
    if k >= 1.0:
        raise DomainError(f"unphysical coupling k={k:.4f} >= 1")
    return CouplingReport(mutual=mutual, k_coupling=k,
                          link_efficiency=link_efficiency(q_tx, q_rx, k))
