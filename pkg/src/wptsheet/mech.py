"""Mechanical model: bending stiffness, cutting-force index, injectability and
cut-leak retention, plus the feasible thickness window they intersect to.

The two thresholds are where the physics forms meet the calibration record:
injection obeys the Young-Laplace entry pressure P = 2*gamma*(1/w + 1/t) of a
non-wetting liquid, retention after a cut holds while the same capillary
pressure beats the scaled hydrostatic head c_leak * rho * g * t.  p_max and
c_leak place the flips exactly at the measured 0.36 mm / 1.92 mm points; the
forms supply the parameter directions, the constants supply the locations.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

from .calibration import Calibration, default_calibration
from .errors import DomainError, ValidationError
from .model import (G_STD, ChannelXSection, DEFAULT_T_GRID, MaterialDb, SheetSpec,
                    T_MAX_ADMISSIBLE, T_MIN_ADMISSIBLE, sheet_thickness)


@dataclass(frozen=True)
class MechReport:
    bending_stiffness: float     # N*m^2 for a one-pitch-wide strip
    cutting_force_index: float   # N, relative model
    injectable: bool
    leak_on_cut: bool
    feasible: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _check_thickness(t: float):
    if not (T_MIN_ADMISSIBLE <= t <= T_MAX_ADMISSIBLE):
        raise ValidationError(
            f"thickness {t} mm outside admissible [{T_MIN_ADMISSIBLE}, {T_MAX_ADMISSIBLE}] mm")


def _with_thickness(xsec: ChannelXSection, t: float | None) -> ChannelXSection:
    if t is None:
        return xsec
    return ChannelXSection(width=xsec.width, thickness=t,
                           spacing=xsec.spacing, wall=xsec.wall)


def bending_stiffness_uncalibrated(spec: SheetSpec, thickness_mm: float | None = None) -> float:
    """Composite-beam EI of a one-pitch-wide strip, N*m^2, before the c_mech
    compliance factor.  Solid skins top and bottom, mid layer webs at the
    spacing/(width+spacing) solid fraction, channel cores contribute nothing.
    """
    x = _with_thickness(spec.coil.xsec, thickness_mm)
    _check_thickness(x.thickness)
    b = spec.pitch * 1e-3
    t = x.thickness * 1e-3
    wall = x.wall * 1e-3
    e = spec.materials.pva_youngs_modulus
    web_fraction = x.spacing / (x.width + x.spacing)
    i_skins = 2.0 * (b * wall ** 3 / 12.0 + b * wall * ((t + wall) / 2.0) ** 2)
    i_webs = web_fraction * b * t ** 3 / 12.0
    return e * (i_skins + i_webs)


def bending_stiffness(spec: SheetSpec, thickness_mm: float | None = None,
                      cal: Calibration | None = None) -> float:
    if cal is None:
        cal = default_calibration()
    return cal.c_mech * bending_stiffness_uncalibrated(spec, thickness_mm)


def cutting_force(spec: SheetSpec, thickness_mm: float | None = None,
                  cal: Calibration | None = None) -> float:
    """Blade force index across one coil cell: shear strength times the solid
    PVA area crossed (skins plus mid-layer webs)."""
    if cal is None:
        cal = default_calibration()
    x = _with_thickness(spec.coil.xsec, thickness_mm)
    b = spec.pitch * 1e-3
    web_fraction = x.spacing / (x.width + x.spacing)
    solid_area = b * (2.0 * x.wall * 1e-3 + web_fraction * x.thickness * 1e-3)
    return cal.c_cut * spec.materials.pva_shear_strength * solid_area


def injection_pressure(width_mm: float, thickness_mm: float, materials: MaterialDb) -> float:
    """Young-Laplace entry pressure for a non-wetting liquid in a rectangular
    channel, Pa."""
    gamma = materials.lm_surface_tension
    return 2.0 * gamma * (1.0 / (width_mm * 1e-3) + 1.0 / (thickness_mm * 1e-3))


def injectable(xsec: ChannelXSection, materials: MaterialDb,
               cal: Calibration | None = None) -> bool:
    if cal is None:
        cal = default_calibration()
    return injection_pressure(xsec.width, xsec.thickness, materials) <= cal.p_max_inject


def retention_ratio(xsec: ChannelXSection, materials: MaterialDb) -> float:
    """Capillary retention pressure over the hydrostatic head rho*g*t.
    Retention holds while this ratio is >= c_leak."""
    head = materials.lm_density * G_STD * xsec.thickness * 1e-3
    return injection_pressure(xsec.width, xsec.thickness, materials) / head


def leak_on_cut(xsec: ChannelXSection, materials: MaterialDb,
                cal: Calibration | None = None) -> bool:
    if cal is None:
        cal = default_calibration()
    return not (retention_ratio(xsec, materials) >= cal.c_leak)


def mech_report(spec: SheetSpec, thickness_mm: float | None = None,
                cal: Calibration | None = None) -> MechReport:
    if cal is None:
        cal = default_calibration()
    x = _with_thickness(spec.coil.xsec, thickness_mm)
    inj = injectable(x, spec.materials, cal)
    leak = leak_on_cut(x, spec.materials, cal)
    return MechReport(
        bending_stiffness=bending_stiffness(spec, x.thickness, cal),
        cutting_force_index=cutting_force(spec, x.thickness, cal),
        injectable=inj,
        leak_on_cut=leak,
        feasible=inj and not leak,
    )


def feasible_window(spec: SheetSpec, cal: Calibration | None = None,
                    grid=DEFAULT_T_GRID):
    """(t_min, t_max) of the feasible thickness set on the grid, or None when
    every grid point fails injectability or leaks on cutting."""
    if cal is None:
        cal = default_calibration()
    feasible_ts = []
    for t in grid:
        x = _with_thickness(spec.coil.xsec, t)
        if injectable(x, spec.materials, cal) and not leak_on_cut(x, spec.materials, cal):
            feasible_ts.append(t)
    if not feasible_ts:
        return None
    return (min(feasible_ts), max(feasible_ts))


def durability_report(spec: SheetSpec, cycles: int = 100,
                      cal: Calibration | None = None) -> dict:
    """Bend-cycling summary. The model treats stiffness and resistance as
    cycle-invariant, so the reported drift is zero by construction; this
    records the constants the claim is anchored to."""
    if cycles < 0:
        raise ValidationError("cycles must be >= 0")
    ei = bending_stiffness(spec, None, cal)
    return {
        "cycles": cycles,
        "bending_stiffness_nm2": ei,
        "bending_stiffness_drift": 0.0,
        "resistance_drift": 0.0,
        "sheet_thickness_mm": sheet_thickness(spec.coil.xsec),
    }


def require_feasible(spec: SheetSpec, cal: Calibration | None = None):
    win = feasible_window(spec, cal)
    if win is None:
        raise DomainError("infeasible design space: no admissible thickness is "
                          "both injectable and leak-free")
    return win
