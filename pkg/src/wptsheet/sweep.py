"""Thickness sweep, design-point selection and the one-time calibration fit.

Selection uses a knee rule: the smallest feasible thickness whose Q is within
KNEE_FRACTION of the best feasible Q. The measured anchors force the knee
width to about 6% at minimum (the Q plateau must stay above 55 out to 4.8 mm,
which caps how fast Q may saturate), so the default is 7%; it remains
configurable per call.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, asdict

from scipy.optimize import brentq

from . import em, mech
from .calibration import (Calibration, DEFAULT_ANCHORS, DEFAULT_TAN_DELTA)
from .errors import DomainError, ValidationError
from .model import (DEFAULT_T_GRID, SheetSpec, T_MAX_ADMISSIBLE, T_MIN_ADMISSIBLE,
                    ChannelXSection, sheet_thickness)

KNEE_FRACTION = 0.07


@dataclass(frozen=True)
class SweepRow:
    thickness: float
    q_factor: float | None   # None where the channel cannot be filled
    bending_stiffness: float
    cutting_force: float
    injectable: bool
    leak_on_cut: bool
    feasible: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DesignSelection:
    thickness: float
    sheet_thickness: float
    q_factor: float
    objective: str
    justification: str

    def to_dict(self) -> dict:
        return asdict(self)


def _coil_at(spec: SheetSpec, t: float):
    x = spec.coil.xsec
    return type(spec.coil)(outer_side=spec.coil.outer_side, turns=spec.coil.turns,
                           xsec=ChannelXSection(width=x.width, thickness=t,
                                                spacing=x.spacing, wall=x.wall))


def sweep_thickness(spec: SheetSpec, t_grid=DEFAULT_T_GRID,
                    cal: Calibration | None = None) -> list[SweepRow]:
    """One row per grid thickness combining the electrical and mechanical
    models. Rows are de-duplicated and sorted by thickness."""
    for t in t_grid:
        if not (T_MIN_ADMISSIBLE <= t <= T_MAX_ADMISSIBLE):
            raise ValidationError(
                f"grid thickness {t} mm outside [{T_MIN_ADMISSIBLE}, {T_MAX_ADMISSIBLE}] mm")
    rows = []
    for t in sorted(set(t_grid)):
        m = mech.mech_report(spec, t, cal)
        q = None
        if m.injectable:
            q = em.q_factor(_coil_at(spec, t), spec.materials, spec.frequency, cal).q_factor
        rows.append(SweepRow(thickness=t, q_factor=q,
                             bending_stiffness=m.bending_stiffness,
                             cutting_force=m.cutting_force_index,
                             injectable=m.injectable, leak_on_cut=m.leak_on_cut,
                             feasible=m.feasible))
    return rows


def select_design(rows, objective: str = "knee",
                  knee_fraction: float = KNEE_FRACTION,
                  sheet_wall_mm: float = 0.48) -> DesignSelection:
    """Pick the design thickness from a sweep table.

    "knee": smallest feasible t whose Q is within knee_fraction of the best
    feasible Q. "max_q": feasible argmax of Q (ties -> smallest t).
    """
    feasible = sorted({r.thickness: r for r in rows if r.feasible and r.q_factor is not None}
                      .values(), key=lambda r: r.thickness)
    if not feasible:
        raise DomainError("infeasible design space: no feasible sweep rows")
    q_best = max(r.q_factor for r in feasible)
    if objective == "knee":
        threshold = (1.0 - knee_fraction) * q_best
        pick = next(r for r in feasible if r.q_factor >= threshold)
        just = (f"smallest feasible thickness with Q within {knee_fraction:.0%} of the best "
                f"feasible Q ({q_best:.2f}); saturation knee rule, encoding the saturated-Q/"
                f"still-flexible trade-off (the knee width is a tool choice, not a measured value)")
    elif objective == "max_q":
        pick = min((r for r in feasible if r.q_factor == q_best), key=lambda r: r.thickness)
        just = f"feasible thickness maximizing Q (ties broken toward thinner sheets)"
    else:
        raise ValidationError(f"unknown objective {objective!r}")
    return DesignSelection(
        thickness=pick.thickness,
        sheet_thickness=pick.thickness + 2.0 * sheet_wall_mm,
        q_factor=pick.q_factor,
        objective=objective,
        justification=just,
    )


# ---------------------------------------------------------------------------
# Calibration fit
# ---------------------------------------------------------------------------

def calibrate(anchors: dict | None = None, spec: SheetSpec | None = None) -> Calibration:
    """Solve the model calibration constants from the anchor set.

    tan_delta_eff comes from the Q ratio between the design and the maximum
    thickness (bisection; the ratio is monotone in tan_delta). The remaining
    constants follow by direct evaluation of the same expressions the
    predicates use, which keeps the threshold anchors bit-exact on the grid.
    """
    a = dict(DEFAULT_ANCHORS)
    if anchors is not None:
        a.update(anchors)
    if spec is None:
        spec = SheetSpec()
    mats = spec.materials
    freq = spec.frequency

    t_design, t_max = 1.44, T_MAX_ADMISSIBLE
    coil_design = _coil_at(spec, t_design)
    coil_max = _coil_at(spec, t_max)

    q_design = a["q_at_design_thickness"]
    if q_design is None or not q_design > 0:
        raise ValidationError("calibration needs a positive Q anchor at the design thickness")

    def series_loss(coil, tan_delta):
        _, r_ac = em.coil_resistance(coil, mats, freq)
        return r_ac + em.dielectric_series_resistance(coil, mats, freq, tan_delta)

    q_band = a.get("q_at_max_thickness")
    if q_band is None:
        warnings.warn("no Q plateau anchor supplied; tan_delta_eff falls back to "
                      f"{DEFAULT_TAN_DELTA}", stacklevel=2)
        tan_delta = DEFAULT_TAN_DELTA
    else:
        target_ratio = q_design / q_band  # = loss(max)/loss(design), independent of loss_calibration

        def ratio_err(tan_delta):
            return series_loss(coil_max, tan_delta) / series_loss(coil_design, tan_delta) - target_ratio

        lo, hi = 1e-9, 10.0
        if ratio_err(lo) * ratio_err(hi) > 0:
            raise DomainError(
                f"calibration failure: no tan_delta in [{lo}, {hi}] reaches the "
                f"Q plateau anchor {q_band}")
        tan_delta = brentq(ratio_err, lo, hi, rtol=1e-12)

    omega = 2.0 * math.pi * freq
    loss_calibration = (omega * em.coil_inductance(coil_design) / q_design) \
        / series_loss(coil_design, tan_delta)

    ei_target = a["bending_stiffness_target"]
    c_mech = ei_target / mech.bending_stiffness_uncalibrated(spec, t_design)

    t_inject = a["min_injectable_thickness_mm"]
    p_max = mech.injection_pressure(spec.coil.xsec.width, t_inject, mats)

    t_leak = a["max_leakfree_thickness_mm"]
    x_leak = ChannelXSection(width=spec.coil.xsec.width, thickness=t_leak,
                             spacing=spec.coil.xsec.spacing, wall=spec.coil.xsec.wall)
    c_leak = mech.retention_ratio(x_leak, mats)

    return Calibration(
        loss_calibration=loss_calibration,
        tan_delta_eff=tan_delta,
        c_mech=c_mech,
        c_cut=1.0,
        p_max_inject=p_max,
        c_leak=c_leak,
        anchors=a,
        notes={
            "q_at_design_thickness": "plateau midpoint of the measured single-coil Q at the design channel thickness",
            "q_at_max_thickness": "Q held inside the measured 55-60 plateau at the thickest admissible channel",
            "bending_stiffness_target": "three-point-bend stiffness of the designed sheet, N*m^2",
            "min_injectable_thickness_mm": "thinnest channel the liquid metal could be injected into",
            "max_leakfree_thickness_mm": "thickest channel that held its fill when cut open",
        },
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["thickness_mm", "q_factor", "bending_stiffness_nm2",
                "cutting_force_n", "injectable", "leak_on_cut", "feasible"])
    for r in rows:
        w.writerow([r.thickness, "" if r.q_factor is None else repr(r.q_factor),
                    repr(r.bending_stiffness), repr(r.cutting_force),
                    int(r.injectable), int(r.leak_on_cut), int(r.feasible)])
    return buf.getvalue()


def q_curve_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["thickness_mm", "q_factor"])
    for r in rows:
        if r.q_factor is not None:
            w.writerow([r.thickness, repr(r.q_factor)])
    return buf.getvalue()
