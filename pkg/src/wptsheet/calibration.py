"""Calibration record: the handful of fitted scalars that pin the electrical
and mechanical models to their measured anchor points. A default record ships
with the package; `wptsheet calibrate` regenerates it."""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from importlib import resources

from .errors import ValidationError

# Anchor set used by the shipped calibration.
DEFAULT_ANCHORS = {
    "q_at_design_thickness": 57.5,       # channel t = 1.44 mm
    "q_at_max_thickness": 55.5,          # channel t = 4.8 mm, inside the 55-60 plateau
    "bending_stiffness_target": 2.54e-6,  # N*m^2 at sheet thickness 2.40 mm
    "min_injectable_thickness_mm": 0.36,
    "max_leakfree_thickness_mm": 1.92,
}

DEFAULT_TAN_DELTA = 0.02  # fallback when no Q plateau anchor is supplied


@dataclass(frozen=True)
class Calibration:
    loss_calibration: float   # multiplier on total series loss in Q
    tan_delta_eff: float      # effective dielectric loss tangent
    c_mech: float             # bending-stiffness structural compliance factor
    c_cut: float              # cutting-force scale (no anchor: 1.0)
    p_max_inject: float       # Pa, max injection pressure the fill process delivers
    c_leak: float             # gravity-retention factor in the cut-leak criterion
    anchors: dict
    notes: dict

    def to_dict(self) -> dict:
        return asdict(self)


def calibration_from_dict(d: dict) -> Calibration:
    try:
        return Calibration(
            loss_calibration=float(d["loss_calibration"]),
            tan_delta_eff=float(d["tan_delta_eff"]),
            c_mech=float(d["c_mech"]),
            c_cut=float(d.get("c_cut", 1.0)),
            p_max_inject=float(d["p_max_inject"]),
            c_leak=float(d["c_leak"]),
            anchors=dict(d.get("anchors", {})),
            notes=dict(d.get("notes", {})),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f"bad calibration file: {e}") from e


def save_calibration(cal: Calibration, path):
    with open(path, "w") as f:
        f.write(json.dumps(cal.to_dict(), sort_keys=True, indent=2) + "\n")


def load_calibration(path=None) -> Calibration:
    if path is None:
        return default_calibration()
    try:
        with open(path) as f:
            return calibration_from_dict(json.load(f))
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed calibration JSON: {e}") from e


_DEFAULT = None


def default_calibration() -> Calibration:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("wptsheet").joinpath("data/calibration.json").read_text()
        _DEFAULT = calibration_from_dict(json.loads(text))
    return _DEFAULT
