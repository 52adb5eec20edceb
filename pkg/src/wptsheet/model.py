"""Shared domain types, material constants and derived geometry helpers.

Geometry convention: the JSON surface speaks millimetres (decimal), the
geometry engines work in integer micrometres so that routing and cut
predicates are exact.  Masses are grams, everything else SI.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

from .errors import ValidationError

MU0 = 4e-7 * math.pi
EPS0 = 8.8541878128e-12
G_STD = 9.80665

# admissible channel thickness range, mm
T_MIN_ADMISSIBLE = 0.24
T_MAX_ADMISSIBLE = 4.8

DEFAULT_T_GRID = (0.24, 0.36, 0.48, 0.96, 1.44, 1.92, 2.4, 3.6, 4.8)

LAYER_ROLES = ("coil", "ground_shield", "control")


def to_um(mm: float) -> int:
    """Snap a millimetre coordinate to the integer-micrometre grid."""
    return round(mm * 1000.0)


def to_mm(um: int) -> float:
    return um / 1000.0


def _require_positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class MaterialDb:
    """Material constants. Resistivity in ohm*mm (volume resistivity of the
    liquid-metal fill), the rest SI. All values are overridable calibration
    inputs, not ground truth."""

    lm_resistivity: float = 0.32e-3        # ohm*mm
    lm_density: float = 6440.0             # kg/m^3
    lm_surface_tension: float = 0.55       # N/m
    pva_youngs_modulus: float = 2.0e9      # Pa
    pva_relative_permittivity: float = 2.5
    pva_shear_strength: float = 30e6       # Pa
    contact_resistance_per_joint: float = 11.7e-3  # ohm
    recovery_fraction_per_cycle: float = 0.98

    def __post_init__(self):
        for name in ("lm_resistivity", "lm_density", "lm_surface_tension",
                     "pva_youngs_modulus", "pva_relative_permittivity",
                     "pva_shear_strength"):
            _require_positive(name, getattr(self, name))
        if not (0.0 < self.recovery_fraction_per_cycle <= 1.0):
            raise ValidationError(
                f"recovery_fraction_per_cycle must be in (0, 1], got {self.recovery_fraction_per_cycle}")
        if self.contact_resistance_per_joint < 0:
            raise ValidationError("contact_resistance_per_joint must be >= 0")


@dataclass(frozen=True)
class ChannelXSection:
    """Channel cross-section, mm. `wall` is the solid skin above and below the
    channel layer, so sheet thickness = thickness + 2*wall."""

    width: float = 1.2
    thickness: float = 1.44
    spacing: float = 1.2
    wall: float = 0.48

    def __post_init__(self):
        for name in ("width", "thickness", "spacing", "wall"):
            _require_positive(name, getattr(self, name))

    @property
    def area_mm2(self) -> float:
        return self.width * self.thickness


def sheet_thickness(xsec: ChannelXSection) -> float:
    """Overall slab thickness in mm: channel plus both skins."""
    return xsec.thickness + 2.0 * xsec.wall


@dataclass(frozen=True)
class CoilSpec:
    outer_side: float = 40.0   # mm
    turns: int = 4
    xsec: ChannelXSection = field(default_factory=ChannelXSection)

    def __post_init__(self):
        _require_positive("outer_side", self.outer_side)
        if not (isinstance(self.turns, int) and self.turns >= 1):
            raise ValidationError(f"turns must be an integer >= 1, got {self.turns!r}")


def coil_inner_opening(coil: CoilSpec) -> float:
    """Clear opening left inside the innermost turn, mm.

    outer_side - 2*(turns-1)*(width+spacing) - 2*width; the spiral is
    self-overlapping when this is not positive.
    """
    x = coil.xsec
    return coil.outer_side - 2.0 * (coil.turns - 1) * (x.width + x.spacing) - 2.0 * x.width


def coil_side_lengths(coil: CoilSpec) -> list[float]:
    """Centerline square side length per turn (outermost first), mm.

    Turn i is inset by half the channel width plus i full pitches:
    side_i = outer_side - width - 2*i*(width + spacing).
    """
    if coil_inner_opening(coil) <= 0.0:
        raise ValidationError(
            f"coil spiral self-overlaps: inner opening {coil_inner_opening(coil):.3f} mm <= 0")
    x = coil.xsec
    return [coil.outer_side - x.width - 2.0 * i * (x.width + x.spacing)
            for i in range(coil.turns)]


def coil_conductor_length(coil: CoilSpec) -> float:
    """Total centerline conductor length of the square spiral, mm.

    Per-turn closed square model; the short inter-turn jogs are rendered by
    the exporters but ignored here (sub-1% of total length).
    """
    return 4.0 * sum(coil_side_lengths(coil))


@dataclass(frozen=True)
class SheetSpec:
    grid_order: int = 2                     # grid is 2^k x 2^k coils
    pitch: float = 50.0                     # mm, coil center-to-center
    coil: CoilSpec = field(default_factory=CoilSpec)
    materials: MaterialDb = field(default_factory=MaterialDb)
    frequency: float = 6.78e6               # Hz
    layers: tuple = LAYER_ROLES

    def __post_init__(self):
        if not (isinstance(self.grid_order, int) and self.grid_order >= 1):
            raise ValidationError(f"grid_order must be an integer >= 1, got {self.grid_order!r}")
        _require_positive("pitch", self.pitch)
        _require_positive("frequency", self.frequency)
        object.__setattr__(self, "layers", tuple(self.layers))

    @property
    def grid_size(self) -> int:
        return 2 ** self.grid_order

    def coil_center_mm(self, row: int, col: int) -> tuple[float, float]:
        n = self.grid_size
        return ((col - (n - 1) / 2.0) * self.pitch,
                (row - (n - 1) / 2.0) * self.pitch)

    def coil_center_um(self, row: int, col: int) -> tuple[int, int]:
        n = self.grid_size
        p = to_um(self.pitch)
        # centers sit at odd multiples of pitch/2; require an even pitch in um
        return ((2 * col - (n - 1)) * p // 2, (2 * row - (n - 1)) * p // 2)

    def half_extent_um(self) -> int:
        """Half the sheet side: the sheet is the union of pitch-sized cells."""
        return self.grid_size * to_um(self.pitch) // 2


def validate_sheet(spec: SheetSpec) -> list[str]:
    """Check every domain invariant; returns one message per violation.

    Violations are data, not exceptions: a SheetSpec may hold out-of-window
    values (that is what the sweep explores), but no geometry or model op
    will accept a spec for which this list is non-empty.
    """
    v = []
    x = spec.coil.xsec
    if x.thickness < T_MIN_ADMISSIBLE:
        v.append(f"thickness {x.thickness} mm below admissible {T_MIN_ADMISSIBLE} mm")
    if x.thickness > T_MAX_ADMISSIBLE:
        v.append(f"thickness {x.thickness} mm above admissible {T_MAX_ADMISSIBLE} mm")
    opening = coil_inner_opening(spec.coil)
    if opening <= 0.0:
        v.append(f"turns {spec.coil.turns}: spiral inner opening {opening:.3f} mm <= 0")
    if spec.pitch < spec.coil.outer_side:
        v.append(f"pitch {spec.pitch} mm smaller than coil outer_side {spec.coil.outer_side} mm")
    if tuple(sorted(spec.layers)) != tuple(sorted(LAYER_ROLES)):
        v.append(f"layers must contain exactly {LAYER_ROLES} once each, got {spec.layers}")
    if to_um(spec.pitch) % 2 != 0:
        v.append(f"pitch {spec.pitch} mm is an odd number of um; exact routing needs an even um pitch")
    return v


def sheet_warnings(spec: SheetSpec) -> list[str]:
    """Non-fatal layout advice."""
    w = []
    x = spec.coil.xsec
    clearance = spec.coil.outer_side + 2.0 * (x.width + x.spacing)
    if spec.pitch < clearance:
        w.append(f"pitch {spec.pitch} mm < {clearance} mm: feed routing may cross coil footprints")
    return w


@dataclass(frozen=True)
class RecycleLedger:
    """Per-cycle record of (cycle_index, injected_mass g, recovered_mass g,
    resistivity ohm*mm, contact_resistance ohm)."""

    cycle_records: tuple

    @property
    def final_mass(self) -> float:
        return self.cycle_records[-1][2]


def recycle_project(initial_mass: float, cycles: int, materials: MaterialDb) -> RecycleLedger:
    """Project recovered liquid-metal mass over dissolution/refabrication cycles.

    recovered(n) = initial * r^n with r the recovery fraction; resistivity and
    contact resistance are modelled as cycle-invariant.
    """
    _require_positive("initial_mass", initial_mass)
    if not (isinstance(cycles, int) and cycles >= 0):
        raise ValidationError(f"cycles must be an integer >= 0, got {cycles!r}")
    r = materials.recovery_fraction_per_cycle
    records = [(0, initial_mass, initial_mass,
                materials.lm_resistivity, materials.contact_resistance_per_joint)]
    for n in range(1, cycles + 1):
        records.append((n, initial_mass * r ** (n - 1), initial_mass * r ** n,
                        materials.lm_resistivity, materials.contact_resistance_per_joint))
    return RecycleLedger(cycle_records=tuple(records))


# ---------------------------------------------------------------------------
# JSON surface
# ---------------------------------------------------------------------------

def spec_to_dict(spec: SheetSpec) -> dict:
    d = asdict(spec)
    d["layers"] = list(spec.layers)
    return d


def spec_from_dict(d: dict) -> SheetSpec:
    if not isinstance(d, dict):
        raise ValidationError("sheet spec must be a JSON object")
    known_top = {"grid_order", "pitch", "coil", "materials", "frequency", "layers"}
    _reject_unknown(d, known_top, "spec")
    try:
        coil_d = dict(d.get("coil", {}))
        _reject_unknown(coil_d, {"outer_side", "turns", "xsec"}, "coil")
        xsec_d = dict(coil_d.pop("xsec", {}))
        _reject_unknown(xsec_d, {"width", "thickness", "spacing", "wall"}, "xsec")
        mat_d = dict(d.get("materials", {}))
        _reject_unknown(mat_d, {f for f in MaterialDb.__dataclass_fields__}, "materials")
        return SheetSpec(
            grid_order=d.get("grid_order", 2),
            pitch=d.get("pitch", 50.0),
            coil=CoilSpec(xsec=ChannelXSection(**xsec_d), **coil_d),
            materials=MaterialDb(**mat_d),
            frequency=d.get("frequency", 6.78e6),
            layers=tuple(d.get("layers", LAYER_ROLES)),
        )
    except TypeError as e:
        raise ValidationError(f"bad sheet spec: {e}") from e


def _reject_unknown(d: dict, known: set, where: str):
    unknown = set(d) - known
    if unknown:
        raise ValidationError(f"unknown {where} field(s): {sorted(unknown)}")


def canonical_json(obj) -> str:
    """Canonical serialization: sorted keys, shortest-repr floats, newline-terminated."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def save_spec(spec: SheetSpec, path):
    with open(path, "w") as f:
        f.write(canonical_json(spec_to_dict(spec)))


def load_spec(path) -> SheetSpec:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed spec JSON: {e}") from e
    return spec_from_dict(data)
