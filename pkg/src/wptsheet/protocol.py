"""Discrete-time simulation of selective power delivery: a receiver device
moves over the sheet, per-coil detection fires inside r_detect (with a small
hysteresis band against boundary chatter), and the switching policy drives the
k_max nearest detected coils. Delivered power per active coil is
input_power * link_efficiency at the instantaneous coupling.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import em
from .calibration import Calibration, default_calibration
from .cuts import CutReport
from .errors import ValidationError
from .htree import RoutingTree
from .model import CoilSpec, SheetSpec
from .mutual import mutual_fixed

SIM_FILAMENTS = 16   # quadrature grade for per-step power estimates
DEFAULT_HYSTERESIS = 0.05


@dataclass(frozen=True)
class RxDevice:
    path: tuple                  # ((t_s, x_mm, y_mm), ...) strictly increasing t
    coil: CoilSpec
    q_rx: float
    height: float = 3.0          # mm above the sheet

    def __post_init__(self):
        if not self.path:
            raise ValidationError("rx path is empty")
        for t, x, y in self.path:
            if not all(math.isfinite(v) for v in (t, x, y)):
                raise ValidationError("rx path has non-finite coordinates")
        times = [p[0] for p in self.path]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("rx path times must be strictly increasing")
        if not self.height > 0:
            raise ValidationError("rx height must be positive")

    def position(self, t: float):
        pts = self.path
        if t <= pts[0][0]:
            return pts[0][1], pts[0][2]
        if t >= pts[-1][0]:
            return pts[-1][1], pts[-1][2]
        for (t0, x0, y0), (t1, x1, y1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                a = (t - t0) / (t1 - t0)
                return x0 + a * (x1 - x0), y0 + a * (y1 - y0)
        return pts[-1][1], pts[-1][2]


@dataclass(frozen=True)
class Policy:
    r_detect: float              # mm; default pitch/2 supplied by make_policy
    k_max: int = 1
    input_power: float = 1.0     # normalized
    hysteresis: float = DEFAULT_HYSTERESIS


def make_policy(spec: SheetSpec, r_detect: float | None = None, k_max: int = 1,
                input_power: float = 1.0) -> Policy:
    return Policy(r_detect=spec.pitch / 2.0 if r_detect is None else r_detect,
                  k_max=k_max, input_power=input_power)


def make_rx(spec: SheetSpec, path, q_rx: float | None = None,
            height: float = 3.0, coil: CoilSpec | None = None,
            cal: Calibration | None = None) -> RxDevice:
    if coil is None:
        coil = spec.coil
    if q_rx is None:
        q_rx = em.q_factor(coil, spec.materials, spec.frequency, cal).q_factor
    return RxDevice(path=tuple(tuple(p) for p in path), coil=coil, q_rx=q_rx, height=height)


@dataclass(frozen=True)
class SimTrace:
    events: tuple   # (t, kind, (row, col), value)

    def to_ndjson(self) -> str:
        lines = []
        for t, kind, coil, value in self.events:
            lines.append(json.dumps(
                {"t": t, "kind": kind, "coil": [coil[0], coil[1]], "value": value}))
        return "\n".join(lines) + ("\n" if lines else "")


class _DetectState:
    """Per-coil hysteresis latch: on at d <= r, off only past d > r*(1+h)."""

    def __init__(self, r_detect, hysteresis):
        self.r_on = r_detect
        self.r_off = r_detect * (1.0 + hysteresis)
        self.on = False

    def step(self, dist) -> bool:
        if self.on:
            if dist > self.r_off:
                self.on = False
        else:
            if dist <= self.r_on:
                self.on = True
        return self.on


def _power_for(spec, rx, coil_pos, rx_pos, q_tx, policy, cal):
    m = mutual_fixed(spec.coil, (coil_pos[0], coil_pos[1], 0.0),
                     (rx_pos[0], rx_pos[1], rx.height), SIM_FILAMENTS)
    l_tx = em.coil_inductance(spec.coil)
    l_rx = em.coil_inductance(rx.coil)
    k = abs(m) / math.sqrt(l_tx * l_rx)
    if k >= 1.0:
        k = math.nextafter(1.0, 0.0)
    return policy.input_power * em.link_efficiency(q_tx, rx.q_rx, k)


def run_sim(spec: SheetSpec, tree: RoutingTree, cut_report: CutReport,
            rx: RxDevice, policy: Policy | None = None, dt: float = 0.1,
            cal: Calibration | None = None) -> SimTrace:
    """Step the detection/switching protocol along the rx path.

    Event order inside a step is fixed (detect transitions, switch-offs,
    switch-ons, power samples; coils ascending), so the trace is bit-stable.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt!r}")
    if cal is None:
        cal = default_calibration()
    if policy is None:
        policy = make_policy(spec)
    q_tx = em.q_factor(spec.coil, spec.materials, spec.frequency, cal).q_factor
    survivors = list(cut_report.surviving_coils)
    centers = {c: spec.coil_center_mm(*c) for c in survivors}
    det = {c: _DetectState(policy.r_detect, policy.hysteresis) for c in survivors}

    events = []
    active_prev: set = set()
    t0 = rx.path[0][0]
    t1 = rx.path[-1][0]
    steps = max(1, math.ceil((t1 - t0) / dt - 1e-12)) + 1
    for i in range(steps):
        t = min(t0 + i * dt, t1)
        x, y = rx.position(t)
        detected = []
        for c in survivors:
            cx, cy = centers[c]
            dist = math.hypot(x - cx, y - cy)
            was = det[c].on
            now = det[c].step(dist)
            if now != was:
                events.append((t, "detect_on" if now else "detect_off", c, dist))
            if now:
                detected.append((dist, c))
        detected.sort(key=lambda dc: (dc[0], dc[1]))
        active = {c for _, c in detected[:policy.k_max]}
        for c in sorted(active_prev - active):
            events.append((t, "switch_off", c, 0.0))
        for c in sorted(active - active_prev):
            events.append((t, "switch_on", c, 1.0))
        for c in sorted(active):
            p = _power_for(spec, rx, centers[c], (x, y), q_tx, policy, cal)
            events.append((t, "power_sample", c, p))
        active_prev = active
    return SimTrace(events=tuple(events))


@dataclass(frozen=True)
class CoverageField:
    xs: tuple      # mm
    ys: tuple      # mm
    values: tuple  # row-major [iy][ix], delivered power

    def to_csv(self) -> str:
        lines = ["x_mm\\y_mm," + ",".join(repr(x) for x in self.xs)]
        for iy, y in enumerate(self.ys):
            lines.append(repr(y) + "," + ",".join(repr(v) for v in self.values[iy]))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"xs_mm": list(self.xs), "ys_mm": list(self.ys),
                "values": [list(r) for r in self.values]}

    def max_value(self):
        best = (0.0, None)
        for iy, y in enumerate(self.ys):
            for ix, x in enumerate(self.xs):
                if self.values[iy][ix] > best[0]:
                    best = (self.values[iy][ix], (x, y))
        return best


def instantaneous_state(spec: SheetSpec, cut_report: CutReport, rx_pos,
                        rx: RxDevice | None = None, policy: Policy | None = None,
                        cal: Calibration | None = None) -> dict:
    """Detection/switch/power snapshot for one rx pose (no hysteresis memory).
    Shared by the coverage map and the HTTP /sim/step endpoint."""
    if cal is None:
        cal = default_calibration()
    if policy is None:
        policy = make_policy(spec)
    if rx is None:
        rx = make_rx(spec, path=((0.0, rx_pos[0], rx_pos[1]),), cal=cal)
    q_tx = em.q_factor(spec.coil, spec.materials, spec.frequency, cal).q_factor
    x, y = rx_pos
    detected = []
    for c in cut_report.surviving_coils:
        cx, cy = spec.coil_center_mm(*c)
        dist = math.hypot(x - cx, y - cy)
        if dist <= policy.r_detect:
            detected.append((dist, tuple(c)))
    detected.sort(key=lambda dc: (dc[0], dc[1]))
    active = [c for _, c in detected[:policy.k_max]]
    power = []
    for c in active:
        p = _power_for(spec, rx, spec.coil_center_mm(*c), (x, y), q_tx, policy, cal)
        power.append({"coil": [c[0], c[1]], "value": p})
    return {
        "rx": {"x_mm": x, "y_mm": y, "height_mm": rx.height},
        "detected": [[c[0], c[1]] for _, c in detected],
        "active": [[c[0], c[1]] for c in active],
        "power": power,
        "total_power": math.fsum(p["value"] for p in power),
    }


def coverage_map(spec: SheetSpec, tree: RoutingTree, cut_report: CutReport,
                 rx: RxDevice | None = None, grid_step: float = 25.0,
                 policy: Policy | None = None,
                 cal: Calibration | None = None) -> CoverageField:
    """Best-case delivered power with the rx centered at each grid point."""
    if not grid_step > 0:
        raise ValidationError(f"grid_step must be positive, got {grid_step!r}")
    if cal is None:
        cal = default_calibration()
    if policy is None:
        policy = make_policy(spec)
    half = spec.half_extent_um() / 1000.0
    n_pts = int(round(2 * half / grid_step)) + 1
    axis = [-half + i * grid_step for i in range(n_pts)]
    if rx is None:
        rx = make_rx(spec, path=((0.0, 0.0, 0.0),), cal=cal)
    values = []
    for y in axis:
        row = []
        for x in axis:
            state = instantaneous_state(spec, cut_report, (x, y), rx, policy, cal)
            row.append(max((p["value"] for p in state["power"]), default=0.0))
        values.append(tuple(row))
    return CoverageField(xs=tuple(axis), ys=tuple(axis), values=tuple(values))


def rx_from_dict(spec: SheetSpec, d: dict, cal: Calibration | None = None) -> RxDevice:
    if not isinstance(d, dict) or "path" not in d:
        raise ValidationError('rx file must be a JSON object with a "path" list of [t, x, y]')
    path = []
    for p in d["path"]:
        if not (isinstance(p, (list, tuple)) and len(p) == 3):
            raise ValidationError("rx path entries are [t_s, x_mm, y_mm]")
        path.append((float(p[0]), float(p[1]), float(p[2])))
    coil = spec.coil
    if "coil" in d:
        from .model import spec_from_dict  # reuse nested parsing
        coil = spec_from_dict({"coil": d["coil"]}).coil
    return make_rx(spec, path, q_rx=d.get("q_rx"), height=d.get("height", 3.0),
                   coil=coil, cal=cal)
