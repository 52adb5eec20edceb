"""Cut engine: applies scissor polylines to the sheet and decides which coils
keep working.

Survival is decided purely by exact integer predicates: a coil survives iff no
cut curve touches its spiral footprint AND no cut touches any segment of its
feed path.  The footprint-plus-feed-path set is connected and contains the
root, so whenever nothing touches it the whole set sits inside the retained
face of the arrangement; whenever something touches it, part of the coil or
its feed lies on or across a cut.  Touching counts as severing (scissors have
width), and a partially cut coil never survives.

The retained-region outline is export geometry, not a verdict, so it is
computed with GEOS booleans: the cut curves are widened to a 1 um kerf and
subtracted from the sheet; the component containing the root is the retained
region.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from shapely.geometry import LineString, Point, Polygon, box
from shapely.ops import unary_union

from . import geom
from .calibration import Calibration, default_calibration
from .errors import ValidationError
from .htree import RoutingTree, path_to_leaf
from .mech import leak_on_cut
from .model import SheetSpec, to_mm, to_um
from .spiral import coil_channel_rects, coil_footprint_rect

# central module board footprint: 10 mm square at the sheet center
ROOT_HALF_UM = 5000

_KERF_UM = 0.5  # half-width of the export kerf; verdicts never see this


@dataclass(frozen=True)
class CutScenario:
    """Cut polylines in integer um. A polyline whose first and last vertices
    coincide is a closed loop; open polylines must start and end outside or on
    the sheet outline."""
    polylines: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.polylines


@dataclass(frozen=True)
class CutReport:
    retained_outline: tuple            # ((x_mm, y_mm), ...) exterior ring
    retained_holes: tuple              # inner rings, one per enclosed void
    surviving_coils: tuple             # sorted ((row, col), ...)
    severed_segments: tuple            # ((segment_id, (x_mm, y_mm)), ...)
    severed_coil_channels: tuple       # (((row, col), crossing_count), ...)
    leak_risk: bool
    root_severed: bool

    def to_dict(self) -> dict:
        return {
            "retained_outline": [list(p) for p in self.retained_outline],
            "retained_holes": [[list(p) for p in ring] for ring in self.retained_holes],
            "surviving_coils": [list(c) for c in self.surviving_coils],
            "severed_segments": [{"segment": sid, "point_mm": list(pt)}
                                 for sid, pt in self.severed_segments],
            "severed_coil_channels": [{"coil": list(c), "crossings": n}
                                      for c, n in self.severed_coil_channels],
            "leak_risk": self.leak_risk,
            "root_severed": self.root_severed,
        }


def scenario_from_dict(d: dict) -> CutScenario:
    if not isinstance(d, dict) or "cuts" not in d:
        raise ValidationError('cut scenario must be a JSON object with a "cuts" list')
    polylines = []
    for i, poly in enumerate(d["cuts"]):
        if not isinstance(poly, (list, tuple)) or len(poly) < 2:
            raise ValidationError(f"cut {i}: a polyline needs at least 2 vertices")
        pts = []
        for v in poly:
            if not (isinstance(v, (list, tuple)) and len(v) == 2):
                raise ValidationError(f"cut {i}: vertices are [x_mm, y_mm] pairs")
            pts.append((to_um(float(v[0])), to_um(float(v[1]))))
        polylines.append(tuple(pts))
    return CutScenario(polylines=tuple(polylines))


def scenario_to_dict(scenario: CutScenario) -> dict:
    return {"cuts": [[[to_mm(x), to_mm(y)] for x, y in poly]
                     for poly in scenario.polylines]}


def load_scenario(path) -> CutScenario:
    try:
        with open(path) as f:
            return scenario_from_dict(json.load(f))
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed cut scenario JSON: {e}") from e


def sheet_outline_rect(spec: SheetSpec):
    h = spec.half_extent_um()
    return (-h, -h, h, h)


def root_footprint_rect():
    return (-ROOT_HALF_UM, -ROOT_HALF_UM, ROOT_HALF_UM, ROOT_HALF_UM)


def validate_scenario(spec: SheetSpec, scenario: CutScenario):
    rect = sheet_outline_rect(spec)
    for i, poly in enumerate(scenario.polylines):
        if len(poly) < 2:
            raise ValidationError(f"cut {i}: a polyline needs at least 2 vertices")
        for a, b in zip(poly, poly[1:]):
            if a == b:
                raise ValidationError(f"cut {i}: zero-length edge at {a}")
        if geom.polyline_self_intersects(poly):
            raise ValidationError(f"cut {i}: polyline self-intersects")
        closed = poly[0] == poly[-1]
        if not closed:
            for end in (poly[0], poly[-1]):
                if _strictly_inside(end, rect):
                    raise ValidationError(
                        f"cut {i}: open cuts must start and end outside or on the sheet outline")


def _strictly_inside(p, rect) -> bool:
    x0, y0, x1, y1 = rect
    return x0 < p[0] < x1 and y0 < p[1] < y1


def _cut_edges(scenario: CutScenario):
    for poly in scenario.polylines:
        for a, b in zip(poly, poly[1:]):
            yield a, b


def _touches_rect(scenario: CutScenario, rect) -> bool:
    return any(geom.segment_intersects_rect(a, b, rect) for a, b in _cut_edges(scenario))


def _root_enclosed(scenario: CutScenario) -> bool:
    for poly in scenario.polylines:
        if poly[0] == poly[-1] and geom.ring_contains_point((0, 0), poly):
            return True
    return False


def apply_cuts(spec: SheetSpec, tree: RoutingTree, scenario: CutScenario,
               cal: Calibration | None = None) -> CutReport:
    """Evaluate a cut scenario. Deterministic: identical inputs give an
    identical report."""
    if cal is None:
        cal = default_calibration()
    validate_scenario(spec, scenario)
    n = spec.grid_size

    # severed feed segments, with a representative cut point each
    severed = {}
    for sid, a, b, _level in tree.segments:
        pa, pb = tree.node_pos(a), tree.node_pos(b)
        for ca, cb in _cut_edges(scenario):
            if geom.segments_intersect(pa, pb, ca, cb):
                if sid not in severed:
                    severed[sid] = geom.segment_intersection_point(pa, pb, ca, cb)
                break
    severed_ids = set(severed)

    root_hit = _touches_rect(scenario, root_footprint_rect())
    root_enclosed = _root_enclosed(scenario)

    # footprint integrity and feed-path integrity per coil
    survivors = []
    channel_crossings = []
    for row in range(n):
        for col in range(n):
            center = spec.coil_center_um(row, col)
            foot = coil_footprint_rect(spec.coil, center)
            foot_hit = _touches_rect(scenario, foot)
            crossings = 0
            if foot_hit:
                for rect in coil_channel_rects(spec.coil, center):
                    for ca, cb in _cut_edges(scenario):
                        if geom.segment_intersects_rect(ca, cb, rect):
                            crossings += 1
                channel_crossings.append(((row, col), crossings))
            if root_hit or foot_hit:
                continue
            if any(sid in severed_ids for sid in path_to_leaf(tree, (row, col))):
                continue
            survivors.append((row, col))

    # cutting the central module kills everything; the loop above already
    # produced zero survivors in that case
    root_severed = (not survivors) and (root_hit or root_enclosed)

    exterior, holes = _retained_region(spec, scenario)
    severed_list = tuple(sorted((sid, (to_mm(pt[0]), to_mm(pt[1])))
                                for sid, pt in severed.items()))
    return CutReport(
        retained_outline=exterior,
        retained_holes=holes,
        surviving_coils=tuple(sorted(survivors)),
        severed_segments=severed_list,
        severed_coil_channels=tuple(sorted(channel_crossings)),
        leak_risk=leak_on_cut(spec.coil.xsec, spec.materials, cal),
        root_severed=root_severed,
    )


def _retained_region(spec: SheetSpec, scenario: CutScenario):
    """Exterior ring and holes (mm) of the root-containing retained region."""
    h = spec.half_extent_um()
    sheet = box(-h, -h, h, h)
    if scenario.is_empty:
        return _ring_mm(sheet.exterior.coords), ()
    kerfs = [LineString(poly).buffer(_KERF_UM, cap_style="flat", join_style="mitre")
             for poly in scenario.polylines]
    region = sheet.difference(unary_union(kerfs))
    parts = list(region.geoms) if region.geom_type == "MultiPolygon" else [region]
    root = Point(0, 0)
    containing = [p for p in parts if p.contains(root)]
    if not containing:
        # root on a cut: deterministic fallback, largest remaining part
        containing = [max(parts, key=lambda p: (p.area, p.bounds))] if parts else []
    if not containing:
        return (), ()
    part = containing[0]
    exterior = _ring_mm(part.exterior.coords)
    holes = tuple(_ring_mm(i.coords) for i in part.interiors)
    return exterior, holes


def _ring_mm(coords):
    ring = []
    for x, y in coords:
        pt = (round(x) / 1000.0, round(y) / 1000.0)
        if not ring or ring[-1] != pt:
            ring.append(pt)
    return tuple(ring)


def sealing_manifest(spec: SheetSpec, tree: RoutingTree, scenario: CutScenario,
                     report: CutReport) -> list[dict]:
    """One entry per severed channel crossing that needs sealing after the cut:
    feed-segment crossings first, then spiral-channel crossings per coil."""
    validate_scenario(spec, scenario)
    xsec = spec.coil.xsec
    area = xsec.width * xsec.thickness
    entries = []
    for sid, pt in report.severed_segments:
        entries.append({"kind": "feed", "segment": sid, "location_mm": list(pt),
                        "stub_area_mm2": area})
    for (row, col), _count in report.severed_coil_channels:
        center = spec.coil_center_um(row, col)
        for rect in coil_channel_rects(spec.coil, center):
            for ca, cb in _cut_edges(scenario):
                if geom.segment_intersects_rect(ca, cb, rect):
                    mid = geom.segment_clipped_midpoint(ca, cb, rect)
                    loc = [to_mm(mid[0]), to_mm(mid[1])] if mid else \
                        [to_mm((rect[0] + rect[2]) // 2), to_mm((rect[1] + rect[3]) // 2)]
                    entries.append({"kind": "coil_channel", "coil": [row, col],
                                    "location_mm": loc, "stub_area_mm2": area})
    return entries
