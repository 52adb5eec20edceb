"""Fabrication geometry exporters: per-layer SVG channel outlines, the binary
STL solid of the PVA body with channel voids, and the post-cut variants.

The solid is a three-slab stack (skin / channel layer / skin). Channel voids
live only in the middle slab, so the boundary mesh is: sheet bottom and top,
outer side walls, plus the channel floors, ceilings and vertical channel walls
taken from an exact rectilinear decomposition of the channel-rectangle union.
Mesh volume therefore equals slab volume minus channel volume exactly (up to
float rounding), which is what the volume check asserts.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from . import geom
from .cuts import CutReport, CutScenario, ROOT_HALF_UM, sheet_outline_rect
from .errors import DomainError
from .htree import RoutingTree, path_to_leaf
from .model import SheetSpec, sheet_thickness, to_mm, to_um
from .spiral import (coil_channel_rects, coil_footprint_rect, jog_segments_um,
                     spiral_centerline_segments, segment_channel_rect)

FDM_ADVISORY = {"nozzle_mm": 0.4, "layer_height_mm": 0.08, "infill": 1.0,
                "material": "PVA"}


# ---------------------------------------------------------------------------
# Channel collection
# ---------------------------------------------------------------------------

def tree_segment_rects(spec: SheetSpec, tree: RoutingTree, segment_ids=None):
    w = to_um(spec.coil.xsec.width)
    rects = []
    for sid, a, b, _level in tree.segments:
        if segment_ids is not None and sid not in segment_ids:
            continue
        rects.append(segment_channel_rect((tree.node_pos(a), tree.node_pos(b)), w))
    return rects


def all_channel_rects(spec: SheetSpec, tree: RoutingTree, coils=None, segment_ids=None):
    n = spec.grid_size
    coils = coils if coils is not None else [(r, c) for r in range(n) for c in range(n)]
    rects = []
    for (r, c) in coils:
        rects += coil_channel_rects(spec.coil, spec.coil_center_um(r, c))
    rects += tree_segment_rects(spec, tree, segment_ids)
    return rects


def retained_tree_segments(tree: RoutingTree, report: CutReport):
    """Segments still connected to the root through uncut segments."""
    severed = {sid for sid, _pt in report.severed_segments}
    children = {}
    for sid, a, b, _level in tree.segments:
        children.setdefault(a, []).append((sid, b))
    keep = set()
    stack = [tree.root]
    while stack:
        node = stack.pop()
        for sid, child in children.get(node, ()):
            if sid in severed:
                continue
            keep.add(sid)
            stack.append(child)
    return keep


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def _fmt(um: float) -> str:
    return f"{um / 1000.0:.3f}"


def _svg_path(points) -> str:
    d = f"M {_fmt(points[0][0])} {_fmt(points[0][1])}"
    for p in points[1:]:
        d += f" L {_fmt(p[0])} {_fmt(p[1])}"
    return d


def svg_layer(spec: SheetSpec, tree: RoutingTree, role: str,
              report: CutReport | None = None) -> str:
    """One fabrication layer as an SVG document in millimetre user units.
    Channel centerlines are stroked at the channel width."""
    h = spec.half_extent_um()
    w_mm = 2 * h / 1000.0
    stroke = spec.coil.xsec.width
    n = spec.grid_size
    survivors = None if report is None else set(map(tuple, report.surviving_coils))
    keep_segments = None if report is None else retained_tree_segments(tree, report)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w_mm}mm" height="{w_mm}mm" '
        f'viewBox="{_fmt(-h)} {_fmt(-h)} {w_mm:.3f} {w_mm:.3f}">',
        f'<!-- layer: {role} -->',
        f'<rect x="{_fmt(-h)}" y="{_fmt(-h)}" width="{w_mm:.3f}" height="{w_mm:.3f}" '
        'fill="none" stroke="#888" stroke-width="0.2"/>',
    ]

    def add_path(points, color):
        parts.append(f'<path d="{_svg_path(points)}" fill="none" stroke="{color}" '
                     f'stroke-width="{stroke}" stroke-linecap="square"/>')

    if role == "coil":
        for r in range(n):
            for c in range(n):
                if survivors is not None and (r, c) not in survivors:
                    continue
                center = spec.coil_center_um(r, c)
                for p0, p1 in spiral_centerline_segments(spec.coil, center):
                    add_path([p0, p1], "#000")
                for p0, p1 in jog_segments_um(spec.coil, center):
                    add_path([p0, p1], "#000")
        for sid, a, b, _level in tree.segments:
            if keep_segments is not None and sid not in keep_segments:
                continue
            add_path([tree.node_pos(a), tree.node_pos(b)], "#06c")
    elif role == "ground_shield":
        for r in range(n):
            for c in range(n):
                if survivors is not None and (r, c) not in survivors:
                    continue
                x0, y0, x1, y1 = coil_footprint_rect(spec.coil, spec.coil_center_um(r, c))
                add_path([(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)], "#000")
    elif role == "control":
        for sid, a, b, _level in tree.segments:
            if keep_segments is not None and sid not in keep_segments:
                continue
            add_path([tree.node_pos(a), tree.node_pos(b)], "#000")
    else:
        raise DomainError(f"unknown layer role {role!r}")

    rh = ROOT_HALF_UM
    parts.append(f'<rect x="{_fmt(-rh)}" y="{_fmt(-rh)}" width="{2*rh/1000.0:.3f}" '
                 f'height="{2*rh/1000.0:.3f}" fill="none" stroke="#c00" stroke-width="0.4"/>')
    parts.append('</svg>')
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# STL
# ---------------------------------------------------------------------------

def build_solid_mesh(outline_um, channel_rects, wall_um: int, t_um: int) -> np.ndarray:
    """Triangle soup (n, 3, 3) in mm of the slab with channel voids.

    outline_um: simple ccw polygon (no holes) of the slab plan view.
    channel_rects: axis-aligned void rects, must lie inside the outline.
    """
    z0, z1 = 0, wall_um
    z2, z3 = wall_um + t_um, 2 * wall_um + t_um
    tris = []

    outline = list(outline_um)
    if outline[0] == outline[-1]:
        outline = outline[:-1]
    area2 = sum(outline[i][0] * outline[(i + 1) % len(outline)][1]
                - outline[(i + 1) % len(outline)][0] * outline[i][1]
                for i in range(len(outline)))
    if area2 < 0:  # wall orientation below assumes a ccw outline
        outline.reverse()
    tri_idx = geom.ear_clip(outline)
    for ia, ib, ic in tri_idx:
        a, b, c = outline[ia], outline[ib], outline[ic]
        tris.append(((a[0], a[1], 0), (c[0], c[1], 0), (b[0], b[1], 0)))      # bottom, -z
        tris.append(((a[0], a[1], z3), (b[0], b[1], z3), (c[0], c[1], z3)))   # top, +z
    for i in range(len(outline)):
        a = outline[i]
        b = outline[(i + 1) % len(outline)]
        tris += _wall_quad(a, b, 0, z3, flip=False)

    if channel_rects:
        # per-cell faces: every directed edge then pairs exactly with its
        # reverse on the neighbouring face (no T junctions)
        xs, ys, covered = geom.rect_union_grid(channel_rects)
        nx, ny = covered.shape
        for i in range(nx):
            col = covered[i]
            for j in range(ny):
                if not col[j]:
                    continue
                x0, x1 = xs[i], xs[i + 1]
                y0, y1 = ys[j], ys[j + 1]
                # floor at z1 (+z into the void), ceiling at z2 (-z)
                tris.append(((x0, y0, z1), (x1, y0, z1), (x1, y1, z1)))
                tris.append(((x0, y0, z1), (x1, y1, z1), (x0, y1, z1)))
                tris.append(((x0, y0, z2), (x1, y1, z2), (x1, y0, z2)))
                tris.append(((x0, y0, z2), (x0, y1, z2), (x1, y1, z2)))
                if i == 0 or not covered[i - 1, j]:
                    tris += _wall_quad((x0, y0), (x0, y1), z1, z2, flip=False)
                if i == nx - 1 or not covered[i + 1, j]:
                    tris += _wall_quad((x1, y0), (x1, y1), z1, z2, flip=True)
                if j == 0 or not col[j - 1]:
                    tris += _wall_quad((x0, y0), (x1, y0), z1, z2, flip=True)
                if j == ny - 1 or not col[j + 1]:
                    tris += _wall_quad((x0, y1), (x1, y1), z1, z2, flip=False)
    arr = np.asarray(tris, dtype=np.float64) / 1000.0
    return arr


def _wall_quad(a, b, zlo, zhi, flip: bool):
    p00 = (a[0], a[1], zlo)
    p10 = (b[0], b[1], zlo)
    p11 = (b[0], b[1], zhi)
    p01 = (a[0], a[1], zhi)
    if flip:
        return [(p00, p11, p10), (p00, p01, p11)]
    return [(p00, p10, p11), (p00, p11, p01)]


def mesh_volume_mm3(tris: np.ndarray) -> float:
    a = tris[:, 0, :]
    b = tris[:, 1, :]
    c = tris[:, 2, :]
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


def analytic_volume_mm3(outline_um, channel_rects, wall_um: int, t_um: int) -> float:
    outline = list(outline_um)
    if outline[0] == outline[-1]:
        outline = outline[:-1]
    area2 = 0
    for i in range(len(outline)):
        x0, y0 = outline[i]
        x1, y1 = outline[(i + 1) % len(outline)]
        area2 += x0 * y1 - x1 * y0
    plan_area = abs(area2) / 2.0
    channel_area = geom.rect_union_area(channel_rects)
    return (plan_area * (t_um + 2 * wall_um) - channel_area * t_um) / 1e9


def write_stl_binary(path, tris: np.ndarray, name: bytes = b"wptsheet"):
    n = tris.shape[0]
    a = tris[:, 0, :]
    b = tris[:, 1, :]
    c = tris[:, 2, :]
    normals = np.cross(b - a, c - a)
    lens = np.linalg.norm(normals, axis=1)
    lens[lens == 0] = 1.0
    normals = (normals.T / lens).T
    with open(path, "wb") as f:
        f.write(name.ljust(80, b"\0"))
        f.write(struct.pack("<I", n))
        rec = np.empty((n, 12), dtype="<f4")
        rec[:, 0:3] = normals
        rec[:, 3:6] = a
        rec[:, 6:9] = b
        rec[:, 9:12] = c
        body = np.zeros((n, 50), dtype=np.uint8)
        body[:, :48] = rec.view(np.uint8).reshape(n, 48)
        f.write(body.tobytes())


# ---------------------------------------------------------------------------
# Bundles
# ---------------------------------------------------------------------------

def outline_um_from_report(report: CutReport):
    ring = [(to_um(x), to_um(y)) for x, y in report.retained_outline]
    return ring


def export_geometry(spec: SheetSpec, tree: RoutingTree, out_dir,
                    report: CutReport | None = None,
                    scenario: CutScenario | None = None,
                    formats=("json", "svg", "stl")) -> list[str]:
    """Write the geometry bundle; returns the file names written."""
    import os

    from .htree import tree_to_dict

    os.makedirs(out_dir, exist_ok=True)
    written = []

    def put(fname, text=None, binary_writer=None):
        p = os.path.join(out_dir, fname)
        if text is not None:
            with open(p, "w") as f:
                f.write(text)
        written.append(fname)
        return p

    if "json" in formats:
        put("routing_tree.json", json.dumps(tree_to_dict(tree), sort_keys=True, indent=2) + "\n")
        sidecar = {
            "fdm_advisory": FDM_ADVISORY,
            "sheet_thickness_mm": sheet_thickness(spec.coil.xsec),
            "root_board_footprint_mm": [2 * ROOT_HALF_UM / 1000.0] * 2,
        }
        put("fabrication.json", json.dumps(sidecar, sort_keys=True, indent=2) + "\n")

    if "svg" in formats:
        for role in spec.layers:
            put(f"layer_{role}.svg", svg_layer(spec, tree, role, report))

    if "stl" in formats:
        wall_um = to_um(spec.coil.xsec.wall)
        t_um = to_um(spec.coil.xsec.thickness)
        if report is None:
            x0, y0, x1, y1 = sheet_outline_rect(spec)
            outline = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
            rects = all_channel_rects(spec, tree)
        else:
            if report.retained_holes:
                raise DomainError("post-cut STL with interior holes is not supported; "
                                  "SVG and JSON outputs were still written")
            outline = outline_um_from_report(report)
            if len(outline) < 3:
                raise DomainError("retained region is empty; nothing to export")
            keep = retained_tree_segments(tree, report)
            rects = all_channel_rects(spec, tree, coils=list(report.surviving_coils),
                                      segment_ids=keep)
        tris = build_solid_mesh(outline, rects, wall_um, t_um)
        p = os.path.join(out_dir, "sheet.stl")
        write_stl_binary(p, tris)
        written.append("sheet.stl")

    return written
