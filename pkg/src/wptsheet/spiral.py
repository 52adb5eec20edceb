"""Square-spiral coil geometry: centerline segments for the field solvers and
channel rectangles for the cut engine and exporters. All integer um."""

from __future__ import annotations

from .model import CoilSpec, coil_side_lengths, to_um


def turn_square_um(coil: CoilSpec, center_um, turn: int):
    """Corner loop of one turn's centerline square, ccw from the lower-left."""
    side = to_um(coil_side_lengths(coil)[turn])
    h = side // 2
    cx, cy = center_um
    return [(cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h)]


def spiral_centerline_segments(coil: CoilSpec, center_um):
    """All per-turn square sides as (p0, p1) int-um segments, ccw order.
    Matches the conductor-length model (jogs excluded)."""
    segs = []
    for t in range(coil.turns):
        c = turn_square_um(coil, center_um, t)
        for j in range(4):
            segs.append((c[j], c[(j + 1) % 4]))
    return segs


def jog_segments_um(coil: CoilSpec, center_um):
    """Short radial jogs joining adjacent turns on the left flank, staggered in
    y so the rendered channels do not merge, plus the feed stub from the coil
    center to the innermost turn."""
    cx, cy = center_um
    sides = [to_um(s) for s in coil_side_lengths(coil)]
    pitch_um = to_um(coil.xsec.width + coil.xsec.spacing)
    jogs = []
    for i in range(coil.turns - 1):
        y = cy - (i + 1) * pitch_um
        jogs.append(((cx - sides[i] // 2, y), (cx - sides[i + 1] // 2, y)))
    jogs.append(((cx - sides[-1] // 2, cy), (cx, cy)))  # feed stub to center
    return jogs


def segment_channel_rect(seg, width_um: int):
    """Axis-aligned channel footprint of a centerline segment: the segment
    dilated by half the channel width on every side."""
    (x0, y0), (x1, y1) = seg
    h = width_um // 2
    return (min(x0, x1) - h, min(y0, y1) - h, max(x0, x1) + h, max(y0, y1) + h)


def coil_channel_rects(coil: CoilSpec, center_um):
    """Channel rectangles of the whole coil: spiral sides, jogs, feed stub."""
    w = to_um(coil.xsec.width)
    rects = [segment_channel_rect(s, w) for s in spiral_centerline_segments(coil, center_um)]
    rects += [segment_channel_rect(s, w) for s in jog_segments_um(coil, center_um)]
    return rects


def coil_footprint_rect(coil: CoilSpec, center_um):
    """Outer square the coil occupies (channel outer edge), closed rect."""
    h = to_um(coil.outer_side) // 2
    cx, cy = center_um
    return (cx - h, cy - h, cx + h, cy + h)
