"""Exact integer-micrometre 2D predicates plus the rectilinear-region helpers
shared by the cut engine and the geometry exporters.

Everything here works on plain int tuples; Python integers keep every
predicate exact, which is what makes the cut-survival verdict robust.
"""

from __future__ import annotations

from fractions import Fraction


def orient(a, b, c) -> int:
    """Sign of the cross product (b-a) x (c-a): 1 ccw, -1 cw, 0 collinear."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment(p, a, b) -> bool:
    """p collinear-with and within the closed bounding box of segment ab."""
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Closed segment intersection: touching endpoints and collinear overlap count."""
    o1 = orient(p1, p2, q1)
    o2 = orient(p1, p2, q2)
    o3 = orient(q1, q2, p1)
    o4 = orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(q1, p1, p2):
        return True
    if o2 == 0 and on_segment(q2, p1, p2):
        return True
    if o3 == 0 and on_segment(p1, q1, q2):
        return True
    if o4 == 0 and on_segment(p2, q1, q2):
        return True
    return False


def segment_intersection_point(p1, p2, q1, q2):
    """Representative intersection point of two intersecting segments, rounded
    to the um grid. For proper crossings this is the exact crossing rounded;
    for touches/overlaps it is a deterministic contact point."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if denom != 0:
        t = Fraction((q1[0] - p1[0]) * d2[1] - (q1[1] - p1[1]) * d2[0], denom)
        if 0 <= t <= 1:
            x = Fraction(p1[0]) + t * d1[0]
            y = Fraction(p1[1]) + t * d1[1]
            return (_round_frac(x), _round_frac(y))
    # collinear or endpoint touch: first endpoint that lies on the other segment
    for cand in (q1, q2, p1, p2):
        if on_segment(cand, p1, p2) or on_segment(cand, q1, q2):
            if segments_intersect(cand, cand, p1, p2) and segments_intersect(cand, cand, q1, q2):
                return cand
    return p1


def _round_frac(x: Fraction) -> int:
    # round half away from zero, deterministic
    n, d = x.numerator, x.denominator
    if n >= 0:
        return (2 * n + d) // (2 * d)
    return -((-2 * n + d) // (2 * d))


def point_in_rect(p, rect) -> bool:
    x0, y0, x1, y1 = rect
    return x0 <= p[0] <= x1 and y0 <= p[1] <= y1


def segment_intersects_rect(p1, p2, rect) -> bool:
    """Closed test: touching the boundary of the axis-aligned rect counts."""
    if point_in_rect(p1, rect) or point_in_rect(p2, rect):
        return True
    x0, y0, x1, y1 = rect
    corners = ((x0, y0), (x1, y0), (x1, y1), (x0, y1))
    for i in range(4):
        if segments_intersect(p1, p2, corners[i], corners[(i + 1) % 4]):
            return True
    return False


def segment_clipped_midpoint(p1, p2, rect):
    """Midpoint (rounded um) of the part of segment p1p2 inside rect.
    Assumes the segment intersects the rect."""
    x0, y0, x1, y1 = rect
    # Liang-Barsky with exact fractions
    t0, t1 = Fraction(0), Fraction(1)
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    for p, q in ((-dx, p1[0] - x0), (dx, x1 - p1[0]), (-dy, p1[1] - y0), (dy, y1 - p1[1])):
        if p == 0:
            if q < 0:
                return None
            continue
        r = Fraction(q, p)
        if p < 0:
            if r > t1:
                return None
            t0 = max(t0, r)
        else:
            if r < t0:
                return None
            t1 = min(t1, r)
    tm = (t0 + t1) / 2
    return (_round_frac(Fraction(p1[0]) + tm * dx), _round_frac(Fraction(p1[1]) + tm * dy))


def polyline_self_intersects(pts) -> bool:
    """True when non-adjacent edges touch (drawing strokes must be simple).
    Shared vertices of consecutive edges are allowed; a closed ring may share
    its first/last vertex."""
    n = len(pts) - 1
    closed = pts[0] == pts[-1]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1:
                continue
            if closed and i == 0 and j == n - 1:
                continue
            if segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1]):
                return True
    return False


def ring_contains_point(pt, ring) -> bool:
    """Even-odd containment of pt in a closed ring (first == last vertex).
    Points exactly on the ring count as contained."""
    x, y = pt
    for i in range(len(ring) - 1):
        if on_segment(pt, ring[i], ring[i + 1]):
            return True
    inside = False
    for i in range(len(ring) - 1):
        (x1, y1), (x2, y2) = ring[i], ring[i + 1]
        if (y1 > y) != (y2 > y):
            # exact x coordinate of edge at height y vs point x
            # x_edge = x1 + (y-y1)*(x2-x1)/(y2-y1)
            lhs = (x - x1) * (y2 - y1)
            rhs = (y - y1) * (x2 - x1)
            if y2 > y1:
                if lhs < rhs:
                    inside = not inside
            else:
                if lhs > rhs:
                    inside = not inside
    return inside


# ---------------------------------------------------------------------------
# Rectilinear unions on a non-uniform grid (exporter plumbing)
# ---------------------------------------------------------------------------

def rect_union_grid(rects):
    """Decompose a union of axis-aligned int rects onto the non-uniform grid
    spanned by their edges. Returns (xs, ys, covered) where covered[i][j] says
    whether cell (xs[i]..xs[i+1], ys[j]..ys[j+1]) lies inside the union."""
    import numpy as np

    xs = sorted({r[0] for r in rects} | {r[2] for r in rects})
    ys = sorted({r[1] for r in rects} | {r[3] for r in rects})
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: i for i, y in enumerate(ys)}
    covered = np.zeros((len(xs) - 1, len(ys) - 1), dtype=bool)
    for (x0, y0, x1, y1) in rects:
        covered[xi[x0]:xi[x1], yi[y0]:yi[y1]] = True
    return xs, ys, covered


def rect_union_area(rects) -> int:
    import numpy as np

    if not rects:
        return 0
    xs, ys, covered = rect_union_grid(rects)
    w = np.diff(np.asarray(xs))
    h = np.diff(np.asarray(ys))
    return int((covered * np.outer(w, h)).sum())


def ear_clip(poly):
    """Triangulate a simple polygon (int coords, no holes) by ear clipping.
    Returns a list of vertex-index triples."""
    n = len(poly)
    if n < 3:
        return []
    # enforce ccw
    area2 = sum(poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1]
                for i in range(n))
    idx = list(range(n)) if area2 > 0 else list(range(n - 1, -1, -1))
    tris = []
    guard = 0
    while len(idx) > 3 and guard < 10 * n * n:
        guard += 1
        m = len(idx)
        clipped = False
        for k in range(m):
            ia, ib, ic = idx[(k - 1) % m], idx[k], idx[(k + 1) % m]
            a, b, c = poly[ia], poly[ib], poly[ic]
            if orient(a, b, c) <= 0:
                continue
            ok = True
            for other in idx:
                if other in (ia, ib, ic):
                    continue
                p = poly[other]
                if _point_in_tri(p, a, b, c):
                    ok = False
                    break
            if ok:
                tris.append((ia, ib, ic))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            # degenerate leftovers (collinear chains): drop a flat vertex
            for k in range(m):
                ia, ib, ic = idx[(k - 1) % m], idx[k], idx[(k + 1) % m]
                if orient(poly[ia], poly[ib], poly[ic]) == 0:
                    idx.pop(k)
                    clipped = True
                    break
            if not clipped:
                break
    if len(idx) == 3:
        tris.append((idx[0], idx[1], idx[2]))
    return tris


def _point_in_tri(p, a, b, c) -> bool:
    s1 = orient(a, b, p)
    s2 = orient(b, c, p)
    s3 = orient(c, a, p)
    return s1 >= 0 and s2 >= 0 and s3 >= 0
