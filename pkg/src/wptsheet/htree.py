"""Equal-path-length H-tree feed routing on a 2^k x 2^k coil grid.

The tree is built recursively: each level is an H whose crossbar alternates
between horizontal (odd levels, the root level is 1) and vertical.  Level j
spans half-extent pitch * 2^(k-1-j), so the four tips of a level-j H are the
centers of the four level-(j+1) Hs and the innermost tips land exactly on the
coil centers.  All arithmetic is integer micrometres, which makes the
equal-path invariant exact rather than approximate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .model import ChannelXSection, MaterialDb, SheetSpec, to_um

MAX_ORDER = 6


@dataclass(frozen=True)
class RoutingTree:
    order: int
    pitch_um: int
    nodes: tuple           # (node_id, (x_um, y_um))
    segments: tuple        # (seg_id, node_a, node_b, level)
    root: int
    leaves: dict           # (row, col) -> node_id

    def node_pos(self, node_id: int):
        return self.nodes[node_id][1]

    def segment_coords(self, seg_id: int):
        _, a, b, _ = self.segments[seg_id]
        return self.node_pos(a), self.node_pos(b)

    def segment_length_um(self, seg_id: int) -> int:
        (x0, y0), (x1, y1) = self.segment_coords(seg_id)
        return abs(x1 - x0) + abs(y1 - y0)  # segments are axis-aligned

    def total_length_um(self) -> int:
        return sum(self.segment_length_um(s[0]) for s in self.segments)


def build_htree(order: int, pitch_mm: float) -> RoutingTree:
    """Construct the feed tree for a 2^order x 2^order grid at the given pitch."""
    if not (isinstance(order, int) and 1 <= order <= MAX_ORDER):
        raise ValidationError(f"order must be an integer in [1, {MAX_ORDER}], got {order!r}")
    if not pitch_mm > 0:
        raise ValidationError(f"pitch must be positive, got {pitch_mm!r}")
    pitch_um = to_um(pitch_mm)
    if pitch_um % 2 != 0:
        raise ValidationError(f"pitch {pitch_mm} mm is an odd number of um; use an even um pitch")

    nodes = [(0, (0, 0))]
    segments = []
    leaves = {}
    n = 2 ** order

    def add_node(pos):
        nid = len(nodes)
        nodes.append((nid, pos))
        return nid

    def add_segment(a, b, level):
        segments.append((len(segments), a, b, level))

    def build(center_id, level):
        cx, cy = nodes[center_id][1]
        # level counts from 1; half-extent at level j is pitch * 2^(order-1-j).
        # Trunk runs vertically, side bars horizontally, every level: the trunk
        # is then always perpendicular to the bar it hangs from, so segments
        # never overlap.
        half = pitch_um * 2 ** (order - 1 - level) if level < order else pitch_um // 2
        m1 = add_node((cx, cy - half))
        m2 = add_node((cx, cy + half))
        add_segment(center_id, m1, level)
        add_segment(center_id, m2, level)
        tips = []
        for m in (m1, m2):
            mx, my = nodes[m][1]
            t1 = add_node((mx - half, my))
            t2 = add_node((mx + half, my))
            add_segment(m, t1, level)
            add_segment(m, t2, level)
            tips += [t1, t2]
        for t in tips:
            if level == order:
                tx, ty = nodes[t][1]
                col = (2 * tx // pitch_um + (n - 1)) // 2
                row = (2 * ty // pitch_um + (n - 1)) // 2
                leaves[(row, col)] = t
            else:
                build(t, level + 1)

    build(0, 1)
    return RoutingTree(order=order, pitch_um=pitch_um, nodes=tuple(nodes),
                       segments=tuple(segments), root=0, leaves=leaves)


def path_to_leaf(tree: RoutingTree, coil) -> list[int]:
    """Ordered segment ids from the root to the given coil's feed point."""
    coil = (int(coil[0]), int(coil[1]))
    if coil not in tree.leaves:
        raise ValidationError(f"coil {coil} is not on the {2**tree.order}x{2**tree.order} grid")
    parent_seg = {}
    for seg in tree.segments:
        sid, a, b, _ = seg
        parent_seg[b] = (sid, a)  # construction always orients a=parent, b=child
    path = []
    node = tree.leaves[coil]
    while node != tree.root:
        sid, parent = parent_seg[node]
        path.append(sid)
        node = parent
    path.reverse()
    return path


def path_length_um(tree: RoutingTree, coil) -> int:
    return sum(tree.segment_length_um(s) for s in path_to_leaf(tree, coil))


def feed_resistance(tree: RoutingTree, coil, xsec: ChannelXSection,
                    materials: MaterialDb) -> float:
    """Lumped feed resistance root->coil in ohms: bulk channel term plus the
    two pin-joint contact resistances at root and leaf."""
    area = xsec.width * xsec.thickness
    if area <= 0:
        raise ValidationError("feed cross-section must have positive area")
    length_mm = path_length_um(tree, coil) / 1000.0
    return (materials.lm_resistivity * length_mm / area
            + 2.0 * materials.contact_resistance_per_joint)


def tree_for_spec(spec: SheetSpec) -> RoutingTree:
    return build_htree(spec.grid_order, spec.pitch)


def tree_to_dict(tree: RoutingTree) -> dict:
    return {
        "order": tree.order,
        "pitch_mm": tree.pitch_um / 1000.0,
        "nodes": [{"id": nid, "x_mm": x / 1000.0, "y_mm": y / 1000.0}
                  for nid, (x, y) in tree.nodes],
        "segments": [{"id": sid, "a": a, "b": b, "level": level}
                     for sid, a, b, level in tree.segments],
        "root": tree.root,
        "leaves": [{"coil": [r, c], "node": nid}
                   for (r, c), nid in sorted(tree.leaves.items())],
    }
