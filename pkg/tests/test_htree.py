import pytest

import oracles
from wptsheet.errors import ValidationError
from wptsheet.geom import segments_intersect
from wptsheet.htree import (build_htree, feed_resistance, path_length_um,
                            path_to_leaf, tree_to_dict)
from wptsheet.model import ChannelXSection, MaterialDb, to_um


def test_tree_is_a_tree():
    for k in (1, 2, 3):
        tree = build_htree(k, 50.0)
        assert len(tree.segments) == len(tree.nodes) - 1
        assert len(tree.leaves) == 4 ** k
        # connected: every leaf has a root path
        for coil in tree.leaves:
            assert path_to_leaf(tree, coil)


def test_k1_geometry():
    tree = build_htree(1, 50.0)
    positions = {tree.node_pos(nid) for nid in tree.leaves.values()}
    assert positions == {(25000, 25000), (25000, -25000), (-25000, 25000), (-25000, -25000)}
    for coil in tree.leaves:
        assert path_length_um(tree, coil) == 50000


def test_k2_equal_paths_and_total_length():
    tree = build_htree(2, 50.0)
    assert len(tree.leaves) == 16
    lengths = {path_length_um(tree, coil) for coil in tree.leaves}
    assert lengths == {150000}
    assert tree.total_length_um() == 18 * 50000


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_equal_path_closed_form(k):
    pitch = 50.0
    tree = build_htree(k, pitch)
    expected = (2 ** k - 1) * to_um(pitch)
    lengths = {path_length_um(tree, coil) for coil in tree.leaves}
    assert lengths == {expected}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_total_wire_length_recurrence(k):
    # L(1) = 3p, L(k) = 4 L(k-1) + 6 * 2^(k-2) * p, checked by enumeration
    tree = build_htree(k, 50.0)
    assert tree.total_length_um() / 1000.0 == pytest.approx(
        oracles.htree_total_mm(k, 50.0), abs=1e-9)


def test_leaves_form_pitch_lattice():
    k, pitch = 3, 50.0
    tree = build_htree(k, pitch)
    n = 2 ** k
    p = to_um(pitch)
    for (row, col), nid in tree.leaves.items():
        x, y = tree.node_pos(nid)
        assert x == (2 * col - (n - 1)) * p // 2
        assert y == (2 * row - (n - 1)) * p // 2
    assert len({tree.node_pos(nid) for nid in tree.leaves.values()}) == n * n


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_planarity_segments_touch_only_at_endpoints(k):
    tree = build_htree(k, 50.0)
    segs = [(tree.segment_coords(s[0]), s[0]) for s in tree.segments]
    endpoints = {}
    for (a, b), sid in segs:
        endpoints[sid] = {a, b}
    for i in range(len(segs)):
        (a1, b1), s1 = segs[i]
        for j in range(i + 1, len(segs)):
            (a2, b2), s2 = segs[j]
            if segments_intersect(a1, b1, a2, b2):
                shared = endpoints[s1] & endpoints[s2]
                assert shared, f"segments {s1} and {s2} cross away from a shared node"


def test_axis_aligned():
    tree = build_htree(3, 50.0)
    for seg in tree.segments:
        (x0, y0), (x1, y1) = tree.segment_coords(seg[0])
        assert x0 == x1 or y0 == y1


def test_order_bounds():
    with pytest.raises(ValidationError):
        build_htree(0, 50.0)
    with pytest.raises(ValidationError):
        build_htree(7, 50.0)
    with pytest.raises(ValidationError):
        build_htree(2, -1.0)
    with pytest.raises(ValidationError):
        build_htree(2, 0.001)  # 1 um pitch: odd, cannot halve exactly


def test_path_to_leaf_k1():
    tree = build_htree(1, 50.0)
    path = path_to_leaf(tree, (0, 0))
    assert len(path) == 2
    assert sum(tree.segment_length_um(s) for s in path) == 50000


def test_path_to_leaf_unknown_coil():
    tree = build_htree(2, 50.0)
    with pytest.raises(ValidationError):
        path_to_leaf(tree, (9, 9))


def test_feed_resistance_paper_numbers():
    tree = build_htree(2, 50.0)
    xsec = ChannelXSection(width=1.2, thickness=1.44)
    mats = MaterialDb()
    r = feed_resistance(tree, (0, 0), xsec, mats)
    # hand: 0.32e-3 * 150 / 1.728 + 2 * 11.7e-3
    assert r == pytest.approx(oracles.feed_r_ohm(0.32e-3, 150.0, 1.2, 1.44, 11.7e-3), rel=1e-9)
    assert r == pytest.approx(0.0512, abs=1e-4)
    # contact-free bulk term
    r0 = feed_resistance(tree, (0, 0), xsec, MaterialDb(contact_resistance_per_joint=0.0))
    assert r0 == pytest.approx(0.0278, abs=1e-4)
    # doubling thickness halves the bulk term exactly
    r2 = feed_resistance(tree, (0, 0), ChannelXSection(width=1.2, thickness=2.88),
                         MaterialDb(contact_resistance_per_joint=0.0))
    assert r2 == pytest.approx(r0 / 2.0, rel=1e-12)


def test_tree_json_shape():
    tree = build_htree(1, 50.0)
    d = tree_to_dict(tree)
    assert d["root"] == 0
    assert len(d["nodes"]) == 7
    assert len(d["segments"]) == 6
    assert len(d["leaves"]) == 4
