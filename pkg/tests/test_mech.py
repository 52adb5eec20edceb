import pytest

import oracles
from wptsheet.calibration import default_calibration
from wptsheet.errors import DomainError, ValidationError
from wptsheet.mech import (bending_stiffness, bending_stiffness_uncalibrated,
                           cutting_force, durability_report, feasible_window,
                           injectable, injection_pressure, leak_on_cut, mech_report,
                           require_feasible, retention_ratio)
from wptsheet.model import ChannelXSection, CoilSpec, MaterialDb, SheetSpec

SPEC = SheetSpec()
MATS = MaterialDb()


def xsec_at(t, w=1.2):
    return ChannelXSection(width=w, thickness=t)


def grid():
    t = 0.24
    while t <= 4.8:
        yield round(t, 4)
        t += 0.04


def test_ei_calibration_anchor():
    # sheet thickness 2.40 mm <-> channel 1.44 mm
    assert bending_stiffness(SPEC, 1.44) == pytest.approx(2.54e-6, abs=1e-8)


def test_ei_uncalibrated_matches_hand_formula():
    got = bending_stiffness_uncalibrated(SPEC, 1.44)
    want = oracles.ei_uncal_nm2(2.0e9, 50.0, 1.2, 1.44, 1.2, 0.48)
    assert got == pytest.approx(want, rel=1e-9)


def test_ei_strictly_increasing():
    prev = None
    for t in grid():
        ei = bending_stiffness(SPEC, t)
        if prev is not None:
            assert ei > prev
        prev = ei


def test_ei_scales_as_fourth_power():
    # scaling every linear dimension by s multiplies the uncalibrated EI by s^4
    s = 2.0
    base = oracles.ei_uncal_nm2(2.0e9, 50.0, 1.2, 1.44, 1.2, 0.48)
    scaled_spec = SheetSpec(pitch=50.0 * s, coil=CoilSpec(
        outer_side=40.0 * s, xsec=ChannelXSection(width=1.2 * s, thickness=1.44 * s,
                                                  spacing=1.2 * s, wall=0.48 * s)))
    got = bending_stiffness_uncalibrated(scaled_spec, 1.44 * s)
    assert got == pytest.approx(base * s ** 4, rel=1e-9)


def test_cutting_force_monotone_and_limits():
    prev = None
    for t in grid():
        f = cutting_force(SPEC, t)
        if prev is not None:
            assert f > prev
        prev = f
    # t -> 0 limit: the two skins remain
    f_thin = cutting_force(SPEC, 0.24)
    floor = MATS.pva_shear_strength * 2.0 * 0.48e-3 * 50e-3
    assert f_thin > floor > 0
    thick_wall = SheetSpec(coil=CoilSpec(xsec=ChannelXSection(wall=0.96)))
    assert cutting_force(thick_wall, 1.44) > cutting_force(SPEC, 1.44)


def test_injectability_boundary():
    assert injectable(xsec_at(0.36), MATS) is True      # exactly at the threshold
    assert injectable(xsec_at(0.24), MATS) is False
    assert injectable(xsec_at(1.44), MATS) is True
    # widening the channel only lowers the entry pressure
    assert injectable(xsec_at(0.36, w=1e6), MATS) is True


def test_injection_pressure_hand_value():
    p = injection_pressure(1.2, 0.36, MATS)
    assert p == pytest.approx(oracles.injection_pressure_pa(0.55, 1.2, 0.36), rel=1e-12)
    assert p == pytest.approx(3972.22, abs=0.01)


def test_leak_boundary():
    assert leak_on_cut(xsec_at(1.92), MATS) is False    # exactly at the threshold
    assert leak_on_cut(xsec_at(1.44), MATS) is False
    assert leak_on_cut(xsec_at(2.4), MATS) is True
    assert leak_on_cut(xsec_at(4.8), MATS) is True


def test_no_retention_without_surface_tension():
    dry = MaterialDb(lm_surface_tension=1e-12)
    for t in (0.36, 1.44, 1.92, 4.8):
        assert leak_on_cut(xsec_at(t), dry) is True


def test_retention_matches_oracle():
    got = retention_ratio(xsec_at(1.92), MATS)
    assert got == pytest.approx(oracles.retention_ratio(0.55, 1.2, 1.92, 6440.0), rel=1e-9)


def test_feasible_window_default():
    assert feasible_window(SPEC) == (0.36, 1.92)


def test_feasible_window_monotone_in_gamma():
    lo = default_calibration()
    base = feasible_window(SPEC, lo)
    doubled = SheetSpec(materials=MaterialDb(lm_surface_tension=1.1))
    win2 = feasible_window(doubled, lo)
    # with doubled surface tension injection gets harder (t_min up) and
    # retention stronger (t_max up); evaluate on a fine grid to see both move
    fine = tuple(round(0.24 + i * 0.04, 4) for i in range(115))
    b_fine = feasible_window(SPEC, lo, grid=fine)
    d_fine = feasible_window(doubled, lo, grid=fine)
    assert d_fine[0] >= b_fine[0]
    assert d_fine[1] >= b_fine[1]
    assert base == (0.36, 1.92)
    assert win2 is not None


def test_narrow_channel_infeasible():
    narrow = SheetSpec(coil=CoilSpec(xsec=ChannelXSection(width=0.1)))
    assert feasible_window(narrow) is None
    with pytest.raises(DomainError):
        require_feasible(narrow)


def test_mech_report_fields():
    rep = mech_report(SPEC, 1.44)
    assert rep.feasible == (rep.injectable and not rep.leak_on_cut)
    assert rep.feasible is True
    rep24 = mech_report(SPEC, 2.4)
    assert rep24.leak_on_cut is True
    assert rep24.feasible is False


def test_out_of_range_thickness_rejected():
    with pytest.raises(ValidationError):
        bending_stiffness(SPEC, 0.1)


def test_durability_zero_drift():
    rep = durability_report(SPEC, 100)
    assert rep["cycles"] == 100
    assert rep["bending_stiffness_drift"] == 0.0
    assert rep["resistance_drift"] == 0.0
    assert rep["bending_stiffness_nm2"] == pytest.approx(2.54e-6, abs=1e-8)
    assert rep["sheet_thickness_mm"] == pytest.approx(2.40)
