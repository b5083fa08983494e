import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_force_simple, shoelace

from camv.errors import ArgumentError, ConfigError, DomainError, GeometryError
from camv.geometry import (
    CAMV_REFERENCE,
    ArrayLayout,
    ElementParams,
    array_lattice,
    corrugation_slots,
    element_profile,
    load_preset,
    taper_curve,
    taper_edge_length,
    taper_halfwidth,
    taper_slope,
    validate_params,
)

P = CAMV_REFERENCE
# -2.375 * sqrt(0.45 / 4.75), evaluated with mpmath at 30 digits
TAPER_MID = -0.731009575860672293


@pytest.fixture(scope="module")
def profiles():
    return element_profile(P), element_profile(P, corrugated=True)


# ---------------------------------------------------------------- taper


def test_taper_endpoints_exact():
    assert abs(taper_halfwidth(P, 0.0) - (-2.375)) <= 1e-12
    assert abs(taper_halfwidth(P, 7.6) - (-0.225)) <= 1e-12


def test_taper_midpoint_matches_high_precision_value():
    assert taper_halfwidth(P, 3.8) == pytest.approx(TAPER_MID, abs=1e-12)


@pytest.mark.parametrize("x", [-1e-9, 7.6 + 1e-9, math.nan])
def test_taper_outside_domain(x):
    with pytest.raises(DomainError):
        taper_halfwidth(P, x)


def test_taper_curve_examples():
    two = taper_curve(P, 2).points
    np.testing.assert_allclose(two, [[0.0, -2.375], [7.6, -0.225]], rtol=0, atol=1e-12)
    three = taper_curve(P, 3).points
    assert three[1] == pytest.approx([3.8, TAPER_MID], abs=1e-12)
    many = taper_curve(P, 101)
    assert len(many) == 101 and not many.closed
    assert np.all(np.diff(np.abs(many.points[:, 1])) < 0)


@pytest.mark.parametrize("n", [0, 1, 2.5])
def test_taper_curve_rejects_bad_sample_count(n):
    with pytest.raises(ArgumentError):
        taper_curve(P, n)


def test_taper_slope_matches_central_differences():
    h = 1e-5
    x = np.linspace(0, P.L_s, 102)[1:-1]
    fd = (taper_halfwidth(P, x + h) - taper_halfwidth(P, x - h)) / (2 * h)
    np.testing.assert_allclose(taper_slope(P, x), fd, rtol=1e-6)


tapers = st.tuples(
    st.floats(0.05, 5.0), st.floats(1.01, 20.0), st.floats(0.5, 30.0)
).map(lambda t: P.replace(w_t=t[0], w_a=t[0] * t[1], w=t[0] * t[1], d=t[0] * t[1], L_s=t[2], L=t[2] + 10))


@given(params=tapers, frac=st.lists(st.floats(0, 1), min_size=2, max_size=20))
def test_taper_bounded_and_monotone(params, frac):
    x = np.sort(np.array(frac)) * params.L_s
    y = np.abs(taper_halfwidth(params, x))
    assert np.all(y <= params.w_a / 2 * (1 + 1e-12))
    assert np.all(y >= params.w_t / 2 * (1 - 1e-12))
    grid = np.abs(taper_halfwidth(params, np.linspace(0, params.L_s, 50)))
    assert np.all(np.diff(grid) < 0)


@given(params=tapers)
@settings(max_examples=50)
def test_slope_property(params):
    h = 1e-6 * params.L_s
    x = np.linspace(0, params.L_s, 102)[1:-1]
    fd = (taper_halfwidth(params, x + h) - taper_halfwidth(params, x - h)) / (2 * h)
    np.testing.assert_allclose(taper_slope(params, x), fd, rtol=1e-5)


# ---------------------------------------------------------------- corrugations


def test_corrugation_slots_reference_preset():
    slots = corrugation_slots(P)
    assert len(slots) == 9
    assert [s.width for s in slots] == [0.4] * 9
    assert [s.depth for s in slots] == [1, 1.5, 2.5, 3, 3.5, 4, 4.5, 5, 5.5]
    # deepest cut nearest the aperture (top of the element)
    tops = [max(c[1] for c in s.corners) for s in slots]
    assert tops == sorted(tops)


def test_corrugation_slots_too_wide_for_edge():
    wide = P.replace(W_s=3.0)
    assert 9 * 3.0 > taper_edge_length(wide)
    with pytest.raises(GeometryError):
        corrugation_slots(wide)


def test_edge_length_matches_dense_polyline():
    x = np.linspace(0, P.L_s, 200001)
    y = taper_halfwidth(P, x)
    oracle = float(np.sum(np.hypot(np.diff(x), np.diff(y))))
    assert taper_edge_length(P) == pytest.approx(oracle, rel=1e-6)


# ---------------------------------------------------------------- profiles


def test_profile_bounding_box(profiles):
    for prof in profiles:
        x0, y0, x1, y1 = prof.bbox
        assert x1 - x0 == pytest.approx(6.46, abs=1e-12)
        assert y1 - y0 == pytest.approx(14.25, abs=1e-12)


def test_profiles_closed_simple_positive(profiles):
    for prof in profiles:
        assert prof.closed and len(prof) >= 3
        assert shoelace(prof.points.tolist()) > 0
        assert brute_force_simple(prof.points.tolist())


def test_corrugation_removes_slot_area(profiles):
    plain, corr = profiles
    assert corr.area < plain.area
    removed = plain.area - corr.area
    slot_sum = sum(s.area for s in corr.slots)
    assert removed == pytest.approx(slot_sum, rel=0.01)


def test_profile_carries_nine_slots(profiles):
    assert len(profiles[0].slots) == 0
    assert [s.index for s in profiles[1].slots] == list(range(1, 10))


def test_profile_rejects_invalid_params():
    with pytest.raises(GeometryError, match="w_t < w_a violated"):
        element_profile(P.replace(w_t=5.0))


def test_narrow_slots_must_fit_body():
    with pytest.raises(GeometryError):
        element_profile(P.replace(L1=6.0))


# ---------------------------------------------------------------- validation


def test_validate_reference_warnings():
    rep = validate_params(P)
    assert rep.ok
    assert len(rep.warnings) == 2
    lam = 299_792_458.0 / 28e9 * 1e3
    assert f"{lam / 2:.3f}" in rep.warnings[0] and "6.46" in rep.warnings[0]
    assert f"{lam / 4:.3f}" in rep.warnings[1] and "7.6" in rep.warnings[1]


def test_validate_invariant_errors():
    assert "w_t < w_a violated" in validate_params(P.replace(w_t=5.0)).errors[0]
    assert any("Ls3 <= Ls4" in e for e in validate_params(P.replace(Ls3=3.5)).errors)
    assert any("strictly positive" in e for e in validate_params(P.replace(h=0.0)).errors)
    assert any("h + L_s <= L" in e for e in validate_params(P.replace(h=7.0)).errors)


def test_validate_band_configurable():
    assert len(validate_params(P, ls_band=(0.5, 3.0)).warnings) == 1


# ---------------------------------------------------------------- presets and config


def test_preset_round_trip():
    assert load_preset("camv-reference") == P
    assert load_preset("camv-table1") == P
    assert ElementParams.from_dict(P.to_dict()) == P


def test_preset_dir_override(tmp_path, monkeypatch):
    data = P.to_dict() | {"L_s": 7.0}
    (tmp_path / "custom.json").write_text(json.dumps(data))
    monkeypatch.setenv("CAMV_PRESET_DIR", str(tmp_path))
    assert load_preset("custom").L_s == 7.0
    assert load_preset("camv-reference") == P
    with pytest.raises(ConfigError):
        load_preset("missing")


def test_from_dict_reports_json_path():
    bad = P.to_dict() | {"Ls4": "deep"}
    with pytest.raises(ConfigError) as info:
        ElementParams.from_dict(bad, "$.element")
    assert info.value.path == "$.element.Ls4"
    incomplete = {k: v for k, v in P.to_dict().items() if k != "W_s"}
    with pytest.raises(ConfigError) as info:
        ElementParams.from_dict(incomplete)
    assert info.value.path == "$.W_s"


# ---------------------------------------------------------------- lattice


def test_lattice_footprint_and_centre_elements():
    lay = ArrayLayout.square(4, 6.46)
    assert lay.footprint == pytest.approx((25.84, 25.84), abs=1e-12)
    centres = array_lattice(lay)
    dist = np.hypot(centres[:, 0], centres[:, 1])
    nearest = sorted((np.argsort(dist, kind="stable")[:4] + 1).tolist())
    assert nearest == [6, 7, 10, 11]


def test_single_element_at_origin():
    assert array_lattice(ArrayLayout(1, 1, 3.0, 3.0)).tolist() == [[0.0, 0.0]]


@given(rows=st.integers(1, 9), cols=st.integers(1, 9), px=st.floats(0.1, 50), py=st.floats(0.1, 50))
def test_lattice_centroid_and_numbering(rows, cols, px, py):
    lay = ArrayLayout(rows, cols, px, py)
    c = array_lattice(lay)
    assert c.shape == (rows * cols, 2)
    assert np.all(np.abs(c.mean(axis=0)) <= 1e-12)
    numbering = lay.numbering
    assert sorted(numbering) == list(range(1, rows * cols + 1))
    assert len(set(numbering.values())) == rows * cols
    for k, (r, col) in numbering.items():
        assert lay.element_index(r, col) == k
        assert r == (k - 1) // cols


@pytest.mark.parametrize("args", [(0, 4, 1, 1), (4, 4, 0, 1), (4, 4, 1, -2), (2.5, 1, 1, 1)])
def test_layout_rejects_bad_values(args):
    with pytest.raises((ArgumentError, DomainError)):
        ArrayLayout(*args)


def test_reference_preset_values():
    assert (P.w, P.w_a, P.w_t, P.L_s, P.L, P.d, P.t, P.h, P.W_s) == (5.7, 4.75, 0.45, 7.6, 14.25, 6.46, 2.28, 2.0, 0.4)
    assert P.narrow_slots == (2.66, 1.0, 2.0, 1.15, 2.0, 0.8)
    assert P.f_design == 28e9
