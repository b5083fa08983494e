import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import (
    af_term_by_term,
    brute_force_onset,
    dense_cut_db,
    lattice_positions_m,
)

from camv.beamsteer import Excitation, SteeringCommand, excitation_for
from camv.errors import (
    AccuracyError,
    ArgumentError,
    DegeneratePatternError,
    DomainError,
    PatternFormatError,
)
from camv.farfield import (
    ISOTROPIC,
    AngleGrid,
    ElementModel,
    FarFieldPattern,
    angular_distance,
    array_factor,
    array_factor_pattern,
    compute_pattern,
    directivity,
    embedded_array_pattern,
    export_pattern_csv,
    grating_lobe_onset,
    import_embedded_pattern,
    pattern_metrics,
    scan_sweep,
)
from camv.geometry import ArrayLayout

C0 = 299_792_458.0
LAY4 = ArrayLayout.square(4, 6.46)
GRID = AngleGrid.regular()
HALF_DEG = math.radians(0.5)


def steer(layout, theta_deg, phi_deg, f):
    return excitation_for(layout, SteeringCommand.from_degrees(theta_deg, phi_deg, f))


# ---------------------------------------------------------------- grid and types


def test_regular_grid_defaults():
    g = AngleGrid.regular()
    assert g.shape == (361, 360)
    assert g.theta[-1] == pytest.approx(math.pi / 2)
    assert g.azimuth_closure == "wrap"


@pytest.mark.parametrize("theta", [[0.0], [0.0, 0.0], [0.2, 0.1]])
def test_grid_invariants(theta):
    with pytest.raises(ArgumentError):
        AngleGrid(np.array(theta), np.array([0.0, 1.0]))


def test_pattern_invariants():
    g = AngleGrid(np.linspace(0, 1, 3), np.linspace(0, 1, 4))
    with pytest.raises(ArgumentError):
        FarFieldPattern(g, np.ones((4, 3)), 28e9, "gain_estimate")
    with pytest.raises(DomainError):
        FarFieldPattern(g, np.full((3, 4), np.nan), 28e9, "gain_estimate")
    with pytest.raises(DomainError):
        FarFieldPattern(g, -np.ones((3, 4)), 28e9, "gain_estimate")
    with pytest.raises(ArgumentError):
        FarFieldPattern(g, np.ones((3, 4)), 28e9, "realized_gain")


def test_element_model():
    assert ElementModel().q == 1.0
    with pytest.raises(DomainError):
        ElementModel("cosine_q", -1.0)
    with pytest.raises(DomainError):
        ElementModel("cosine_q", math.inf)
    m = ElementModel("cosine_q", 2.0)
    assert m.field(np.array([0.0, math.pi / 3, 2.0]))[:2] == pytest.approx([1.0, 0.25])
    assert m.field(2.0) == 0.0


# ---------------------------------------------------------------- array factor


def test_af_peak_equals_element_count():
    for t, p, f in [(30, 90, 28e9), (20, 45, 26e9), (0, 0, 30e9)]:
        af = array_factor(LAY4, steer(LAY4, t, p, f), f, math.radians(t), math.radians(p))
        assert abs(af) == pytest.approx(16.0, rel=1e-12)


def test_single_element_af_is_unity():
    lay = ArrayLayout(1, 1, 6.46, 6.46)
    exc = Excitation(lay, [1.0], [0.7])
    th, ph = GRID.mesh()
    assert np.allclose(np.abs(array_factor(lay, exc, 28e9, th[::40, ::40], ph[::40, ::40])), 1.0, atol=1e-15)


def test_linear_array_against_four_term_sum():
    lay = ArrayLayout(4, 1, 6.46, 6.46)
    exc = Excitation.uniform(lay)
    got = array_factor(lay, exc, 28e9, math.radians(30), 0.0)
    k = 2 * math.pi * 28e9 / C0
    xs = [(n - 1.5) * 6.46e-3 for n in range(4)]
    want = sum(np.exp(1j * k * x * 0.5) for x in xs)
    assert abs(got - want) <= 1e-12 * abs(want)


def test_af_size_mismatch():
    with pytest.raises(ArgumentError):
        array_factor(LAY4, Excitation.uniform(ArrayLayout(2, 2, 6.46, 6.46)), 28e9, 0.0, 0.0)


@settings(max_examples=10, deadline=None)
@given(
    rows=st.integers(1, 3),
    cols=st.integers(1, 3),
    seed=st.integers(0, 2**32 - 1),
)
def test_af_matches_term_by_term_sum(rows, cols, seed):
    rng = np.random.default_rng(seed)
    lay = ArrayLayout(rows, cols, float(rng.uniform(2, 9)), float(rng.uniform(2, 9)))
    amp = rng.uniform(0.1, 2.0, lay.size)
    ph = rng.uniform(-math.pi, math.pi, lay.size)
    exc = Excitation(lay, amp, ph)
    f = float(rng.uniform(20e9, 40e9))
    th = rng.uniform(0, math.pi / 2, 25)
    phi = rng.uniform(0, 2 * math.pi, 25)
    got = array_factor(lay, exc, f, th, phi)
    pos = lattice_positions_m(rows, cols, lay.pitch_x, lay.pitch_y)
    for i in range(th.size):
        want = af_term_by_term(pos, amp, exc.phase, f, th[i], phi[i])
        assert abs(got[i] - want) <= 1e-12 * max(abs(want), 1.0)


def test_broadside_symmetry():
    th, ph = GRID.mesh()
    exc = Excitation.uniform(LAY4)
    a = np.abs(array_factor(LAY4, exc, 28e9, th, ph))
    b = np.abs(array_factor(LAY4, exc, 28e9, th, ph + math.pi))
    assert np.max(np.abs(a - b)) <= 1e-12


# ---------------------------------------------------------------- synthesised patterns


def test_broadside_peak_at_zenith():
    m = pattern_metrics(compute_pattern(LAY4, Excitation.uniform(LAY4), 28e9, GRID, ISOTROPIC))
    assert m.peak_theta == 0.0


def grid_argmax_direction(pattern):
    p = pattern.power
    i, j = np.unravel_index(np.argmax(p), p.shape)
    return pattern.grid.theta[i], pattern.grid.phi[j]


def test_steered_isotropic_peak_within_one_cell():
    p = compute_pattern(LAY4, steer(LAY4, 30, 90, 28e9), 28e9, GRID, ISOTROPIC)
    t, f = grid_argmax_direction(p)
    assert angular_distance(t, f, math.radians(30), math.radians(90)) <= HALF_DEG


def test_scan_loss_with_cosine_element():
    for f in (26e9, 28e9, 30e9):
        b = compute_pattern(LAY4, steer(LAY4, 0, 90, f), f, GRID).power.max()
        s = compute_pattern(LAY4, steer(LAY4, 30, 90, f), f, GRID).power.max()
        assert s < b


def test_cosine_element_pulls_gain_peak_toward_broadside():
    # the array factor still points at 30 deg; the gain maximum sits a little closer to zenith
    for f in (26e9, 28e9, 30e9):
        (row,) = scan_sweep(LAY4, [f], [math.radians(30)], math.pi / 2)
        assert row.pointing_error <= HALF_DEG
        peak = math.degrees(row.metrics.peak_theta)
        assert 27.0 <= peak < 30.0


@settings(max_examples=12, deadline=None)
@given(theta=st.floats(0, 30), phi=st.floats(0, 360), f=st.floats(26e9, 30e9))
def test_steering_consistency(theta, phi, f):
    p = compute_pattern(LAY4, steer(LAY4, theta, phi, f), f, GRID, ISOTROPIC)
    t, ph = grid_argmax_direction(p)
    assert angular_distance(t, ph, math.radians(theta), math.radians(phi)) <= HALF_DEG


def test_normalisation_matches_quadrature_directivity():
    for model in (ISOTROPIC, ElementModel()):
        p = compute_pattern(LAY4, Excitation.uniform(LAY4), 28e9, GRID, model)
        d = directivity(p)
        assert 10 * math.log10(p.power.max()) == pytest.approx(d.dbi, abs=1e-9)


def test_embedded_superposition(tmp_path):
    g = AngleGrid.regular(1.0, 2.0)
    th, _ = g.mesh()
    elem = FarFieldPattern(g, 2.0 * np.cos(th) ** 2, 28e9, "imported_embedded")
    exc = steer(LAY4, 20, 0, 28e9)
    arr = embedded_array_pattern(LAY4, exc, 28e9, elem)
    af = array_factor(LAY4, exc, 28e9, *g.mesh())
    np.testing.assert_allclose(arr.power, 2.0 * np.cos(th) ** 2 * np.abs(af) ** 2 / 16, rtol=1e-12, atol=1e-15)


# ---------------------------------------------------------------- metrics


def test_first_sidelobe_four_element_linear():
    lay = ArrayLayout(4, 1, 6.46, 6.46)
    m = pattern_metrics(compute_pattern(lay, Excitation.uniform(lay), 28e9, GRID, ISOTROPIC), cut_phi=0.0)
    angles, db = dense_cut_db(4, 6.46e-3, 28e9, 0.0, step_deg=0.001)
    left = np.concatenate([[-np.inf], db[:-1]])
    right = np.concatenate([db[1:], [-np.inf]])
    peaks = db[(db >= left) & (db >= right) & (db < -0.1)]
    oracle = float(peaks.max())
    assert oracle == pytest.approx(-11.3, abs=0.3)
    assert m.sidelobe_db == pytest.approx(oracle, abs=0.05)


def test_hpbw_4x4_against_dense_cut():
    m = pattern_metrics(compute_pattern(LAY4, Excitation.uniform(LAY4), 28e9, GRID, ISOTROPIC), cut_phi=math.pi / 2)
    angles, db = dense_cut_db(4, 6.46e-3, 28e9, 0.0, step_deg=0.001)
    inside = angles[db >= 10 * math.log10(0.5)]
    oracle = inside.max() - inside.min()
    assert abs(m.hpbw_deg - oracle) <= 1.0
    assert m.hpbw_deg == pytest.approx(21.0, abs=1.0)


def test_degenerate_single_isotropic_element():
    lay = ArrayLayout(1, 1, 6.46, 6.46)
    m = pattern_metrics(compute_pattern(lay, Excitation.uniform(lay), 28e9, GRID, ISOTROPIC), cut_phi=0.0)
    assert m.sidelobe_db is None
    assert m.hpbw_deg == pytest.approx(180.0)
    assert not m.grating_lobe


def test_all_zero_pattern_is_degenerate():
    with pytest.raises(DegeneratePatternError):
        pattern_metrics(FarFieldPattern(GRID, np.zeros(GRID.shape), 28e9, "gain_estimate"))


def test_cut_outside_coverage():
    g = AngleGrid(np.linspace(0, 1.5, 20), np.linspace(0, 1.0, 20))
    p = FarFieldPattern(g, np.ones(g.shape) + g.mesh()[0], 28e9, "gain_estimate")
    with pytest.raises(ArgumentError):
        pattern_metrics(p, cut_phi=3.0)


@settings(max_examples=15, deadline=None)
@given(theta=st.floats(0, 40), phi=st.sampled_from([0.0, 90.0, 45.0]), f=st.floats(26e9, 30e9))
def test_metric_invariants(theta, phi, f):
    m = pattern_metrics(compute_pattern(LAY4, steer(LAY4, theta, phi, f), f, GRID), cut_phi=math.radians(phi))
    assert m.hpbw_deg > 0
    assert m.sidelobe_db is None or m.sidelobe_db <= 0


# ---------------------------------------------------------------- grating lobes


@pytest.mark.parametrize("f, deg", [(28e9, 41.1), (30e9, 33.2), (26e9, 51.7)])
def test_grating_onset_examples(f, deg):
    res = grating_lobe_onset(6.46e-3, f)
    assert res.status == "bounded"
    assert res.degrees == pytest.approx(deg, abs=0.1)


def test_grating_onset_limits():
    lam = C0 / 28e9
    assert grating_lobe_onset(lam / 2, 28e9).status == "unbounded"
    assert grating_lobe_onset(lam / 2, 28e9).degrees == 90.0
    assert grating_lobe_onset(lam, 28e9).status == "at_broadside"
    with pytest.raises(DomainError):
        grating_lobe_onset(0.0, 28e9)


@pytest.mark.parametrize("pitch_mm", [6.46, 7.0, 7.5, 8.0, 8.5])
@pytest.mark.parametrize("f", [26e9, 27e9, 28e9, 29e9, 30e9])
def test_grating_onset_matches_dense_search(pitch_mm, f):
    analytic = grating_lobe_onset(pitch_mm * 1e-3, f).degrees
    assert abs(analytic - brute_force_onset(pitch_mm * 1e-3, f, tol_deg=0.05)) <= 1.0


def test_sweep_flags_grating_lobe_beyond_onset():
    (row,) = scan_sweep(LAY4, [30e9], [math.radians(45)], math.pi / 2)
    assert row.metrics.grating_lobe
    for f in (26e9, 28e9, 30e9):
        for t in (0, 30):
            (row,) = scan_sweep(LAY4, [f], [math.radians(t)], math.pi / 2)
            assert not row.metrics.grating_lobe


# ---------------------------------------------------------------- scan sweep


def test_sweep_shape_and_order():
    rows = scan_sweep(LAY4, [26e9, 28e9, 30e9], [0.0, math.radians(30)], math.pi / 2)
    assert [(r.frequency, round(math.degrees(r.theta0))) for r in rows] == [
        (26e9, 0), (26e9, 30), (28e9, 0), (28e9, 30), (30e9, 0), (30e9, 30)
    ]
    assert all(r.pointing_error <= HALF_DEG for r in rows)
    (single,) = scan_sweep(LAY4, [28e9], [0.0], math.pi / 2)
    assert single.metrics.peak_theta == 0.0
    with pytest.raises(ArgumentError):
        scan_sweep(LAY4, [], [0.0], 0.0)


# ---------------------------------------------------------------- directivity


def sphere_grid(theta_step=0.5, phi_step=1.0):
    return AngleGrid(
        np.radians(np.linspace(0, 180, int(round(180 / theta_step)) + 1)),
        np.radians(np.arange(0, 360, phi_step)),
    )


def test_isotropic_sphere_is_zero_dbi():
    g = sphere_grid()
    d = directivity(FarFieldPattern(g, np.ones(g.shape), None, "gain_estimate"))
    assert d.domain == "sphere"
    assert d.dbi == pytest.approx(0.0, abs=0.05)


def test_two_element_half_wave_pair():
    lam_mm = C0 / 28e9 * 1e3
    lay = ArrayLayout(2, 1, lam_mm / 2, lam_mm / 2)
    d = directivity(array_factor_pattern(lay, Excitation.uniform(lay), 28e9, sphere_grid(0.25)))
    # closed form: D = 2 / (1 + sin(kd)/(kd)) = 2 at kd = pi
    assert d.linear == pytest.approx(2.0, rel=0.01)
    assert d.dbi == pytest.approx(10 * math.log10(2), abs=0.1)


def test_directivity_converges_on_grid_refinement():
    exc = Excitation.uniform(LAY4)
    coarse = directivity(array_factor_pattern(LAY4, exc, 28e9, sphere_grid(1.0, 2.0))).dbi
    fine = directivity(array_factor_pattern(LAY4, exc, 28e9, sphere_grid(0.5, 1.0))).dbi
    assert abs(coarse - fine) < 0.05


def test_directivity_hemisphere_and_errors():
    p = compute_pattern(LAY4, Excitation.uniform(LAY4), 28e9, GRID)
    assert directivity(p).domain == "hemisphere"
    coarse = AngleGrid.regular(15.0, 45.0)
    with pytest.raises(AccuracyError):
        directivity(FarFieldPattern(coarse, np.ones(coarse.shape), None, "gain_estimate"))
    partial = AngleGrid(np.radians(np.linspace(0, 60, 61)), np.radians(np.arange(360)))
    with pytest.raises(ArgumentError):
        directivity(FarFieldPattern(partial, np.ones(partial.shape), None, "gain_estimate"))


def test_directivity_closed_azimuth_equals_wrapped():
    g_wrap = sphere_grid(1.0, 2.0)
    g_closed = AngleGrid(g_wrap.theta, np.radians(np.arange(0, 361, 2.0)))
    exc = Excitation.uniform(LAY4)
    a = directivity(array_factor_pattern(LAY4, exc, 28e9, g_wrap)).dbi
    b = directivity(array_factor_pattern(LAY4, exc, 28e9, g_closed)).dbi
    assert a == pytest.approx(b, abs=1e-9)


# ---------------------------------------------------------------- CSV exchange


def small_grid():
    return AngleGrid(np.radians(np.linspace(0, 180, 181)), np.radians(np.arange(0, 360, 5.0)))


def test_import_181_by_73_grid(tmp_path):
    g = AngleGrid(np.radians(np.linspace(0, 180, 181)), np.radians(np.linspace(0, 360, 73)))
    p = FarFieldPattern(g, np.ones(g.shape), None, "gain_estimate")
    export_pattern_csv(p, tmp_path / "p.csv")
    q = import_embedded_pattern(tmp_path / "p.csv")
    assert q.values.shape == (181, 73)
    assert q.kind == "imported_embedded"


@pytest.mark.parametrize("kind", ["array_factor", "gain_estimate"])
def test_export_import_round_trip(tmp_path, kind):
    g = small_grid()
    if kind == "array_factor":
        p = array_factor_pattern(LAY4, steer(LAY4, 25, 60, 28e9), 28e9, g)
    else:
        p = compute_pattern(LAY4, steer(LAY4, 25, 60, 28e9), 28e9, AngleGrid.regular(1.0, 5.0))
    export_pattern_csv(p, tmp_path / "p.csv")
    q = import_embedded_pattern(tmp_path / "p.csv", frequency=28e9)
    np.testing.assert_allclose(q.grid.theta, p.grid.theta, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(q.grid.phi, p.grid.phi, rtol=1e-9, atol=1e-12)
    scale = np.abs(p.values).max()
    assert np.max(np.abs(q.values - p.values)) <= 1e-9 * scale
    header = (tmp_path / "p.csv").read_text().splitlines()[0]
    assert header == ("theta_deg,phi_deg,re,im" if kind == "array_factor" else "theta_deg,phi_deg,gain_linear")


def write_rows(path, header, rows):
    path.write_text("\n".join([header] + [",".join(map(str, r)) for r in rows]) + "\n")


def grid_rows(n_t=3, n_p=3):
    return [[t, p, 1.0] for t in range(n_t) for p in range(n_p)]


def test_import_missing_point(tmp_path):
    rows = grid_rows()
    del rows[4]
    write_rows(tmp_path / "p.csv", "theta_deg,phi_deg,gain_linear", rows)
    with pytest.raises(PatternFormatError, match="missing point theta=1, phi=1"):
        import_embedded_pattern(tmp_path / "p.csv")


def test_import_duplicate_row(tmp_path):
    rows = grid_rows() + [[2, 2, 1.0]]
    write_rows(tmp_path / "p.csv", "theta_deg,phi_deg,gain_linear", rows)
    with pytest.raises(PatternFormatError) as info:
        import_embedded_pattern(tmp_path / "p.csv")
    assert info.value.row == 11


def test_import_non_finite_and_ragged(tmp_path):
    rows = grid_rows()
    rows[2][2] = "nan"
    write_rows(tmp_path / "p.csv", "theta_deg,phi_deg,gain_linear", rows)
    with pytest.raises(PatternFormatError) as info:
        import_embedded_pattern(tmp_path / "p.csv")
    assert info.value.row == 4
    rows = grid_rows()
    rows[5] = rows[5][:2]
    write_rows(tmp_path / "q.csv", "theta_deg,phi_deg,gain_linear", rows)
    with pytest.raises(PatternFormatError) as info:
        import_embedded_pattern(tmp_path / "q.csv")
    assert info.value.row == 7


def test_import_bad_header(tmp_path):
    write_rows(tmp_path / "p.csv", "theta,phi,g", grid_rows())
    with pytest.raises(PatternFormatError) as info:
        import_embedded_pattern(tmp_path / "p.csv")
    assert info.value.row == 1
