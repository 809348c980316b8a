"""Pattern cuts, surfaces, and metric measurement."""

import numpy as np
import pytest

from ringsynth.analysis import (
    DB_FLOOR,
    PatternCut,
    cut_rows,
    evaluate_cut,
    evaluate_surface,
    measure_metrics,
    metrics_rows,
    surface_rows,
)
from ringsynth.errors import DegeneratePatternError, DomainError
from ringsynth.geometry import RingGeometry, Weights, uniform_half_wavelength_geometry
from ringsynth.solver import synthesize
from ringsynth.targets import equi_ripple, flat_top, from_table, with_nulls


def cut_from_target(target, points: int = 4001) -> PatternCut:
    """A cut whose dB trace is the target itself (no synthesis involved)."""
    u = np.linspace(-1.0, 1.0, points)
    amp = np.array([target.amplitude(float(x)) for x in u])
    floor = 10.0 ** (DB_FLOOR / 20.0)
    db = 20.0 * np.log10(np.maximum(amp / amp.max(), floor))
    return PatternCut(u_grid=u, amplitude_db=db)


class TestEvaluateCut:
    def test_center_only_is_flat(self):
        geom = RingGeometry(1.0, (0.5,), (6,), has_center_element=True)
        cut = evaluate_cut(geom, Weights(center=1, rings=(0,)))
        assert np.all(cut.amplitude_db == 0.0)

    def test_even_in_u(self):
        rng = np.random.default_rng(0)
        geom = uniform_half_wavelength_geometry(6)
        w = Weights(center=rng.standard_normal(), rings=tuple(rng.standard_normal(6)))
        cut = evaluate_cut(geom, w)
        assert np.max(np.abs(cut.amplitude_db - cut.amplitude_db[::-1])) <= 1e-12

    def test_scale_invariance_exact_for_power_of_two(self):
        rng = np.random.default_rng(1)
        geom = uniform_half_wavelength_geometry(5)
        w = Weights(center=rng.standard_normal(), rings=tuple(rng.standard_normal(5)))
        scaled = Weights(center=2.0 * w.center, rings=tuple(2.0 * r for r in w.rings))
        a = evaluate_cut(geom, w)
        b = evaluate_cut(geom, scaled)
        assert np.array_equal(a.amplitude_db, b.amplitude_db)

    def test_scale_invariance_complex_scalar(self):
        rng = np.random.default_rng(2)
        geom = uniform_half_wavelength_geometry(5)
        w = Weights(center=rng.standard_normal(), rings=tuple(rng.standard_normal(5)))
        c = 0.7 + 0.2j
        scaled = Weights(center=c * w.center, rings=tuple(c * r for r in w.rings))
        a = evaluate_cut(geom, w)
        b = evaluate_cut(geom, scaled)
        assert np.max(np.abs(a.amplitude_db - b.amplitude_db)) <= 1e-9

    def test_all_zero_weights_degenerate(self):
        geom = uniform_half_wavelength_geometry(3)
        with pytest.raises(DegeneratePatternError):
            evaluate_cut(geom, Weights(center=0, rings=(0, 0, 0)))

    def test_grid_floor_enforced(self):
        geom = uniform_half_wavelength_geometry(3)
        w = Weights(center=1, rings=(1, 1, 1))
        with pytest.raises(DomainError):
            evaluate_cut(geom, w, grid_points=400)

    def test_peak_is_zero_db(self):
        geom = uniform_half_wavelength_geometry(4)
        w = Weights(center=1, rings=(1, 0.5, 0.2, 0.1))
        cut = evaluate_cut(geom, w)
        assert cut.amplitude_db.max() == 0.0

    def test_db_floor_applied(self):
        # difference-style weights with exact zero at u = 0 would otherwise log(0)
        geom = RingGeometry(1.0, (0.5,), (6,), has_center_element=True)
        cut = evaluate_cut(geom, Weights(center=-6.0, rings=(1.0,)))
        assert np.all(cut.amplitude_db >= DB_FLOOR)


class TestMeasureMetrics:
    def test_chebyshev_target_as_own_cut(self):
        target = equi_ripple(-30.0, 10)
        metrics = measure_metrics(cut_from_target(target), target)
        assert metrics.sll_db == pytest.approx(-30.0, abs=0.5)

    def test_flat_line_has_no_sidelobes(self):
        target = from_table([(-1.0, 1.0), (1.0, 1.0)])
        u = np.linspace(-1, 1, 2001)
        cut = PatternCut(u_grid=u, amplitude_db=np.zeros_like(u))
        metrics = measure_metrics(cut, target)
        assert metrics.sll_db is None

    def test_inserted_notch_depth(self):
        target = with_nulls(flat_top(0.9, 0.0), [0.5], -40.0, 0.05)
        metrics = measure_metrics(cut_from_target(target), target)
        assert len(metrics.null_depths_db) == 1
        center, depth = metrics.null_depths_db[0]
        assert center == 0.5
        assert depth == pytest.approx(-40.0, abs=1.0)

    def test_flat_top_ripple_measured_in_passband(self):
        geom = uniform_half_wavelength_geometry(9)
        target = flat_top(0.4, 0.12)
        w, _ = synthesize(geom, target)
        metrics = measure_metrics(evaluate_cut(geom, w), target)
        assert metrics.passband_ripple_db is not None
        assert 0.0 < metrics.passband_ripple_db < 3.0

    def test_pencil_beam_hpbw(self):
        target = equi_ripple(-30.0, 10)
        metrics = measure_metrics(cut_from_target(target), target)
        assert metrics.hpbw_u is not None
        assert 0.01 < metrics.hpbw_u < 0.3

    def test_sll_stable_under_grid_refinement(self):
        geom = uniform_half_wavelength_geometry(10)
        target = equi_ripple(-30.0, 10)
        w, _ = synthesize(geom, target)
        coarse = measure_metrics(evaluate_cut(geom, w, grid_points=2001), target)
        fine = measure_metrics(evaluate_cut(geom, w, grid_points=8001), target)
        assert abs(coarse.sll_db - fine.sll_db) <= 0.1

    def test_rms_error_reported(self):
        target = equi_ripple(-25.0, 8)
        metrics = measure_metrics(cut_from_target(target), target)
        assert metrics.rms_error_vs_target_db == pytest.approx(0.0, abs=1e-9)


class TestEvaluateSurface:
    def test_constant_along_phi(self):
        rng = np.random.default_rng(3)
        geom = uniform_half_wavelength_geometry(4)
        w = Weights(center=rng.standard_normal(), rings=tuple(rng.standard_normal(4)))
        surface = evaluate_surface(geom, w, theta_points=91, phi_points=36)
        assert np.max(np.ptp(surface.amplitude_db, axis=1)) == 0.0

    def test_boresight_matches_cut(self):
        geom = uniform_half_wavelength_geometry(4)
        w = Weights(center=1, rings=(1, 1, 1, 1))  # peak at u = 0 on both grids
        surface = evaluate_surface(geom, w, theta_points=91, phi_points=8)
        cut = evaluate_cut(geom, w)
        mid = len(cut.u_grid) // 2
        assert surface.amplitude_db[0, 0] == pytest.approx(
            cut.amplitude_db[mid], abs=1e-9
        )

    def test_horizon_matches_cut_edge(self):
        geom = uniform_half_wavelength_geometry(4)
        w = Weights(center=1, rings=(1, 1, 1, 1))
        surface = evaluate_surface(geom, w, theta_points=91, phi_points=8)
        cut = evaluate_cut(geom, w)
        assert surface.amplitude_db[-1, 0] == pytest.approx(
            cut.amplitude_db[-1], abs=1e-9
        )

    def test_rejects_tiny_grid(self):
        geom = uniform_half_wavelength_geometry(2)
        w = Weights(center=1, rings=(1, 1))
        with pytest.raises(DomainError):
            evaluate_surface(geom, w, theta_points=1, phi_points=8)

    def test_surface_column_is_pattern_at_sin_theta(self):
        # any fixed-phi column must be the peak-normalized |F(sin theta)|;
        # cross-checked through the scalar evaluation route
        from ringsynth.geometry import array_factor

        geom = uniform_half_wavelength_geometry(4)
        w = Weights(center=1, rings=(1, 1, 1, 1))  # peak at theta = 0
        surface = evaluate_surface(geom, w, theta_points=121, phi_points=5)
        peak = abs(array_factor(geom, w, 0.0))
        for i, theta in enumerate(surface.theta):
            mag = abs(array_factor(geom, w, float(np.sin(theta)))) / peak
            expected = 20.0 * np.log10(max(mag, 1e-10))
            assert surface.amplitude_db[i, 2] == pytest.approx(expected, abs=1e-9)


class TestSerialization:
    def test_cut_rows_format(self):
        geom = uniform_half_wavelength_geometry(3)
        w = Weights(center=1, rings=(1, 1, 1))
        cut = evaluate_cut(geom, w)
        rows = cut_rows(cut, flat_top(0.4, 0.1))
        assert rows[0] == "u,db,target_db"
        assert len(rows) == len(cut.u_grid) + 1
        first = rows[1].split(",")
        assert float(first[0]) == -1.0
        assert len(first) == 3

    def test_surface_rows_format(self):
        geom = uniform_half_wavelength_geometry(2)
        w = Weights(center=1, rings=(1, 1))
        surface = evaluate_surface(geom, w, theta_points=3, phi_points=4)
        rows = surface_rows(surface)
        assert rows[0] == "theta,phi,db"
        assert len(rows) == 3 * 4 + 1

    def test_metrics_rows_include_nulls(self):
        target = with_nulls(flat_top(0.9, 0.0), [0.5], -40.0, 0.05)
        metrics = measure_metrics(cut_from_target(target), target)
        rows = metrics_rows(metrics)
        assert any(row.startswith("sll_db = ") for row in rows)
        assert any(row.startswith("null_depth_db[0.5") for row in rows)
