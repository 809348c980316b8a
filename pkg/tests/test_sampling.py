"""Sample placement, minimum counts, and kernel reconstruction."""

import math

import numpy as np
import pytest

from ringsynth.errors import DomainError
from ringsynth.geometry import RingGeometry, uniform_half_wavelength_geometry
from ringsynth.sampling import (
    SampleSet,
    build_sample_set,
    export_samples,
    midpoint_abscissas,
    min_batch_samples,
    min_total_samples,
    reconstruct,
    sample_rows,
)
from ringsynth.specialfn import bessel_j0
from ringsynth.targets import flat_top, from_table


def constant_target():
    return from_table([(-1.0, 1.0), (1.0, 1.0)])


class TestMinimumCounts:
    def test_nine_rings_half_wavelength(self):
        geom = uniform_half_wavelength_geometry(9)
        assert min_batch_samples(geom) == 16
        assert min_total_samples(geom) == 32

    def test_eleven_rings(self):
        geom = uniform_half_wavelength_geometry(11)
        assert min_batch_samples(geom) == 20

    def test_fourteen_rings(self):
        geom = uniform_half_wavelength_geometry(14)
        assert min_batch_samples(geom) == 26
        assert min_total_samples(geom) == 52

    def test_floor_dominates_tight_rings(self):
        geom = RingGeometry(1.0, (0.5, 0.625), (6, 8))
        assert min_batch_samples(geom) == 3
        assert min_total_samples(geom) == 6

    def test_single_ring_uses_floor(self):
        geom = RingGeometry(1.0, (0.5,), (6,))
        assert min_batch_samples(geom) == 2
        assert min_total_samples(geom) == 4

    def test_total_always_doubles_batch(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = int(rng.integers(1, 18))
            gaps = rng.uniform(0.1, 0.9, n)
            radii = tuple(np.cumsum(gaps))
            geom = RingGeometry(1.0, radii, tuple([6] * n))
            assert min_total_samples(geom) == 2 * min_batch_samples(geom)

    def test_uses_largest_adjacent_gap(self):
        geom = RingGeometry(1.0, (0.5, 1.0, 2.5), (6, 13, 31))
        assert min_batch_samples(geom) == math.ceil(4 * 2 * 1.5)


class TestBuildSampleSet:
    def test_midpoint_formula(self):
        assert midpoint_abscissas(4) == (0.125, 0.375, 0.625, 0.875)

    def test_batch_takes_odd_numbered_midpoints(self):
        geom = uniform_half_wavelength_geometry(1)
        samples = build_sample_set(geom, constant_target())
        assert samples.total_count == 4
        assert samples.batch_count == 2
        assert samples.batch_abscissas == (0.125, 0.625)
        assert samples.incremental_abscissas == (0.375, 0.875)

    def test_constant_target_values(self):
        geom = uniform_half_wavelength_geometry(3)
        samples = build_sample_set(geom, constant_target())
        assert all(v == 1.0 for v in samples.values)

    def test_flat_top_values_on_minimum_grid(self):
        geom = uniform_half_wavelength_geometry(9)
        samples = build_sample_set(geom, flat_top(0.4, 0.0))
        assert samples.total_count == 32
        for u, v in zip(samples.abscissas, samples.values):
            assert v == (1.0 if u < 0.4 else 0.0)

    def test_oversample_scales_total(self):
        geom = uniform_half_wavelength_geometry(9)
        samples = build_sample_set(geom, constant_target(), oversample=2.0)
        assert samples.total_count == 64
        assert samples.batch_count == 32

    def test_oversample_rounds_to_even(self):
        geom = uniform_half_wavelength_geometry(9)
        samples = build_sample_set(geom, constant_target(), oversample=1.1)
        assert samples.total_count % 2 == 0

    def test_explicit_total_must_be_even(self):
        geom = uniform_half_wavelength_geometry(3)
        with pytest.raises(DomainError):
            build_sample_set(geom, constant_target(), total_count=7)

    def test_rejects_undersampling_factor(self):
        geom = uniform_half_wavelength_geometry(3)
        with pytest.raises(DomainError):
            build_sample_set(geom, constant_target(), oversample=0.5)

    def test_abscissas_strictly_increasing_and_interior(self):
        geom = uniform_half_wavelength_geometry(14)
        samples = build_sample_set(geom, constant_target(), oversample=3.0)
        assert all(b > a for a, b in zip(samples.abscissas, samples.abscissas[1:]))
        assert samples.abscissas[0] > 0.0
        assert samples.abscissas[-1] < 1.0


class TestSampleSetValidation:
    def test_rejects_length_mismatch(self):
        with pytest.raises(DomainError):
            SampleSet((0.1, 0.2), (1.0,), 1)

    def test_rejects_unsorted(self):
        with pytest.raises(DomainError):
            SampleSet((0.2, 0.1), (1.0, 1.0), 1)

    def test_rejects_bad_batch_count(self):
        with pytest.raises(DomainError):
            SampleSet((0.1, 0.2), (1.0, 1.0), 3)

    def test_rejects_non_finite_value(self):
        with pytest.raises(DomainError):
            SampleSet((0.1, 0.2), (1.0, math.inf), 1)


class TestReconstruct:
    def test_cardinality_on_built_grid(self):
        geom = uniform_half_wavelength_geometry(5)
        samples = build_sample_set(geom, flat_top(0.4, 0.1))
        for u, v in zip(samples.abscissas, samples.values):
            assert reconstruct(samples, u) == pytest.approx(v, abs=1e-9)

    def test_all_zero_values(self):
        samples = SampleSet(midpoint_abscissas(16), (0.0,) * 16, 8)
        for u in np.linspace(-1, 1, 50):
            assert reconstruct(samples, float(u)) == 0.0

    def test_constant_set_midpoints(self):
        samples = SampleSet(midpoint_abscissas(32), (1.0,) * 32, 16)
        abscissas = samples.abscissas
        for a, b in zip(abscissas, abscissas[1:]):
            assert reconstruct(samples, 0.5 * (a + b)) == pytest.approx(1.0, abs=1e-6)

    def test_bandlimited_pattern_reconstruction(self):
        # values from an exact pattern of random weights; reconstruction must
        # track the pattern between samples to within 1% of its peak
        rng = np.random.default_rng(42)
        geom = uniform_half_wavelength_geometry(9)
        weights = rng.standard_normal(10)
        k = geom.wavenumber

        def pattern(u: float) -> float:
            total = weights[-1]
            for r, n, w in zip(geom.radii, geom.elements_per_ring, weights[:9]):
                total += w * n * bessel_j0(k * r * u)
            return total

        total_count = 2 * min_total_samples(geom)
        abscissas = midpoint_abscissas(total_count)
        samples = SampleSet(abscissas, tuple(pattern(u) for u in abscissas), total_count // 2)

        dense = np.linspace(0.0, 1.0, 3001)
        peak = max(abs(pattern(float(u))) for u in dense)
        between = np.linspace(abscissas[0], abscissas[-1], 1501)
        worst = max(abs(reconstruct(samples, float(u)) - pattern(float(u))) for u in between)
        assert worst <= 0.01 * peak

    def test_rejects_non_finite_point(self):
        samples = SampleSet(midpoint_abscissas(4), (1.0,) * 4, 2)
        with pytest.raises(DomainError):
            reconstruct(samples, math.nan)


class TestExport:
    def test_rows_carry_stage_labels(self):
        geom = uniform_half_wavelength_geometry(1)
        samples = build_sample_set(geom, constant_target())
        rows = sample_rows(samples)
        assert rows[0] == "u,value,stage"
        assert rows[1].endswith("batch")
        assert rows[2].endswith("incremental")
        assert len(rows) == samples.total_count + 1

    def test_export_writes_file(self, tmp_path):
        geom = uniform_half_wavelength_geometry(1)
        samples = build_sample_set(geom, constant_target())
        path = tmp_path / "samples.csv"
        export_samples(samples, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "u,value,stage"
        assert len(lines) == 5
