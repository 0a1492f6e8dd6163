"""Charge-sector spectra and consecutive-spacing-ratio statistics."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargeham import (LatticeSpec, SectorSpectrum, assemble_global,
                       gap_statistics, pooled_gap_statistics, sector_spectra)


@pytest.fixture(scope="module")
def chain6(su2_preferred):
    return assemble_global(LatticeSpec.chain(6), su2_preferred)


@pytest.fixture(scope="module")
def ring6(su2_preferred):
    return assemble_global(LatticeSpec.chain(6, periodic=True),
                           su2_preferred)


class TestSectorSpectra:
    def test_sector_dimensions_are_binomials(self, chain6):
        spectra = sector_spectra(chain6)
        dims = {s.sector[0]: s.dimension for s in spectra}
        want = {6 - 2 * k: math.comb(6, k) for k in range(7)}
        assert dims == want

    def test_sectors_cover_full_spectrum(self, chain6):
        spectra = sector_spectra(chain6)
        pooled = np.sort(np.concatenate([s.levels for s in spectra]))
        full = np.linalg.eigvalsh(chain6.matrix)
        np.testing.assert_allclose(pooled, full, atol=1e-8)

    def test_levels_sorted(self, chain6):
        for s in sector_spectra(chain6):
            assert np.all(np.diff(s.levels) >= 0)

    def test_sector_labels_sorted(self, chain6):
        labels = [s.sector for s in sector_spectra(chain6)]
        assert labels == sorted(labels)

    def test_su3_sector_labels_have_rank_entries(self, su3_preferred):
        ham = assemble_global(LatticeSpec.chain(3), su3_preferred)
        spectra = sector_spectra(ham)
        assert all(len(s.sector) == 2 for s in spectra)
        assert sum(s.dimension for s in spectra) == 27


class TestResolveSpatial:
    def test_refinement_preserves_levels(self, ring6):
        plain = sector_spectra(ring6)
        refined = sector_spectra(ring6, resolve_spatial=True)
        a = np.sort(np.concatenate([s.levels for s in plain]))
        b = np.sort(np.concatenate([s.levels for s in refined]))
        np.testing.assert_allclose(a, b, atol=1e-8)

    def test_refinement_extends_labels(self, ring6):
        plain = {s.sector[0]: s for s in sector_spectra(ring6)}
        refined = sector_spectra(ring6, resolve_spatial=True)
        assert len(refined) > len(plain)
        groups: dict[float, list] = {}
        for s in refined:
            groups.setdefault(s.sector[0], []).append(s)
        for charge, subs in groups.items():
            assert sum(s.dimension for s in subs) == plain[charge].dimension
            if plain[charge].dimension > 1:
                # Multi-state sectors gain refinement labels (Casimir and
                # spatial quantum numbers) beyond the charge value.
                assert all(len(s.sector) > 1 for s in subs)

    def test_open_chain_also_refines(self, chain6):
        refined = sector_spectra(chain6, resolve_spatial=True)
        assert len(refined) > len(sector_spectra(chain6))


class TestGapStatistics:
    def test_goe_matrix_is_wigner_dyson(self):
        rng = np.random.default_rng(42)
        a = rng.normal(size=(1000, 1000))
        levels = np.linalg.eigvalsh((a + a.T) / np.sqrt(2))
        stats = gap_statistics(levels)
        assert stats.verdict == "wigner-dyson-like"
        assert stats.mean_r == pytest.approx(0.5307, abs=0.02)
        assert stats.n_gaps == 998

    def test_iid_levels_are_poisson(self):
        rng = np.random.default_rng(43)
        levels = np.sort(rng.uniform(0, 1000, size=1000))
        stats = gap_statistics(levels)
        assert stats.verdict == "poisson-like"
        assert stats.mean_r == pytest.approx(0.3863, abs=0.02)

    def test_accepts_sector_spectrum(self):
        levels = np.linspace(0, 1, 30) ** 2
        spec = SectorSpectrum((0.0,), levels, 30)
        assert gap_statistics(spec).n_gaps == 28

    def test_small_dimension_inconclusive(self):
        stats = gap_statistics(np.array([0.0, 0.4, 1.0, 1.1]))
        assert stats.verdict == "inconclusive"

    def test_degenerate_levels_merge(self):
        levels = np.repeat(np.linspace(0, 1, 25), 2)
        stats = gap_statistics(levels)
        assert stats.n_gaps == 23  # 25 distinct levels -> 24 gaps -> 23 ratios

    def test_fewer_than_three_distinct_levels(self):
        stats = gap_statistics(np.array([1.0, 1.0, 2.0]))
        assert stats.n_gaps == 0
        assert stats.verdict == "inconclusive"
        assert math.isnan(stats.mean_r)

    def test_histogram_counts_match_gaps(self):
        rng = np.random.default_rng(44)
        levels = np.sort(rng.normal(size=200))
        stats = gap_statistics(levels, bins=10)
        assert int(np.sum(stats.histogram_counts)) == stats.n_gaps
        assert len(stats.histogram_edges) == 11

    def test_to_dict_nan_becomes_null(self):
        stats = gap_statistics(np.array([1.0, 2.0]))
        assert stats.to_dict()["mean_r"] is None

    def test_ratios_bounded_by_one(self):
        rng = np.random.default_rng(45)
        levels = np.sort(rng.normal(size=100))
        stats = gap_statistics(levels)
        assert np.all(stats.histogram_edges <= 1.0 + 1e-12)
        assert 0.0 < stats.mean_r <= 1.0


dyadic = st.integers(min_value=-8, max_value=8).map(lambda k: 2.0 ** k)


class TestAffineInvariance:
    @settings(max_examples=20, deadline=None)
    @given(a=dyadic, seed=st.integers(0, 10_000))
    def test_dyadic_rescaling_bitwise(self, a, seed):
        rng = np.random.default_rng(seed)
        levels = np.sort(rng.normal(size=64))
        base = gap_statistics(levels)
        scaled = gap_statistics(a * levels)
        assert scaled.mean_r == base.mean_r
        np.testing.assert_array_equal(scaled.histogram_counts,
                                      base.histogram_counts)
        assert scaled.verdict == base.verdict

    @settings(max_examples=20, deadline=None)
    @given(a=st.floats(0.1, 10.0, allow_nan=False),
           b=st.floats(-5.0, 5.0, allow_nan=False),
           seed=st.integers(0, 10_000))
    def test_generic_affine_rescaling(self, a, b, seed):
        rng = np.random.default_rng(seed)
        levels = np.sort(rng.normal(size=64))
        base = gap_statistics(levels)
        moved = gap_statistics(a * levels + b)
        assert moved.mean_r == pytest.approx(base.mean_r, rel=1e-10)
        assert moved.verdict == base.verdict


class TestPooled:
    def test_pooling_concatenates_ratios(self):
        rng = np.random.default_rng(46)
        specs = [SectorSpectrum((float(i),), np.sort(rng.normal(size=40)),
                                40) for i in range(3)]
        pooled = pooled_gap_statistics(specs)
        assert pooled.n_gaps == 3 * 38
        singles = [gap_statistics(s) for s in specs]
        want = np.mean([r for s in singles
                        for r in [s.mean_r] * s.n_gaps])
        assert pooled.mean_r == pytest.approx(want, rel=1e-12)

    def test_pooled_dimension_gate(self):
        specs = [SectorSpectrum((0.0,), np.array([0.0, 0.3, 1.0]), 3),
                 SectorSpectrum((1.0,), np.array([0.1, 0.5, 0.6]), 3)]
        pooled = pooled_gap_statistics(specs)
        assert pooled.verdict == "inconclusive"

    def test_chain_pooling(self, chain6):
        spectra = sector_spectra(chain6)
        pooled = pooled_gap_statistics(spectra)
        assert pooled.n_gaps > 0
        assert 0.0 < pooled.mean_r <= 1.0
