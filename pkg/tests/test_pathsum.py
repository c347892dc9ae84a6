"""Path enumeration, amplitude assembly and path overlap."""

import math
from dataclasses import replace

import numpy as np
import pytest

from biphoton import (
    ConfigurationError,
    ContractViolation,
    PairState,
    PathAmplitude,
    Polarization,
    amplitude_rate,
    assemble_amplitude,
    build_grid,
    enumerate_paths,
    gaussian_jsa,
    path_overlap,
    preset,
)

HALF_OVER_ROOT2 = 1.0 / (2.0 * math.sqrt(2.0))


class TestPairState:
    def test_two_equal_weight_terms(self):
        terms = PairState().terms
        assert len(terms) == 2
        assert sum(abs(t.amplitude) ** 2 for t in terms) == pytest.approx(1.0, abs=1e-15)

    def test_no_horizontal_extraordinary_photon(self):
        for term in PairState().terms:
            assert (term.pol1, term.ray1) != (Polarization.H, "e")
            assert (term.pol2, term.ray2) != (Polarization.H, "e")

    def test_relative_phase_enters_second_term(self):
        terms = PairState(relative_phase=math.pi / 2).terms
        assert terms[0].amplitude.imag == pytest.approx(0.0, abs=1e-15)
        assert terms[1].amplitude.imag == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)


class TestEnumeratePaths:
    def test_fig3a_dip_structure(self, fig3a_dip):
        rr, tt = enumerate_paths(fig3a_dip)
        assert (rr.label, tt.label) == ("rr", "tt")
        assert rr.coefficient.real == pytest.approx(-HALF_OVER_ROOT2, rel=1e-12)
        assert tt.coefficient.real == pytest.approx(+HALF_OVER_ROOT2, rel=1e-12)
        assert rr.coefficient.imag == pytest.approx(0.0, abs=1e-15)
        assert (rr.delay_a, rr.delay_b, rr.swapped) == (0.0, 630.0, False)
        assert (tt.delay_a, tt.delay_b, tt.swapped) == (0.0, 630.0, True)

    def test_trombone_delay_enters_arm_one(self, fig3a_dip):
        rr, tt = enumerate_paths(replace(fig3a_dip, trombone_delay=100.0))
        assert (rr.delay_a, rr.delay_b) == (100.0, 630.0)
        assert (tt.delay_a, tt.delay_b) == (0.0, 730.0)

    def test_peak_setting_flips_rr_sign(self):
        rr, tt = enumerate_paths(preset("fig3a_peak"))
        assert rr.coefficient.real == pytest.approx(+HALF_OVER_ROOT2, rel=1e-12)
        assert tt.coefficient.real == pytest.approx(+HALF_OVER_ROOT2, rel=1e-12)

    def test_pair_phase_rotates_tt(self, fig3a_dip):
        _, tt = enumerate_paths(replace(fig3a_dip, pair_phase=math.pi))
        assert tt.coefficient.real == pytest.approx(-HALF_OVER_ROOT2, rel=1e-12)

    def test_zero_projection_drops_path(self, fig3a_dip):
        paths = enumerate_paths(replace(fig3a_dip, analyzer1=0.0, analyzer2=0.0))
        assert len(paths) == 1
        assert paths[0].label == "tt"
        assert abs(paths[0].coefficient) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)

    def test_firing_order_encoding(self):
        # Vertical rods: the port-B photon lags by the rod delay on both
        # paths; horizontal rods reverse the lag.
        for rr, tt in [enumerate_paths(preset("fig3a_dip"))]:
            assert rr.delay_b - rr.delay_a == 630.0
            assert tt.delay_b - tt.delay_a == 630.0
        for rr, tt in [enumerate_paths(preset("fig3b_dip"))]:
            assert rr.delay_a - rr.delay_b == 630.0
            assert tt.delay_a - tt.delay_b == 630.0

    def test_fig4c_delay_structure(self):
        # Matched arm delays per path, but the tt pair is emitted one rod
        # delay later than the rr pair.
        rr, tt = enumerate_paths(preset("fig4c"))
        assert (rr.delay_a, rr.delay_b) == (0.0, 0.0)
        assert (tt.delay_a, tt.delay_b) == (630.0, 630.0)

    def test_requires_hwp_at_45(self, fig3a_dip):
        with pytest.raises(ConfigurationError):
            enumerate_paths(replace(fig3a_dip, hwp_angle=0.0))


class TestAssemble:
    def test_single_path_rate(self, fig3a_dip, default_jsa):
        paths = enumerate_paths(replace(fig3a_dip, analyzer1=0.0, analyzer2=0.0))
        amp = assemble_amplitude(paths, default_jsa)
        assert amplitude_rate(amp) == pytest.approx(abs(paths[0].coefficient) ** 2, rel=1e-9)

    def test_two_identical_paths_quadruple_the_rate(self, default_jsa):
        path = PathAmplitude("tt", 0.3 + 0.0j, 12.0, 340.0, False)
        single = amplitude_rate(assemble_amplitude([path], default_jsa))
        double = amplitude_rate(assemble_amplitude([path, path], default_jsa))
        assert double == pytest.approx(4.0 * single, rel=1e-12)

    def test_ideal_dip_cancels(self, fig3a_dip, default_jsa):
        amp = assemble_amplitude(enumerate_paths(fig3a_dip), default_jsa)
        baseline = 0.25
        assert amplitude_rate(amp) < 1e-6 * baseline

    def test_grid_mismatch_rejected(self, fig3a_dip, default_jsa):
        other = build_grid(fig3a_dip.spectral, n=128)
        with pytest.raises(ContractViolation):
            assemble_amplitude(enumerate_paths(fig3a_dip), default_jsa, grid=other)


class TestPathOverlap:
    def test_symmetric_pair_fully_overlaps(self, fig3a_dip, default_jsa):
        overlap = path_overlap(enumerate_paths(fig3a_dip), default_jsa)
        assert abs(overlap) == pytest.approx(1.0, abs=1e-9)

    def test_pump_clock_suppresses_overlap(self):
        config = preset("fig4c")
        overlap = path_overlap(enumerate_paths(config), gaussian_jsa(config.spectral))
        assert abs(overlap) < 0.02

    def test_identical_paths_overlap_exactly_one(self, default_jsa):
        path = PathAmplitude("rr", -0.2 + 0.0j, 0.0, 630.0, False)
        assert path_overlap([path, path], default_jsa) == complex(1.0)

    def test_zero_norm_path_rejected(self, default_jsa):
        good = PathAmplitude("rr", 0.5 + 0.0j, 0.0, 0.0, False)
        null = PathAmplitude("tt", 0.0 + 0.0j, 0.0, 0.0, True)
        with pytest.raises(ContractViolation):
            path_overlap([good, null], default_jsa)

    def test_needs_exactly_two_paths(self, default_jsa):
        path = PathAmplitude("rr", 0.5 + 0.0j, 0.0, 0.0, False)
        with pytest.raises(ContractViolation):
            path_overlap([path], default_jsa)
