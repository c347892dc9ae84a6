"""Rates, delay scans, visibility and time-domain diagnostics."""

import math
from dataclasses import replace

import numpy as np
import pytest

from biphoton import (
    ConfigurationError,
    ContractViolation,
    GridSpec,
    ScanResult,
    SpectralParams,
    amplitude_rate,
    arrival_time_joint,
    assemble_amplitude,
    coincidence_rate,
    enumerate_paths,
    gaussian_jsa,
    preset,
    refine_check,
    scan_delay,
    time_joint_density,
    visibility,
)
from biphoton.scan import RateKernel, _paths_at


class TestCoincidenceRate:
    def test_ideal_dip_vanishes(self, fig3a_dip):
        assert coincidence_rate(fig3a_dip, 0.0) < 1e-6 * 0.25

    def test_wings_sit_on_the_baseline(self, fig3a_dip):
        left = coincidence_rate(fig3a_dip, -2000.0)
        right = coincidence_rate(fig3a_dip, 2000.0)
        assert abs(left - right) / right < 1e-6
        assert left == pytest.approx(0.25, rel=1e-6)

    def test_single_path_rate_is_flat(self, fig3a_dip):
        config = replace(fig3a_dip, analyzer1=0.0, analyzer2=0.0)
        jsa = gaussian_jsa(config.spectral)
        rates = [coincidence_rate(config, d, jsa=jsa) for d in (-800.0, 0.0, 350.0, 1200.0)]
        spread = (max(rates) - min(rates)) / max(rates)
        assert spread < 1e-9

    def test_matches_direct_amplitude_sum(self, fig3a_dip, default_jsa):
        d = 300.0
        expanded = coincidence_rate(fig3a_dip, d, jsa=default_jsa)
        assembled = amplitude_rate(
            assemble_amplitude(_paths_at(fig3a_dip, d), default_jsa)
        )
        assert expanded == pytest.approx(assembled, rel=1e-12)


class TestScanDelay:
    def test_dip_classification(self, fig3a_dip):
        result = scan_delay(fig3a_dip)
        assert result.kind == "dip"
        assert result.visibility >= 0.99
        assert result.extremum == result.rates.min()
        assert np.all(result.rates >= 0.0)

    def test_peak_classification(self):
        result = scan_delay(preset("fig3b_peak"))
        assert result.kind == "peak"
        assert result.visibility >= 0.99
        # A balanced constructive extremum doubles the baseline.
        assert result.rates.max() == pytest.approx(2.0 * result.baseline, rel=1e-5)

    def test_flat_classification(self):
        result = scan_delay(preset("fig4c"))
        assert result.kind == "flat"
        assert result.visibility <= 0.02

    def test_parallel_evaluation_is_bitwise_identical(self, fig3a_dip):
        serial = scan_delay(fig3a_dip, -600.0, 600.0, 41)
        threaded = scan_delay(fig3a_dip, -600.0, 600.0, 41, workers=4)
        assert np.array_equal(serial.rates, threaded.rates)

    def test_rejects_bad_window(self, fig3a_dip):
        with pytest.raises(ConfigurationError):
            scan_delay(fig3a_dip, 100.0, -100.0)
        with pytest.raises(ConfigurationError):
            scan_delay(fig3a_dip, -100.0, 100.0, steps=2)

    def test_rejects_range_without_wings(self, fig3a_dip):
        with pytest.raises(ConfigurationError):
            scan_delay(fig3a_dip, -100.0, 100.0, steps=11)


class TestVisibility:
    def test_ideal_dip_reads_one(self, fig3a_dip):
        result = scan_delay(fig3a_dip)
        assert visibility(result) == pytest.approx(1.0, abs=1e-6)
        assert 0.0 <= visibility(result) <= 1.0

    def test_michelson_estimator(self, fig3a_dip):
        result = scan_delay(fig3a_dip)
        expected = (result.rates.max() - result.rates.min()) / (
            result.rates.max() + result.rates.min()
        )
        assert visibility(result, estimator="michelson") == pytest.approx(expected, rel=1e-12)

    def test_flat_scan_reads_near_zero(self):
        assert visibility(scan_delay(preset("fig4c"))) < 0.02

    def test_zero_baseline_is_undefined(self):
        degenerate = ScanResult(
            delays=np.array([-1.0, 0.0, 1.0]),
            rates=np.array([0.0, 0.0, 0.0]),
            baseline=0.0,
            extremum=0.0,
            visibility=0.0,
            kind="flat",
        )
        with pytest.raises(ContractViolation):
            visibility(degenerate)

    def test_unknown_estimator_rejected(self, fig3a_dip):
        result = scan_delay(fig3a_dip, -600.0, 600.0, 31)
        with pytest.raises(ConfigurationError):
            visibility(result, estimator="parabola")


class TestArrivalTimes:
    def test_fig3a_port_a_photon_arrives_first(self):
        density = arrival_time_joint(preset("fig3a_peak"), 0.0)
        assert density.mean_b - density.mean_a == pytest.approx(630.0, abs=5.0)
        assert np.all(density.density >= 0.0)

    def test_fig3b_reverses_the_order(self):
        density = arrival_time_joint(preset("fig3b_peak"), 0.0)
        assert density.mean_a - density.mean_b == pytest.approx(630.0, abs=5.0)

    def test_parseval(self):
        config = preset("fig3a_peak")
        jsa = gaussian_jsa(config.spectral)
        amp = assemble_amplitude(_paths_at(config, 140.0), jsa)
        density = time_joint_density(amp)
        assert density.total == pytest.approx(amplitude_rate(amp), rel=1e-6)

    def test_fig4c_paths_overlap_in_difference_but_not_pair_time(self):
        config = preset("fig4c")
        jsa = gaussian_jsa(config.spectral)
        centers = {}
        for path in enumerate_paths(config):
            density = time_joint_density(assemble_amplitude([path], jsa))
            centers[path.label] = (
                density.mean_a - density.mean_b,
                0.5 * (density.mean_a + density.mean_b),
            )
        diff_rr, pair_rr = centers["rr"]
        diff_tt, pair_tt = centers["tt"]
        assert diff_rr == pytest.approx(diff_tt, abs=5.0)
        assert abs(pair_tt - pair_rr) == pytest.approx(630.0, abs=5.0)

    def test_requires_fine_enough_grid(self, fig3a_dip):
        coarse = replace(fig3a_dip, grid=GridSpec(n=64))
        with pytest.raises(ConfigurationError):
            arrival_time_joint(coarse, 0.0)


class TestRefinement:
    @pytest.mark.parametrize("d", [0.0, 300.0])
    def test_default_grid_is_converged(self, fig3a_dip, d):
        assert refine_check(fig3a_dip, d) < 1e-6

    def test_coarse_grid_still_reasonable(self, fig3a_dip):
        coarse = replace(fig3a_dip, grid=GridSpec(n=64))
        assert refine_check(coarse, 300.0) < 1e-3

    def test_flat_configuration_converged(self):
        assert refine_check(preset("fig4c"), 0.0) < 1e-6


class TestRateInvariants:
    def test_outcome_completeness(self, fig3a_dip, default_jsa):
        kernel = RateKernel(default_jsa)
        delays = (-900.0, -250.0, 0.0, 250.0, 900.0)
        totals = []
        for d in delays:
            total = 0.0
            for off1 in (0.0, 90.0):
                for off2 in (0.0, 90.0):
                    config = replace(fig3a_dip, analyzer1=30.0 + off1, analyzer2=75.0 + off2)
                    total += kernel.rate(_paths_at(config, d))
            totals.append(total)
        mean = sum(totals) / len(totals)
        assert max(abs(t - mean) for t in totals) / mean < 1e-6

    def test_dip_peak_complementarity(self, default_jsa):
        dip = preset("fig3a_dip")
        peak = preset("fig3a_peak")
        kernel = RateKernel(default_jsa)
        sums = [
            kernel.rate(_paths_at(dip, d)) + kernel.rate(_paths_at(peak, d))
            for d in (-700.0, -90.0, 0.0, 90.0, 700.0)
        ]
        mean = sum(sums) / len(sums)
        assert max(abs(s - mean) for s in sums) / mean < 1e-6

    def test_normalization_invariance(self, fig3a_dip, default_jsa):
        from biphoton import JointSpectralAmplitude, normalize

        rescaled = normalize(
            JointSpectralAmplitude(default_jsa.grid, default_jsa.values * 3.7)
        )
        for d in (0.0, 150.0, 600.0):
            reference = coincidence_rate(fig3a_dip, d, jsa=default_jsa)
            other = coincidence_rate(fig3a_dip, d, jsa=rescaled)
            assert abs(other - reference) / max(reference, 1e-12) < 1e-12
