"""Closed-form reference for the coincidence rate of the Gaussian model.

Because the double-Gaussian joint amplitude is analytically integrable, the
full rate integral evaluates in closed form; the grid engine must agree
with it to better than one part in a thousand everywhere (that gate lives
in ``verify``). The derivation, with the intermediate Gaussian integrals,
is written out in docs/closed_form.md. All formulas here were fixed before
the engine was tuned and act as the regression ground truth; recomputing
the path coefficients and delays from the configuration keeps this module
an independent route to the same numbers.

With per-port delay differences D_a, D_b between the two paths, the
normalized cross integral is

    G = P * exp(-(D_a + D_b)^2 / (8 (2 tau_p^2 + s)))
          * exp(-(D_a - D_b)^2 / (8 s)),          s = 1/(4 s1^2) + 1/(4 s2^2)

where P <= 1 is the exchange overlap of the amplitude (1 iff symmetric).
The sum coordinate is suppressed by the pump envelope (the short pulse
timestamps the pair), the difference coordinate by the photons' own
spectra; which one carries the displacement depends on the rod geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .elements import QuartzRod, rod_delays
from .errors import ContractViolation, UnsupportedModelError
from .spectral import SpectralParams

if TYPE_CHECKING:
    from .presets import ExperimentConfig


@dataclass(frozen=True)
class OracleTerms:
    """The three contributions making up one closed-form rate."""

    rr_weight: float
    tt_weight: float
    cross: float
    overlap: float

    @property
    def rate(self) -> float:
        return self.rr_weight + self.tt_weight + self.cross

    @property
    def baseline(self) -> float:
        return self.rr_weight + self.tt_weight


def _require_gaussian(params: SpectralParams) -> None:
    if params.jsa_model != "gaussian":
        raise UnsupportedModelError(
            f"the closed form covers only the 'gaussian' model, got {params.jsa_model!r}"
        )


def _coefficients(config: "ExperimentConfig") -> tuple[complex, complex]:
    """Path coefficients evaluated analytically from the configuration.

    rr carries two reflection factors i and two analyzer sine projections,
    tt two cosine projections and the source term's relative phase.
    """
    theta_a = math.radians(config.analyzer_port_a)
    theta_b = math.radians(config.analyzer_port_b)
    w = 1.0 / math.sqrt(2.0)
    c_rr = complex(-w * math.sin(theta_a) * math.sin(theta_b))
    c_tt = (
        w
        * math.cos(theta_a)
        * math.cos(theta_b)
        * complex(math.cos(config.pair_phase), math.sin(config.pair_phase))
    )
    return c_rr, c_tt


def _delay_differences(config: "ExperimentConfig", d: float) -> tuple[float, float]:
    """Per-port delay differences (rr minus tt) at trombone delay d."""
    rod1_h, rod1_v = rod_delays(QuartzRod(config.qr1_axis, config.rod_length))
    rod2_h, rod2_v = rod_delays(QuartzRod(config.qr2_axis, config.rod_length))
    delta_a = (rod1_h + d) - rod2_h
    delta_b = rod2_v - (rod1_v + d)
    return delta_a, delta_b


def _exchange_overlap(params: SpectralParams) -> float:
    """P = |<f | f_swapped>| for the normalized Gaussian amplitude."""
    a1 = 1.0 / (2.0 * params.sigma1**2)
    a2 = 1.0 / (2.0 * params.sigma2**2)
    tau2 = params.pump_coherence_time**2
    total = a1 + a2
    numerator = tau2 * total + a1 * a2
    denominator = tau2 * total + (total * total) / 4.0
    return math.sqrt(numerator / denominator)


def _cross_factor(params: SpectralParams, delta_a: float, delta_b: float) -> float:
    """G of the module docstring, in [0, 1]."""
    s = 1.0 / (4.0 * params.sigma1**2) + 1.0 / (4.0 * params.sigma2**2)
    tau2 = params.pump_coherence_time**2
    sum_term = (delta_a + delta_b) ** 2 / (8.0 * (2.0 * tau2 + s))
    diff_term = (delta_a - delta_b) ** 2 / (8.0 * s)
    return _exchange_overlap(params) * math.exp(-sum_term) * math.exp(-diff_term)


def oracle_terms(config: "ExperimentConfig", d: float) -> OracleTerms:
    _require_gaussian(config.spectral)
    c_rr, c_tt = _coefficients(config)
    delta_a, delta_b = _delay_differences(config, d)
    overlap = _cross_factor(config.spectral, delta_a, delta_b)
    cross = 2.0 * (c_rr * c_tt.conjugate()).real * overlap
    return OracleTerms(
        rr_weight=abs(c_rr) ** 2,
        tt_weight=abs(c_tt) ** 2,
        cross=cross,
        overlap=overlap,
    )


def oracle_rate(config: "ExperimentConfig", d: float) -> float:
    """Closed-form coincidence rate at trombone delay d."""
    return oracle_terms(config, d).rate


def extremal_delay(config: "ExperimentConfig") -> float:
    """Trombone delay maximizing the cross factor; zero for equal rods."""
    rod1_h, rod1_v = rod_delays(QuartzRod(config.qr1_axis, config.rod_length))
    rod2_h, rod2_v = rod_delays(QuartzRod(config.qr2_axis, config.rod_length))
    return ((rod2_h + rod2_v) - (rod1_h + rod1_v)) / 2.0


def oracle_visibility(config: "ExperimentConfig") -> float:
    """Closed-form visibility of the delay scan.

    2 |c_rr c_tt| G(d*) / (|c_rr|^2 + |c_tt|^2) at the extremal delay d*;
    for balanced coefficients this is G(d*) itself.
    """
    _require_gaussian(config.spectral)
    c_rr, c_tt = _coefficients(config)
    baseline = abs(c_rr) ** 2 + abs(c_tt) ** 2
    if baseline == 0.0:
        raise ContractViolation("visibility undefined: both path coefficients vanish")
    d_star = extremal_delay(config)
    overlap = _cross_factor(config.spectral, *_delay_differences(config, d_star))
    return 2.0 * abs(c_rr) * abs(c_tt) * overlap / baseline
