"""Two-photon path enumeration and the coincidence amplitude on the grid.

A coincidence needs one photon at each beamsplitter output. With the
half-wave plate flipping every photon in arm 1, each source term routes to
exactly one coincidence path: either both photons reflect (label ``rr``) or
both transmit (``tt``). The coincidence amplitude is indexed by output port,

    A(nu_a, nu_b) = sum_paths c_p * f_p(nu_a, nu_b)
                    * exp(i [nu_a * delay_a + nu_b * delay_b]),

where f_p is the joint spectral amplitude, transposed when the source
photon of arm 1 exits port B (``swapped``), and the delays are linear
phase coefficients on the detunings. Whether the two paths interfere is
entirely a question of how well their summands overlap on the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .elements import Polarization, Port, analyzer_projection, hwp_action, pbs_action, rod_delays
from .errors import ConfigurationError, ContractViolation
from .spectral import FrequencyGrid, JointSpectralAmplitude

if TYPE_CHECKING:
    from .presets import ExperimentConfig


@dataclass(frozen=True)
class PairTerm:
    """One term of the source superposition: per-photon polarization and
    the crystal ray (ordinary 'o' or extraordinary 'e') it came from."""

    pol1: Polarization
    ray1: str
    pol2: Polarization
    ray2: str
    amplitude: complex


@dataclass(frozen=True)
class PairState:
    """Polarization-entangled source state with a relative phase.

    The two equally weighted terms are |H_o>|V_e> and |V_e>|H_o>; the
    crystal orientation forbids a horizontally polarized extraordinary
    photon, so no term may carry (H, e).
    """

    relative_phase: float = 0.0

    @property
    def terms(self) -> tuple[PairTerm, PairTerm]:
        w = 1.0 / math.sqrt(2.0)
        return (
            PairTerm(Polarization.H, "o", Polarization.V, "e", complex(w)),
            PairTerm(
                Polarization.V, "e", Polarization.H, "o",
                w * complex(np.exp(1j * self.relative_phase)),
            ),
        )


@dataclass(frozen=True)
class PathAmplitude:
    """One coincidence path: complex coefficient plus per-port delays (fs).

    ``swapped`` records that the photon from arm 1 exits port B, so the
    joint amplitude must be evaluated with transposed arguments.
    """

    label: str
    coefficient: complex
    delay_a: float
    delay_b: float
    swapped: bool


@dataclass(frozen=True)
class CoincidenceAmplitude:
    grid: FrequencyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.values.setflags(write=False)


def enumerate_paths(config: "ExperimentConfig") -> tuple[PathAmplitude, ...]:
    """The coincidence paths of a configuration, in fixed source-term order.

    Terms whose photons leave through the same port produce no coincidence
    and are skipped; so are paths whose analyzer projections kill the
    coefficient outright. An empty result is a valid outcome, not an error.
    """
    chain = config.element_chain()
    if chain.hwp_angle != 45.0:
        raise ConfigurationError(
            f"path enumeration requires the half-wave plate at 45 deg, got {chain.hwp_angle}"
        )
    rod1_h, rod1_v = rod_delays(chain.arm1_rod)
    rod2_h, rod2_v = rod_delays(chain.arm2_rod)

    paths = []
    for term in PairState(config.pair_phase).terms:
        # Arm 1: rod delay by the source polarization, trombone, then HWP.
        delay1 = (rod1_h if term.pol1 is Polarization.H else rod1_v) + chain.trombone_delay
        flipped = hwp_action(term.pol1, chain.hwp_angle)
        (pol1_out, hwp_coeff), = flipped
        port1, pbs1 = pbs_action(1, pol1_out)

        # Arm 2: rod only.
        delay2 = rod2_h if term.pol2 is Polarization.H else rod2_v
        port2, pbs2 = pbs_action(2, term.pol2)

        if port1 == port2:
            continue

        reflections = (pol1_out is Polarization.V) + (term.pol2 is Polarization.V)
        label = {2: "rr", 0: "tt"}.get(reflections, "rt")

        if port1 is Port.A:
            pol_a, pol_b = pol1_out, term.pol2
            delay_a, delay_b = delay1, delay2
            swapped = False
        else:
            pol_a, pol_b = term.pol2, pol1_out
            delay_a, delay_b = delay2, delay1
            swapped = True

        coefficient = (
            term.amplitude
            * hwp_coeff
            * pbs1
            * pbs2
            * analyzer_projection(pol_a, chain.analyzer_port_a)
            * analyzer_projection(pol_b, chain.analyzer_port_b)
        )
        if coefficient == 0:
            continue
        paths.append(
            PathAmplitude(
                label=label,
                coefficient=coefficient,
                delay_a=delay_a,
                delay_b=delay_b,
                swapped=swapped,
            )
        )
    return tuple(paths)


def _check_grid(jsa: JointSpectralAmplitude, grid: FrequencyGrid | None) -> FrequencyGrid:
    if grid is None:
        return jsa.grid
    if not grid.matches(jsa.grid):
        raise ContractViolation("grid does not match the joint spectral amplitude's grid")
    return grid


def _path_matrix(path: PathAmplitude, jsa: JointSpectralAmplitude) -> np.ndarray:
    nu = jsa.grid.points
    base = jsa.values.T if path.swapped else jsa.values
    phase_a = np.exp(1j * nu * path.delay_a)
    phase_b = np.exp(1j * nu * path.delay_b)
    out = base * phase_a[:, None]
    out *= phase_b[None, :]
    out *= path.coefficient
    return out


def assemble_amplitude(
    paths: tuple[PathAmplitude, ...] | list[PathAmplitude],
    jsa: JointSpectralAmplitude,
    grid: FrequencyGrid | None = None,
) -> CoincidenceAmplitude:
    """Pointwise sum of the path amplitudes, in the order given."""
    grid = _check_grid(jsa, grid)
    total = np.zeros((grid.n, grid.n), dtype=np.complex128)
    for path in paths:
        total += _path_matrix(path, jsa)
    return CoincidenceAmplitude(grid=grid, values=total)


def path_overlap(
    paths: tuple[PathAmplitude, ...] | list[PathAmplitude],
    jsa: JointSpectralAmplitude,
    grid: FrequencyGrid | None = None,
) -> complex:
    """Normalized overlap <A_1 | A_2> / (||A_1|| ||A_2||) of the two paths.

    Its magnitude is the degree of indistinguishability of the paths and
    bounds the achievable interference visibility.
    """
    if len(paths) != 2:
        raise ContractViolation(f"path_overlap needs exactly two paths, got {len(paths)}")
    grid = _check_grid(jsa, grid)
    if paths[0] == paths[1]:
        # A path overlaps itself perfectly by definition.
        return complex(1.0)
    a = _path_matrix(paths[0], jsa)
    b = _path_matrix(paths[1], jsa)
    w2 = grid.weight**2
    norm_a = math.sqrt(float((a.real**2 + a.imag**2).sum()) * w2)
    norm_b = math.sqrt(float((b.real**2 + b.imag**2).sum()) * w2)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ContractViolation("path overlap is undefined for a zero-norm path")
    return complex(np.vdot(a, b)) * w2 / (norm_a * norm_b)
