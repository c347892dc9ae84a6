"""Joint-frequency grids and the Gaussian model of the photon pair's spectrum.

Working units are nm for wavelengths, fs for times and rad/fs for angular
frequencies. A grid holds detunings nu = omega - omega0 around the
downconverted-photon center frequency, shared by both frequency axes.

Width conventions (fixed here because they are otherwise ambiguous):

* A filtered photon with coherence time ``t_c`` has the Gaussian amplitude
  spectrum exp(-nu^2 / (4 sigma^2)) with sigma = 1/t_c, so the magnitude of
  its field autocorrelation is exp(-tau^2 / (2 t_c^2)).
* The pump envelope enters the joint amplitude as
  exp(-(nu1 + nu2)^2 * tau_p^2 / 2) for pump coherence time ``tau_p``.

The joint spectral amplitude is the product of the pump envelope and one
filter Gaussian per photon; phase matching of the thin crystal is absorbed
into the filter widths, which are the narrower constraint. This model is
analytically integrable, which is what makes the closed-form reference in
``oracle`` possible (see docs/closed_form.md).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .constants import SPEED_OF_LIGHT_NM_PER_FS
from .errors import ConfigurationError, ContractViolation

GRID_ENV_VAR = "BIPHOTON_GRID_N"

_MIN_GRID_N = 64
_MAX_GRID_N = 8192
_MIN_SPAN_SIGMA = 4.0
# Grid spacing must stay below this multiple of the narrowest spectral
# feature for the quadrature to hold the 1e-3 closed-form gate.
_RIDGE_SAMPLING_FACTOR = 1.25


def coherence_time_from_filter(fwhm_nm: float, center_nm: float) -> float:
    """Coherence time (fs) of a photon behind a bandpass filter.

    Uses lambda^2 / (c * delta_lambda) with c in nm/fs; a 20 nm filter at
    780 nm gives roughly 101 fs.
    """
    if fwhm_nm <= 0 or center_nm <= 0:
        raise ConfigurationError(
            f"filter width and center must be positive, got fwhm={fwhm_nm}, center={center_nm}"
        )
    return center_nm**2 / (SPEED_OF_LIGHT_NM_PER_FS * fwhm_nm)


def sigma_from_coherence_time(t_c: float) -> float:
    """Amplitude-spectrum width sigma = 1/t_c (rad/fs) for a Gaussian line.

    Convention: amplitude spectrum exp(-nu^2/(4 sigma^2)), autocorrelation
    magnitude exp(-tau^2/(2 t_c^2)).
    """
    if t_c <= 0:
        raise ConfigurationError(f"coherence time must be positive, got {t_c}")
    return 1.0 / t_c


@dataclass(frozen=True)
class SpectralParams:
    """Spectral description of the pump, the pair and the detection filters.

    pump_center_wavelength / signal_center_wavelength are in nm,
    pump_coherence_time in fs, filter_fwhm / filter_center in nm.
    asymmetry_ratio scales the two photons' marginal widths as
    sigma1 = ratio * sigma_f and sigma2 = sigma_f / ratio, a one-parameter
    handle on the spectral distinction between the two rays; 1 means the
    pair is exchange symmetric.
    """

    pump_center_wavelength: float = 390.0
    signal_center_wavelength: float = 780.0
    pump_coherence_time: float = 120.0
    filter_fwhm: float = 20.0
    filter_center: float = 780.0
    asymmetry_ratio: float = 1.0
    jsa_model: str = "gaussian"

    def __post_init__(self) -> None:
        for name in (
            "pump_center_wavelength",
            "signal_center_wavelength",
            "pump_coherence_time",
            "filter_fwhm",
            "filter_center",
        ):
            value = getattr(self, name)
            if not (value > 0):
                raise ConfigurationError(f"{name} must be positive, got {value}")
        if not (self.asymmetry_ratio > 0):
            raise ConfigurationError(
                f"asymmetry_ratio must be positive, got {self.asymmetry_ratio}"
            )

    @property
    def filter_coherence_time(self) -> float:
        return coherence_time_from_filter(self.filter_fwhm, self.filter_center)

    @property
    def sigma_filter(self) -> float:
        return sigma_from_coherence_time(self.filter_coherence_time)

    @property
    def sigma1(self) -> float:
        return self.asymmetry_ratio * self.sigma_filter

    @property
    def sigma2(self) -> float:
        return self.sigma_filter / self.asymmetry_ratio

    @property
    def sigma_max(self) -> float:
        """Largest per-photon spectral sigma; the pump factor only narrows
        the support, so it does not enter the span requirement."""
        return max(self.sigma1, self.sigma2)

    @property
    def signal_center_frequency(self) -> float:
        return 2.0 * math.pi * SPEED_OF_LIGHT_NM_PER_FS / self.signal_center_wavelength


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform, symmetric detuning grid shared by both frequency axes.

    points are detunings in rad/fs, strictly increasing and symmetric about
    zero; weight is the uniform quadrature weight (the spacing).
    """

    center: float
    span_sigma: float
    n: int
    points: np.ndarray = field(repr=False)
    weight: float

    def __post_init__(self) -> None:
        self.points.setflags(write=False)

    @property
    def half_width(self) -> float:
        return float(self.points[-1])

    def matches(self, other: "FrequencyGrid") -> bool:
        return self.n == other.n and np.array_equal(self.points, other.points)


def _construct_grid(params: SpectralParams, n: int, span_sigma: float) -> FrequencyGrid:
    half = span_sigma * params.sigma_max
    points = np.linspace(-half, half, n)
    weight = 2.0 * half / (n - 1)
    return FrequencyGrid(
        center=params.signal_center_frequency,
        span_sigma=span_sigma,
        n=n,
        points=points,
        weight=weight,
    )


def build_grid(params: SpectralParams, n: int = 256, span_sigma: float = 6.0) -> FrequencyGrid:
    """Validating grid constructor: n a power of two >= 64, span >= 4 sigma."""
    if n < _MIN_GRID_N or (n & (n - 1)) != 0:
        raise ConfigurationError(f"grid n must be a power of two >= {_MIN_GRID_N}, got {n}")
    if span_sigma < _MIN_SPAN_SIGMA:
        raise ConfigurationError(
            f"grid span must cover at least +-{_MIN_SPAN_SIGMA} sigma, got {span_sigma}"
        )
    return _construct_grid(params, n, span_sigma)


def pump_ridge_sigma(params: SpectralParams) -> float:
    """Width (rad/fs) of the narrowest feature of |f|^2, which lies along
    the sum-frequency direction once the pump outlives the filters."""
    s = 1.0 / (4.0 * params.sigma1**2) + 1.0 / (4.0 * params.sigma2**2)
    return 1.0 / math.sqrt(2.0 * params.pump_coherence_time**2 + s)


def grid_override_n() -> int | None:
    """Grid size forced through the environment, for testing only.

    The override bypasses validation and automatic refinement so that
    deliberately broken resolutions can be exercised end to end.
    """
    raw = os.environ.get(GRID_ENV_VAR)
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"{GRID_ENV_VAR} must be an integer, got {raw!r}") from exc
    if n < 2:
        raise ConfigurationError(f"{GRID_ENV_VAR} must be >= 2, got {n}")
    return n


def auto_grid(params: SpectralParams, n: int = 256, span_sigma: float = 6.0) -> FrequencyGrid:
    """Grid used by the engine: the requested size, raised to the next power
    of two whenever the pump ridge would otherwise be undersampled.

    A long pump coherence time squeezes the joint amplitude onto a narrow
    anti-diagonal ridge; sampling it coarser than its width aliases the
    rates. The requested n acts as a floor, never a ceiling.
    """
    forced = grid_override_n()
    if forced is not None:
        return _construct_grid(params, forced, span_sigma)

    if n < _MIN_GRID_N or (n & (n - 1)) != 0:
        raise ConfigurationError(f"grid n must be a power of two >= {_MIN_GRID_N}, got {n}")
    if span_sigma < _MIN_SPAN_SIGMA:
        raise ConfigurationError(
            f"grid span must cover at least +-{_MIN_SPAN_SIGMA} sigma, got {span_sigma}"
        )

    max_spacing = _RIDGE_SAMPLING_FACTOR * pump_ridge_sigma(params)
    needed = int(math.ceil(2.0 * span_sigma * params.sigma_max / max_spacing)) + 1
    n_eff = n
    while n_eff < needed:
        n_eff *= 2
    if n_eff > _MAX_GRID_N:
        raise ConfigurationError(
            f"resolving the pump ridge needs n={n_eff} > {_MAX_GRID_N}; "
            "for very long pump coherence times use the closed-form reference instead"
        )
    return _construct_grid(params, n_eff, span_sigma)


@dataclass(frozen=True)
class JointSpectralAmplitude:
    """Complex pair amplitude f(nu1, nu2) on a shared grid.

    Axis 0 is the photon sent into arm 1, axis 1 the photon in arm 2.
    """

    grid: FrequencyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.values.setflags(write=False)


def l2_norm(jsa: JointSpectralAmplitude) -> float:
    """sqrt of sum |f|^2 w^2 with the grid's uniform quadrature weight."""
    v = jsa.values
    total = (v.real**2 + v.imag**2).sum()
    return float(np.sqrt(total)) * jsa.grid.weight


def normalize(jsa: JointSpectralAmplitude) -> JointSpectralAmplitude:
    norm = l2_norm(jsa)
    if norm == 0.0 or not np.isfinite(norm):
        raise ContractViolation("cannot normalize a zero or non-finite amplitude")
    return JointSpectralAmplitude(grid=jsa.grid, values=jsa.values / norm)


def gaussian_jsa(
    params: SpectralParams, grid: FrequencyGrid | None = None
) -> JointSpectralAmplitude:
    """Double-Gaussian joint spectral amplitude, normalized to unit L2 norm.

    f(nu1, nu2) = N * exp(-(nu1+nu2)^2 tau_p^2 / 2)
                    * exp(-nu1^2 / (4 sigma1^2)) * exp(-nu2^2 / (4 sigma2^2))

    With asymmetry_ratio = 1 the construction is exactly exchange symmetric,
    down to the floating-point representation.
    """
    if grid is None:
        grid = auto_grid(params)
    if grid.half_width < _MIN_SPAN_SIGMA * params.sigma_max:
        raise ConfigurationError(
            f"grid half-width {grid.half_width:.6g} rad/fs does not cover "
            f"+-{_MIN_SPAN_SIGMA} x sigma_max = {_MIN_SPAN_SIGMA * params.sigma_max:.6g}"
        )
    nu = grid.points
    g1 = np.exp(-(nu**2) / (4.0 * params.sigma1**2))
    g2 = np.exp(-(nu**2) / (4.0 * params.sigma2**2))
    pump = np.exp(-0.5 * (params.pump_coherence_time * (nu[:, None] + nu[None, :])) ** 2)
    values = (pump * np.outer(g1, g2)).astype(np.complex128)
    return normalize(JointSpectralAmplitude(grid=grid, values=values))


def build_jsa(params: SpectralParams, grid: FrequencyGrid | None = None) -> JointSpectralAmplitude:
    """Model dispatch; only the double-Gaussian model exists."""
    if params.jsa_model != "gaussian":
        raise ConfigurationError(f"unknown jsa_model {params.jsa_model!r}; supported: 'gaussian'")
    return gaussian_jsa(params, grid)


def jsa_swap_distance(jsa: JointSpectralAmplitude) -> float:
    """Exchange asymmetry 1 - |<f | f_swapped>|, in [0, 1].

    Zero iff the amplitude is exchange symmetric; this bounds the visibility
    any analyzer setting can reach. Requires a normalized input.
    """
    norm = l2_norm(jsa)
    if abs(norm - 1.0) > 1e-6:
        raise ContractViolation(f"jsa_swap_distance requires a normalized amplitude, norm={norm!r}")
    v = jsa.values
    if np.array_equal(v, v.T):
        # Identical arrays overlap perfectly by definition.
        return 0.0
    overlap = complex(np.vdot(v, np.ascontiguousarray(v.T))) * jsa.grid.weight**2
    return 1.0 - abs(overlap)


def interference_width(params: SpectralParams) -> float:
    """Delay scale (fs) of the interference structure, sqrt(2 s) with
    s = 1/(4 sigma1^2) + 1/(4 sigma2^2); equals the filter coherence time
    for a symmetric pair. Used to place baseline wings in scans."""
    s = 1.0 / (4.0 * params.sigma1**2) + 1.0 / (4.0 * params.sigma2**2)
    return math.sqrt(2.0 * s)
