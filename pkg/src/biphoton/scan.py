"""Coincidence rates, trombone-delay scans and time-domain diagnostics.

The rate is the uniform-weight grid sum R = sum |A(nu_a, nu_b)|^2 w^2 of
the assembled coincidence amplitude. Evaluating it point by point along a
delay scan through the expanded form

    R = sum_p |c_p|^2 T(p,p) + sum_{p<q} 2 Re[c_p conj(c_q) T(p,q)],
    T(p,q) = sum_ij f_p(i,j) conj(f_q(i,j)) e^{i nu_i D_a} e^{i nu_j D_b} w^2

turns each delay point into one matrix-vector product against kernels that
are fixed for the whole scan. Every term, including the d-independent
diagonal ones, goes through the same reduction routine so that identical
summands cancel exactly; an ideal dip bottoms out at a rate of exactly
zero rather than at rounding noise.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import ConfigurationError, ContractViolation
from .pathsum import CoincidenceAmplitude, PathAmplitude, assemble_amplitude, enumerate_paths
from .spectral import (
    JointSpectralAmplitude,
    _construct_grid,
    build_jsa,
    interference_width,
)

if TYPE_CHECKING:
    from .presets import ExperimentConfig

DEFAULT_FLAT_THRESHOLD = 0.02
DEFAULT_WING_FACTOR = 3.0
DEFAULT_SCAN_MIN = -1500.0
DEFAULT_SCAN_MAX = 1500.0
DEFAULT_SCAN_STEPS = 151


class RateKernel:
    """Per-scan cache of the quadratic forms behind the rate sum.

    Thread-safe once warmed: all cached arrays are read-only, so delay
    points may be evaluated concurrently.
    """

    def __init__(self, jsa: JointSpectralAmplitude):
        self.jsa = jsa
        self.grid = jsa.grid
        self._values = jsa.values
        self._values_t: np.ndarray | None = None
        self._pair_kernels: dict[tuple[bool, bool], tuple[np.ndarray, np.ndarray | None]] = {}

    def _base(self, swapped: bool) -> np.ndarray:
        if not swapped:
            return self._values
        if self._values_t is None:
            self._values_t = np.ascontiguousarray(self._values.T)
        return self._values_t

    def _kernel(self, swap_p: bool, swap_q: bool) -> tuple[np.ndarray, np.ndarray | None]:
        key = (swap_p, swap_q)
        cached = self._pair_kernels.get(key)
        if cached is None:
            m = self._base(swap_p) * np.conj(self._base(swap_q))
            m_imag = np.ascontiguousarray(m.imag) if np.any(m.imag) else None
            cached = (np.ascontiguousarray(m.real), m_imag)
            self._pair_kernels[key] = cached
        return cached

    def pair_sum(self, p: PathAmplitude, q: PathAmplitude) -> complex:
        """T(p, q) above; with p == q this is the path's squared norm."""
        m_real, m_imag = self._kernel(p.swapped, q.swapped)
        nu = self.grid.points
        pa = np.exp(1j * nu * (p.delay_a - q.delay_a))
        pb = np.exp(1j * nu * (p.delay_b - q.delay_b))
        yr = np.einsum("ij,j->i", m_real, pb.real)
        yi = np.einsum("ij,j->i", m_real, pb.imag)
        if m_imag is not None:
            yr = yr - np.einsum("ij,j->i", m_imag, pb.imag)
            yi = yi + np.einsum("ij,j->i", m_imag, pb.real)
        total = np.dot(pa, yr + 1j * yi)
        return complex(total) * self.grid.weight**2

    def rate(self, paths: Sequence[PathAmplitude]) -> float:
        total = 0.0
        for p in paths:
            total += abs(p.coefficient) ** 2 * self.pair_sum(p, p).real
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                cross = paths[i].coefficient * np.conj(paths[j].coefficient)
                total += 2.0 * (cross * self.pair_sum(paths[i], paths[j])).real
        return total


def _paths_at(config: "ExperimentConfig", d: float) -> tuple[PathAmplitude, ...]:
    return enumerate_paths(replace(config, trombone_delay=float(d)))


def _config_jsa(config: "ExperimentConfig") -> JointSpectralAmplitude:
    return build_jsa(config.spectral, config.frequency_grid())


def coincidence_rate(
    config: "ExperimentConfig", d: float, jsa: JointSpectralAmplitude | None = None
) -> float:
    """Coincidence rate at trombone delay d (arbitrary units, fixed
    normalization for a given spectral model).

    Passing a precomputed ``jsa`` (for this config's spectral parameters)
    skips rebuilding it; delays enter through phases only.
    """
    if jsa is None:
        jsa = _config_jsa(config)
    return RateKernel(jsa).rate(_paths_at(config, d))


def amplitude_rate(amp: CoincidenceAmplitude) -> float:
    """Direct grid sum of |A|^2 w^2 over an assembled amplitude."""
    v = amp.values
    return float((v.real**2 + v.imag**2).sum()) * amp.grid.weight**2


@dataclass(frozen=True)
class ScanResult:
    """Rates versus trombone delay plus the derived dip/peak summary."""

    delays: np.ndarray = field(repr=False)
    rates: np.ndarray = field(repr=False)
    baseline: float
    extremum: float
    visibility: float
    kind: str

    def __post_init__(self) -> None:
        self.delays.setflags(write=False)
        self.rates.setflags(write=False)


def _contrast(rates: np.ndarray, baseline: float, kind: str, estimator: str) -> float:
    rmin = float(rates.min())
    rmax = float(rates.max())
    if estimator == "michelson":
        if rmax + rmin == 0.0:
            raise ContractViolation("visibility undefined: max + min rate is zero")
        return (rmax - rmin) / (rmax + rmin)
    if estimator != "baseline":
        raise ConfigurationError(f"unknown visibility estimator {estimator!r}")
    if baseline == 0.0:
        raise ContractViolation("visibility undefined: baseline rate is zero")
    if kind == "dip":
        return (baseline - rmin) / baseline
    if kind == "peak":
        return (rmax - baseline) / baseline
    return max(rmax - baseline, baseline - rmin) / baseline


def visibility(scan: ScanResult, estimator: str = "baseline") -> float:
    """Normalized interference contrast of a scan.

    The default estimator references the non-interfering baseline so that
    an ideal dip and an ideal peak both read 1: dip (baseline - min) /
    baseline, peak (max - baseline) / baseline. ``estimator="michelson"``
    gives the alternative (max - min) / (max + min). Values land in [0, 1]
    by construction; nothing is clipped.
    """
    return _contrast(scan.rates, scan.baseline, scan.kind, estimator)


def scan_delay(
    config: "ExperimentConfig",
    d_min: float = DEFAULT_SCAN_MIN,
    d_max: float = DEFAULT_SCAN_MAX,
    steps: int = DEFAULT_SCAN_STEPS,
    *,
    jsa: JointSpectralAmplitude | None = None,
    workers: int | None = None,
    flat_threshold: float = DEFAULT_FLAT_THRESHOLD,
    wing_factor: float = DEFAULT_WING_FACTOR,
) -> ScanResult:
    """Scan the trombone delay and classify the resulting curve.

    The baseline is the mean rate in the wings, |d| > wing_factor times the
    interference width of the spectral model; the scan range must reach the
    wings. A curve whose largest relative deviation from the baseline stays
    below flat_threshold is classified flat, otherwise dip or peak by the
    dominant deviation. Delay points are independent; ``workers`` evaluates
    them concurrently with results ordered by index, without changing any
    value.
    """
    if not d_min < d_max:
        raise ConfigurationError(f"need d_min < d_max, got {d_min} >= {d_max}")
    if steps < 3:
        raise ConfigurationError(f"need at least 3 delay steps, got {steps}")
    if jsa is None:
        jsa = _config_jsa(config)
    kernel = RateKernel(jsa)
    delays = np.linspace(d_min, d_max, steps)
    path_sets = [_paths_at(config, d) for d in delays]
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rates = np.fromiter(pool.map(kernel.rate, path_sets), dtype=float, count=steps)
    else:
        rates = np.fromiter((kernel.rate(p) for p in path_sets), dtype=float, count=steps)

    wing = wing_factor * interference_width(config.spectral)
    wing_mask = np.abs(delays) > wing
    if not wing_mask.any():
        raise ConfigurationError(
            f"scan range [{d_min}, {d_max}] fs has no points beyond the baseline "
            f"wings at |d| > {wing:.4g} fs"
        )
    baseline = float(rates[wing_mask].mean())

    rmin = float(rates.min())
    rmax = float(rates.max())
    if baseline == 0.0:
        kind = "flat"
        extremum = rmax
        vis = 0.0
    else:
        deviation = max(rmax - baseline, baseline - rmin)
        if deviation / baseline < flat_threshold:
            kind = "flat"
            extremum = rmax if rmax - baseline >= baseline - rmin else rmin
        elif baseline - rmin >= rmax - baseline:
            kind = "dip"
            extremum = rmin
        else:
            kind = "peak"
            extremum = rmax
        vis = _contrast(rates, baseline, kind, "baseline")
    return ScanResult(
        delays=delays,
        rates=rates,
        baseline=baseline,
        extremum=extremum,
        visibility=vis,
        kind=kind,
    )


@dataclass(frozen=True)
class TimeJointDensity:
    """|amplitude|^2 in joint arrival-time coordinates (t_a, t_b), fs.

    Integrates (with the conjugate time step as weight) to the same total
    as the frequency-domain rate.
    """

    times: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    mean_a: float
    mean_b: float
    total: float

    def __post_init__(self) -> None:
        self.times.setflags(write=False)
        self.density.setflags(write=False)


def time_joint_density(amp: CoincidenceAmplitude) -> TimeJointDensity:
    """Transform an assembled amplitude to the joint arrival-time density."""
    grid = amp.grid
    n = grid.n
    h = grid.weight
    transformed = np.fft.fft2(amp.values)
    scale = (h * h / (2.0 * np.pi)) ** 2
    density = (transformed.real**2 + transformed.imag**2) * scale
    density = np.fft.fftshift(density)
    times = np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(n, d=h))
    dt = 2.0 * np.pi / (n * h)
    total = float(density.sum()) * dt * dt
    if total == 0.0:
        raise ContractViolation("time density is identically zero; no coincidence paths")
    marginal_a = density.sum(axis=1) * dt
    marginal_b = density.sum(axis=0) * dt
    mean_a = float((times * marginal_a).sum()) * dt / total
    mean_b = float((times * marginal_b).sum()) * dt / total
    return TimeJointDensity(times=times, density=density, mean_a=mean_a, mean_b=mean_b, total=total)


def arrival_time_joint(
    config: "ExperimentConfig", d: float, jsa: JointSpectralAmplitude | None = None
) -> TimeJointDensity:
    """Joint arrival-time density of the coincidence amplitude at delay d.

    The marginal means locate each detector's photon in time; their
    difference reveals which detector fires first, independently of whether
    the rate curve shows interference.
    """
    if jsa is None:
        jsa = _config_jsa(config)
    if jsa.grid.n < 128:
        raise ConfigurationError(
            f"arrival-time diagnostics need grid n >= 128, got {jsa.grid.n}"
        )
    amp = assemble_amplitude(_paths_at(config, d), jsa)
    return time_joint_density(amp)


def refine_check(config: "ExperimentConfig", d: float) -> float:
    """Relative rate change upon doubling the grid resolution.

    Smooth Gaussian integrands converge superalgebraically, so anything
    above ~1e-6 at the default resolution signals an undersampled grid.
    The denominator is floored at 1e-6 of the non-interfering level so
    that a perfectly cancelled dip point does not turn rounding noise
    into a spurious ratio.
    """
    grid = config.frequency_grid()
    fine = _construct_grid(config.spectral, 2 * grid.n, grid.span_sigma)
    coarse_rate = coincidence_rate(config, d, jsa=build_jsa(config.spectral, grid))
    fine_rate = coincidence_rate(config, d, jsa=build_jsa(config.spectral, fine))
    scale = sum(abs(p.coefficient) ** 2 for p in _paths_at(config, d))
    return abs(coarse_rate - fine_rate) / max(fine_rate, 1e-6 * scale, 1e-30)
