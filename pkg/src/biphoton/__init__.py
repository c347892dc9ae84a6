"""Two-photon interference simulator for a pulse-pumped type-II
downconversion polarization interferometer.

Coincidence rates are computed by summing the two-photon path amplitudes
over a joint-frequency grid; a closed-form Gaussian reference validates
the grid engine, and time-domain diagnostics expose when interference
survives without the photons ever overlapping on the beamsplitter.
"""

from .elements import (
    ElementChain,
    Polarization,
    Port,
    QuartzRod,
    RodAxis,
    analyzer_projection,
    hwp_action,
    pbs_action,
    quartz_group_delay,
    rod_delays,
)
from .errors import ConfigurationError, ContractViolation, UnsupportedModelError
from .oracle import OracleTerms, oracle_rate, oracle_terms, oracle_visibility
from .pathsum import (
    CoincidenceAmplitude,
    PairState,
    PathAmplitude,
    assemble_amplitude,
    enumerate_paths,
    path_overlap,
)
from .presets import (
    PRESET_NAMES,
    ExperimentConfig,
    GridSpec,
    SweepRow,
    SweepSpec,
    preset,
    pump_coherence_sweep,
    run_sweep,
)
from .scan import (
    ScanResult,
    TimeJointDensity,
    amplitude_rate,
    arrival_time_joint,
    coincidence_rate,
    refine_check,
    scan_delay,
    time_joint_density,
    visibility,
)
from .spectral import (
    FrequencyGrid,
    JointSpectralAmplitude,
    SpectralParams,
    auto_grid,
    build_grid,
    build_jsa,
    coherence_time_from_filter,
    gaussian_jsa,
    interference_width,
    jsa_swap_distance,
    l2_norm,
    normalize,
    sigma_from_coherence_time,
)

__version__ = "0.1.0"

__all__ = [
    "CoincidenceAmplitude",
    "ConfigurationError",
    "ContractViolation",
    "ElementChain",
    "ExperimentConfig",
    "FrequencyGrid",
    "GridSpec",
    "JointSpectralAmplitude",
    "OracleTerms",
    "PRESET_NAMES",
    "PairState",
    "PathAmplitude",
    "Polarization",
    "Port",
    "QuartzRod",
    "RodAxis",
    "ScanResult",
    "SpectralParams",
    "SweepRow",
    "SweepSpec",
    "TimeJointDensity",
    "UnsupportedModelError",
    "amplitude_rate",
    "analyzer_projection",
    "arrival_time_joint",
    "assemble_amplitude",
    "auto_grid",
    "build_grid",
    "build_jsa",
    "coherence_time_from_filter",
    "coincidence_rate",
    "enumerate_paths",
    "gaussian_jsa",
    "hwp_action",
    "interference_width",
    "jsa_swap_distance",
    "l2_norm",
    "normalize",
    "oracle_rate",
    "oracle_terms",
    "oracle_visibility",
    "path_overlap",
    "pbs_action",
    "preset",
    "pump_coherence_sweep",
    "quartz_group_delay",
    "refine_check",
    "rod_delays",
    "run_sweep",
    "scan_delay",
    "sigma_from_coherence_time",
    "time_joint_density",
    "visibility",
]
