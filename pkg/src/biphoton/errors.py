"""Exception types shared across the package.

Two failure families matter to callers (and map to CLI exit codes):
user-facing configuration problems and violated internal contracts.
"""


class ConfigurationError(ValueError):
    """Invalid user-supplied configuration: bad parameter values, unknown
    preset or sweep axis, undersized grids, malformed config files."""


class ContractViolation(RuntimeError):
    """An internal numerical contract was broken: mismatched grids,
    unnormalized amplitudes where normalization is required, zero-norm
    inputs to normalized quantities."""


class UnsupportedModelError(ContractViolation):
    """The closed-form reference only covers the double-Gaussian spectral
    model; any other model name refuses rather than approximates."""
