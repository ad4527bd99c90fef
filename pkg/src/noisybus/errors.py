"""Exception types shared across the package."""


class NoisyBusError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(NoisyBusError, ValueError):
    """Operator or state dimensions are incompatible."""


class NotHermitian(NoisyBusError, ValueError):
    """Matrix fails the Hermiticity tolerance."""


class NotPositive(NoisyBusError, ValueError):
    """Matrix has an eigenvalue below the allowed negative tolerance."""


class IndexOutOfRange(NoisyBusError, IndexError):
    """Subsystem index outside the register."""


class InvalidNoise(NoisyBusError, ValueError):
    """Noise parameters violate their constraints (n_T < 0 or |M| too large)."""


class ZeroCoupling(NoisyBusError, ValueError):
    """Collective transformation requested with g_AD = g_BD = 0."""


class InvalidState(NoisyBusError, ValueError):
    """Density matrix violates trace or Hermiticity tolerances."""


class StateCorrupted(NoisyBusError, RuntimeError):
    """Integrator produced a state outside the physicality bounds."""


class ConfigError(NoisyBusError, ValueError):
    """Bad configuration file or command-line parameters."""
