"""noisybus: noise-driven entanglement of two atoms through a dissipative bus.

A small toolkit for the open-system dynamics of two two-level atoms coupled
to a third, noise-driven mediator atom: Lindblad integration, Wootters
concurrence, short-time expansions and parameter sweeps.
"""

from .analysis import (
    ArgmaxResult,
    SeparabilityRow,
    SeriesTerm,
    SweepGrid,
    argmax_axis,
    evaluate_series,
    perturbative_series,
    shorttime_concurrence_cd,
    shorttime_separability_ab,
    sweep,
)
from .dynamics import IntegratorConfig, Trajectory, evolve, rhs, steady_state_longtime
from .entanglement import ConcurrenceResult, concurrence, concurrence_ab, spin_flip
from .errors import (
    ConfigError,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidNoise,
    InvalidState,
    NoisyBusError,
    NotHermitian,
    NotPositive,
    StateCorrupted,
    ZeroCoupling,
)
from .linalg import eig_hermitian, kron, partial_trace, sqrt_psd
from .model import (
    LindbladTerm,
    ModelSpec,
    NoiseModel,
    ReducedSpec,
    SqueezedWhite,
    White,
    apply_liouvillian,
    build_hamiltonian_full,
    build_hamiltonian_reduced,
    build_liouvillian_full,
    build_liouvillian_reduced,
    collective_jump_ops,
    collective_transform,
    embed_op,
    squeezing_bound,
    total_excitation,
)

__version__ = "0.1.0"

__all__ = [
    "ArgmaxResult", "ConcurrenceResult", "ConfigError", "DimensionMismatch",
    "IndexOutOfRange", "IntegratorConfig", "InvalidNoise", "InvalidState",
    "LindbladTerm", "ModelSpec", "NoiseModel", "NoisyBusError", "NotHermitian",
    "NotPositive", "ReducedSpec", "SeparabilityRow", "SeriesTerm", "SqueezedWhite",
    "StateCorrupted", "SweepGrid", "Trajectory", "White", "ZeroCoupling",
    "apply_liouvillian", "argmax_axis", "build_hamiltonian_full",
    "build_hamiltonian_reduced", "build_liouvillian_full",
    "build_liouvillian_reduced", "collective_jump_ops", "collective_transform",
    "concurrence", "concurrence_ab", "eig_hermitian", "embed_op",
    "evaluate_series", "evolve", "kron", "partial_trace", "perturbative_series",
    "rhs", "shorttime_concurrence_cd", "shorttime_separability_ab", "spin_flip",
    "sqrt_psd", "squeezing_bound", "steady_state_longtime", "sweep",
    "total_excitation",
]
