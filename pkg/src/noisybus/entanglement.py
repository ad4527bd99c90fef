"""Wootters concurrence of two-qubit density matrices.

The measure is c(rho) = max(0, l1 - l2 - l3 - l4) where the l_i are the
square roots of the eigenvalues of rho * rho_tilde in decreasing order and
rho_tilde = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y).  The l_i are
obtained from the Hermitian matrix sqrt(rho) rho_tilde sqrt(rho), which has
the same spectrum as rho * rho_tilde, avoiding a general complex eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DimensionMismatch, InvalidState
from .linalg import (
    CPLX,
    TAU_HERM,
    TAU_PSD,
    TAU_TRACE,
    herm_defect,
    kron,
    partial_trace,
    sigma_y,
    sqrt_psd,
)

_SIGMA_YY = kron(sigma_y, sigma_y)


@dataclass(frozen=True)
class ConcurrenceResult:
    """Concurrence value in [0, 1] plus the four lambdas, descending."""

    value: float
    lambdas: Tuple[float, float, float, float]


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """Spin-flipped state (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)."""
    rho = np.asarray(rho, dtype=CPLX)
    if rho.shape != (4, 4):
        raise DimensionMismatch(f"spin flip needs a 4x4 state, got {rho.shape}")
    return _SIGMA_YY @ rho.conj() @ _SIGMA_YY


def concurrence(rho: np.ndarray, clamp: float = TAU_PSD) -> ConcurrenceResult:
    """Wootters concurrence of a two-qubit density matrix.

    ``clamp`` bounds how negative an eigenvalue of ``rho`` may be before the
    state is rejected; small negatives (integrator noise, truncated series)
    are clamped to zero ahead of the matrix square root.
    """
    rho = np.asarray(rho, dtype=CPLX)
    if rho.shape != (4, 4):
        raise DimensionMismatch(f"concurrence needs a 4x4 state, got {rho.shape}")
    if herm_defect(rho) > TAU_HERM:
        raise InvalidState(f"state not Hermitian within {TAU_HERM:.1e}")
    if abs(np.trace(rho) - 1.0) > TAU_TRACE:
        raise InvalidState(f"state trace {np.trace(rho):.12g} is not 1")

    flipped = spin_flip(rho)
    root = sqrt_psd((rho + rho.conj().T) / 2, tol=clamp)
    m = root @ flipped @ root
    m = (m + m.conj().T) / 2
    mu = np.linalg.eigvalsh(m)
    lam = np.sqrt(np.where(mu < 0.0, 0.0, mu))[::-1]
    value = float(lam[0] - lam[1] - lam[2] - lam[3])
    value = min(1.0, max(0.0, value))
    return ConcurrenceResult(value=value, lambdas=tuple(float(x) for x in lam))


def concurrence_ab(rho_full: np.ndarray, clamp: float = TAU_PSD) -> ConcurrenceResult:
    """Concurrence of atoms A and B after tracing the bus out of a 3-qubit state."""
    rho_full = np.asarray(rho_full, dtype=CPLX)
    if rho_full.shape != (8, 8):
        raise DimensionMismatch(f"expected an 8x8 three-qubit state, got {rho_full.shape}")
    return concurrence(partial_trace(rho_full, (2, 2, 2), keep=(0, 1)), clamp=clamp)
