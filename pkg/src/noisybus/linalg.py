"""Dense complex linear algebra for small multi-qubit problems (dim <= 16).

All operators and density matrices are plain ``numpy.ndarray`` of
``complex128``.  Basis convention for a single qubit: index 0 is the ground
state |g>, index 1 the excited state |e>.  Composite systems are ordered by
Kronecker factors left to right (first subsystem outermost).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPositive

# Tolerances: well above double-precision noise, well below physical scales.
TAU_HERM = 1e-9
TAU_EIG = 1e-10
TAU_PSD = 1e-8
TAU_TRACE = 1e-8

CPLX = np.complex128


def _const(rows) -> np.ndarray:
    m = np.array(rows, dtype=CPLX)
    m.setflags(write=False)
    return m


id2 = _const([[1, 0], [0, 1]])
sigma_x = _const([[0, 1], [1, 0]])
sigma_y = _const([[0, -1j], [1j, 0]])
sigma_z = _const([[-1, 0], [0, 1]])  # |e> is the upper level
sigma_p = _const([[0, 0], [1, 0]])   # |e><g|
sigma_m = _const([[0, 1], [0, 0]])   # |g><e|
proj_g = _const([[1, 0], [0, 0]])
proj_e = _const([[0, 0], [0, 1]])


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with a's indices outer, b's inner."""
    return np.kron(np.asarray(a, dtype=CPLX), np.asarray(b, dtype=CPLX))


def kron_all(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of several factors, left to right."""
    out = np.asarray(ops[0], dtype=CPLX)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def herm_defect(a: np.ndarray) -> float:
    """Largest entrywise deviation of a from its conjugate transpose."""
    return float(np.abs(a - a.conj().T).max())


def eig_hermitian(a: np.ndarray, tol: float = TAU_HERM):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and orthonormal
    eigenvector columns ``v``.  Raises :class:`NotHermitian` if the input
    deviates from Hermiticity by more than ``tol``.
    """
    a = np.asarray(a, dtype=CPLX)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    defect = herm_defect(a)
    if defect > tol:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return w, v


def sqrt_psd(a: np.ndarray, tol: float = TAU_PSD) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything below ``-tol``
    raises :class:`NotPositive`.
    """
    w, v = eig_hermitian(a)
    if w[0] < -tol:
        raise NotPositive(f"eigenvalue {w[0]:.3e} below -{tol:.1e}")
    w = np.where(w < 0.0, 0.0, w)
    s = (v * np.sqrt(w)) @ v.conj().T
    return (s + s.conj().T) / 2


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Reduced density matrix on the subsystems listed in ``keep``.

    ``dims`` gives the dimension of each subsystem in tensor order; ``keep``
    is a collection of subsystem indices to retain.  Subsystem order is
    preserved in the output regardless of the order of ``keep``.
    """
    rho = np.asarray(rho, dtype=CPLX)
    dims = list(int(d) for d in dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionMismatch(
            f"state of shape {rho.shape} does not match subsystem dims {dims}"
        )
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatch(f"keep={keep} is not a valid subset of 0..{len(dims)-1}")

    work = rho.reshape(dims + dims)
    cur = list(dims)
    for idx in sorted((i for i in range(len(dims)) if i not in keep), reverse=True):
        work = np.trace(work, axis1=idx, axis2=idx + len(cur))
        del cur[idx]
    d = int(np.prod(cur))
    return work.reshape(d, d)
