"""Fixed-step integration of d(rho)/dt = -i[H, rho] + L(rho).

A classical fourth-order Runge-Kutta scheme with a fixed step keeps results
bit-reproducible across runs.  The right-hand side is applied directly to
the density matrix (no superoperator matrix is formed), and physicality of
the recorded states is monitored, never enforced: any recorded state outside
the trace / Hermiticity / positivity bounds aborts with StateCorrupted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import DimensionMismatch, InvalidState, StateCorrupted
from .linalg import CPLX, TAU_HERM, TAU_PSD, herm_defect, proj_e
from .model import LindbladTerm, SqueezedWhite, apply_liouvillian, embed_op

TRACE_BOUND = 1e-8
HERM_BOUND = 1e-9
PSD_FLOOR = 1e-7
# boundary squeezing sits on the edge of complete positivity; allow one
# extra decade of eigenvalue grazing there
PSD_FLOOR_SQUEEZED = 1e-6


@dataclass
class IntegratorConfig:
    """Fixed-step integrator settings (time in units of 1/g0)."""

    step: float = 1e-3
    t_end: float = 5.0
    method: str = "rk4_fixed"
    record_every: int = 10

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.method != "rk4_fixed":
            raise ValueError(f"unknown integration method {self.method!r}")
        if self.record_every < 1:
            raise ValueError("record_every must be a positive integer")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.step))


@dataclass
class Trajectory:
    """Recorded time grid, states and observables of one integration run."""

    times: np.ndarray
    states: List[np.ndarray]
    populations: np.ndarray          # excited-state probability per site
    trace_err: np.ndarray            # |tr(rho) - 1| per recorded state
    concurrence: Optional[np.ndarray] = None  # filled by the entanglement layer


def rhs(h: np.ndarray, terms: List[LindbladTerm], rho: np.ndarray) -> np.ndarray:
    """Generator action -i[H, rho] + L(rho)."""
    h = np.asarray(h, dtype=CPLX)
    rho = np.asarray(rho, dtype=CPLX)
    if h.shape != rho.shape:
        raise DimensionMismatch(f"H shape {h.shape} vs state shape {rho.shape}")
    return -1j * (h @ rho - rho @ h) + apply_liouvillian(terms, rho)


def _rk4_step(h, terms, rho, dt):
    k1 = rhs(h, terms, rho)
    k2 = rhs(h, terms, rho + (0.5 * dt) * k1)
    k3 = rhs(h, terms, rho + (0.5 * dt) * k2)
    k4 = rhs(h, terms, rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _psd_floor(terms) -> float:
    squeezed = any(t.cross is not None for t in terms)
    return PSD_FLOOR_SQUEEZED if squeezed else PSD_FLOOR


def _check_state(rho: np.ndarray, t: float, floor: float) -> float:
    tr_err = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
    if tr_err > TRACE_BOUND:
        raise StateCorrupted(f"trace error {tr_err:.3e} at t={t:.6g} (step too large?)")
    hd = herm_defect(rho)
    if hd > HERM_BOUND:
        raise StateCorrupted(f"Hermiticity defect {hd:.3e} at t={t:.6g}")
    w_min = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])
    if w_min < -floor:
        raise StateCorrupted(f"negative eigenvalue {w_min:.3e} at t={t:.6g}")
    return tr_err


def evolve(h: np.ndarray, terms: List[LindbladTerm], rho0: np.ndarray,
           cfg: IntegratorConfig) -> Trajectory:
    """Integrate the master equation, recording every ``record_every`` steps.

    The initial state must be Hermitian, unit trace and positive within the
    standard tolerances; every recorded state is checked against the
    physicality bounds and a violation raises :class:`StateCorrupted`.
    """
    rho = np.asarray(rho0, dtype=CPLX).copy()
    if herm_defect(rho) > TAU_HERM:
        raise InvalidState("initial state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise InvalidState("initial state does not have unit trace")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0] < -TAU_PSD:
        raise InvalidState("initial state is not positive semidefinite")

    dim = rho.shape[0]
    n_sites = int(round(math.log2(dim)))
    if 2 ** n_sites != dim:
        raise DimensionMismatch(f"state dimension {dim} is not a qubit register")
    number_ops = [embed_op(proj_e, k, n_sites) for k in range(n_sites)]
    floor = _psd_floor(terms)

    n = cfg.n_steps
    times, states, pops, tr_errs = [], [], [], []

    def record(i, r):
        t = i * cfg.step
        tr_errs.append(_check_state(r, t, floor))
        times.append(t)
        states.append(r.copy())
        pops.append([float(np.trace(nk @ r).real) for nk in number_ops])

    record(0, rho)
    for i in range(1, n + 1):
        rho = _rk4_step(h, terms, rho, cfg.step)
        if i % cfg.record_every == 0 or i == n:
            record(i, rho)

    return Trajectory(
        times=np.array(times),
        states=states,
        populations=np.array(pops),
        trace_err=np.array(tr_errs),
    )


def steady_state_longtime(h, terms, rho0, t_long: float,
                          cfg: Optional[IntegratorConfig] = None):
    """State after integrating to ``t_long``, with a convergence residual.

    Returns ``(rho, residual)`` where ``residual`` is the largest entry of
    the generator applied to the final state; a small residual indicates the
    trajectory has settled.
    """
    base = cfg or IntegratorConfig()
    run = IntegratorConfig(step=base.step, t_end=t_long,
                           record_every=max(1, int(round(t_long / base.step))))
    traj = evolve(h, terms, rho0, run)
    rho = traj.states[-1]
    residual = float(np.abs(rhs(h, terms, rho)).max())
    return rho, residual
