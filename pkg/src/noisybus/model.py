"""Model construction: operators, Hamiltonians and Lindblad dissipators.

Three two-level atoms A, B, D interact through exchange couplings
g_AD, g_BD between each of A, B and the mediator D.  D is driven by a
broadband noise source of intensity n_T (optionally squeezed, with
correlation parameter M), while A and B decay spontaneously at rate gamma.

Dissipator convention used throughout the package: a jump operator L with
rate kappa contributes

    kappa * (L rho L+  -  1/2 {L+ L, rho})

so the excited-state population of a lone atom decays as exp(-gamma_D * t)
at n_T = 0, and the thermal pump rate from the ground state is
gamma_D * n_T.  Squeezing adds the anomalous pair

    gamma_D M (sigma- rho sigma- - 1/2 {sigma- sigma-, rho})  +  h.c.

which is completely positive exactly when |M| <= sqrt(n_T (n_T + 1)).

Site ordering is fixed: A, B, D for the full model and C, (E,) D for the
collective reduced models, with composite basis indices built by Kronecker
products in that order (ground = 0, excited = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidNoise,
    ZeroCoupling,
)
from .linalg import CPLX, id2, kron, kron_all, sigma_m, sigma_p, proj_e


def squeezing_bound(n_t: float) -> float:
    """Largest |M| compatible with complete positivity at intensity n_t."""
    return math.sqrt(n_t * (n_t + 1.0))


@dataclass(frozen=True)
class White:
    """Thermal white noise of intensity ``n_t`` (effective particle number)."""

    n_t: float

    def __post_init__(self):
        if self.n_t < 0:
            raise InvalidNoise(f"n_t must be nonnegative, got {self.n_t}")


@dataclass(frozen=True)
class SqueezedWhite:
    """Squeezed white noise: intensity ``n_t`` plus complex correlation ``m``."""

    n_t: float
    m: complex

    def __post_init__(self):
        if self.n_t < 0:
            raise InvalidNoise(f"n_t must be nonnegative, got {self.n_t}")
        bound = squeezing_bound(self.n_t)
        # allow the exact boundary despite floating-point rounding
        if abs(self.m) > bound * (1 + 1e-12) + 1e-15:
            raise InvalidNoise(
                f"|M| = {abs(self.m):.6g} exceeds sqrt(n_T(n_T+1)) = {bound:.6g}"
            )

    @classmethod
    def perfect(cls, n_t: float) -> "SqueezedWhite":
        """Maximally squeezed noise, M = sqrt(n_t (n_t + 1))."""
        return cls(n_t, squeezing_bound(n_t))


NoiseModel = Union[White, SqueezedWhite]


@dataclass(frozen=True)
class ModelSpec:
    """Physical parameters of the full three-atom model.

    Couplings and rates are in units of a reference frequency g0 (by
    convention g0 = g_AD); time is measured in 1/g0.  ``omega`` is the bare
    atomic frequency, stored for bookkeeping only: the dynamics is run in
    the rotating frame where the free precession has been removed.
    """

    g_ad: float = 1.0
    g_bd: float = 1.0
    gamma: float = 0.2
    gamma_d: float = 0.2
    noise: NoiseModel = field(default_factory=lambda: White(1.0))
    omega: float = 1.0

    def __post_init__(self):
        if self.gamma < 0 or self.gamma_d < 0:
            raise ValueError("decay rates must be nonnegative")

    @property
    def g(self) -> float:
        """Collective coupling sqrt(g_AD^2 + g_BD^2)."""
        return math.hypot(self.g_ad, self.g_bd)


@dataclass(frozen=True)
class ReducedSpec:
    """Collective-mode reduced model: one coupled mode C, spectator E, bus D."""

    g: float
    gamma: float
    gamma_d: float
    noise: NoiseModel


@dataclass(eq=False)
class LindbladTerm:
    """One dissipator term.

    Ordinary terms (``cross is None``) contribute
    ``rate * (jump rho jump+ - 1/2 {jump+ jump, rho})`` with ``rate >= 0``.

    Anomalous squeezing terms carry a second operator ``cross`` and a complex
    ``rate`` (amplitude gamma_D * M); such a term stands for
    ``rate * (jump rho cross - 1/2 {cross jump, rho})`` *plus its Hermitian
    conjugate*, which :func:`apply_liouvillian` adds automatically.
    """

    jump: np.ndarray
    rate: complex
    cross: Optional[np.ndarray] = None

    def __post_init__(self):
        self.jump = np.asarray(self.jump, dtype=CPLX)
        if self.cross is None:
            if self.rate.imag != 0 or self.rate.real < 0:
                raise ValueError(f"ordinary term needs a nonnegative rate, got {self.rate}")
            self.rate = float(self.rate.real)
            self._w = self.jump.conj().T @ self.jump
            self._jdag = self.jump.conj().T
        else:
            self.cross = np.asarray(self.cross, dtype=CPLX)
            if self.cross.shape != self.jump.shape:
                raise DimensionMismatch("jump and cross operators differ in shape")
            self.rate = complex(self.rate)
            self._w = self.cross @ self.jump
            self._jdag = None

    @property
    def dim(self) -> int:
        return self.jump.shape[0]


def embed_op(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Single-site operator extended to an ``n_sites`` register by identities."""
    if not 0 <= site < n_sites:
        raise IndexOutOfRange(f"site {site} outside register of {n_sites}")
    factors = [id2] * n_sites
    factors[site] = np.asarray(op, dtype=CPLX)
    return kron_all(*factors)


def total_excitation(n_sites: int) -> np.ndarray:
    """Total excitation-number operator, sum of |e><e| over all sites."""
    return sum(embed_op(proj_e, k, n_sites) for k in range(n_sites))


def build_hamiltonian_full(spec: ModelSpec) -> np.ndarray:
    """Rotating-frame exchange Hamiltonian of the A, B, D register (8x8).

    H = sum_{i=A,B} g_iD (sigma_D+ sigma_i- + h.c.); it conserves the total
    excitation number and annihilates both |ggg> and |eee>.
    """
    sm_a = embed_op(sigma_m, 0, 3)
    sm_b = embed_op(sigma_m, 1, 3)
    sp_d = embed_op(sigma_p, 2, 3)
    h = spec.g_ad * (sp_d @ sm_a) + spec.g_bd * (sp_d @ sm_b)
    return h + h.conj().T


def _thermal_terms(sm_op: np.ndarray, gamma_d: float, noise: NoiseModel) -> list:
    """Bus dissipators: thermal decay/pump plus anomalous squeezing pair."""
    sp_op = sm_op.conj().T
    terms = []
    if gamma_d * (noise.n_t + 1.0) > 0:
        terms.append(LindbladTerm(sm_op, gamma_d * (noise.n_t + 1.0)))
    if gamma_d * noise.n_t > 0:
        terms.append(LindbladTerm(sp_op, gamma_d * noise.n_t))
    if isinstance(noise, SqueezedWhite) and gamma_d * abs(noise.m) > 0:
        terms.append(LindbladTerm(sm_op, gamma_d * noise.m, cross=sm_op))
    return terms


def build_liouvillian_full(spec: ModelSpec) -> list:
    """Dissipator list for the three-atom model (zero-rate terms omitted)."""
    terms = _thermal_terms(embed_op(sigma_m, 2, 3), spec.gamma_d, spec.noise)
    for site in (0, 1):
        if spec.gamma > 0:
            terms.append(LindbladTerm(embed_op(sigma_m, site, 3), spec.gamma))
    return terms


def collective_transform(spec: ModelSpec):
    """Rotate atoms A, B into the collective modes C (coupled) and E (dark).

    sigma_C+ = (g_AD sigma_A+ + g_BD sigma_B+) / g,
    sigma_E+ = (g_BD sigma_A+ - g_AD sigma_B+) / g,  g = sqrt(g_AD^2+g_BD^2).

    Returns ``(reduced, u)`` where ``reduced`` is the collective-mode
    parameter set (coupling g, unchanged rates and noise) and ``u`` is the
    4x4 unitary taking A,B product-basis coordinates to C,E coordinates
    (|gg> and |ee> invariant, single-excitation doublet rotated).
    """
    g = spec.g
    if g == 0.0:
        raise ZeroCoupling("collective transform undefined for g_AD = g_BD = 0")
    a, b = spec.g_ad / g, spec.g_bd / g
    u = np.zeros((4, 4), dtype=CPLX)
    u[0, 0] = 1.0
    u[3, 3] = 1.0
    u[1, 1], u[1, 2] = -a, b   # <g_C e_E| row in the |ge>, |eg> basis
    u[2, 1], u[2, 2] = b, a    # <e_C g_E| row
    reduced = ReducedSpec(g=g, gamma=spec.gamma, gamma_d=spec.gamma_d, noise=spec.noise)
    return reduced, u


def collective_jump_ops(spec: ModelSpec):
    """Collective lowering operators (sigma_C-, sigma_E-) on the 4-dim A,B space."""
    g = spec.g
    if g == 0.0:
        raise ZeroCoupling("collective modes undefined for g_AD = g_BD = 0")
    sm_a = kron(sigma_m, id2)
    sm_b = kron(id2, sigma_m)
    s_c = (spec.g_ad * sm_a + spec.g_bd * sm_b) / g
    s_e = (spec.g_bd * sm_a - spec.g_ad * sm_b) / g
    return s_c, s_e


def build_hamiltonian_reduced(reduced: ReducedSpec, with_spectator: bool = False) -> np.ndarray:
    """Exchange Hamiltonian g (sigma_D+ sigma_C- + h.c.) of the reduced model.

    Site order is C, D (4x4) or C, E, D (8x8) when ``with_spectator`` is set;
    the spectator mode E never appears in the Hamiltonian.
    """
    n = 3 if with_spectator else 2
    sm_c = embed_op(sigma_m, 0, n)
    sp_d = embed_op(sigma_p, n - 1, n)
    h = reduced.g * (sp_d @ sm_c)
    return h + h.conj().T


def build_liouvillian_reduced(reduced: ReducedSpec, with_spectator: bool = False) -> list:
    """Dissipators of the reduced model: decay on C (and E), bus terms on D."""
    n = 3 if with_spectator else 2
    terms = _thermal_terms(embed_op(sigma_m, n - 1, n), reduced.gamma_d, reduced.noise)
    if reduced.gamma > 0:
        terms.append(LindbladTerm(embed_op(sigma_m, 0, n), reduced.gamma))
        if with_spectator:
            terms.append(LindbladTerm(embed_op(sigma_m, 1, n), reduced.gamma))
    return terms


def apply_liouvillian(terms: list, rho: np.ndarray) -> np.ndarray:
    """Action of the dissipator list on a density matrix.

    Traceless, and Hermitian for Hermitian input, for every valid term list.
    """
    rho = np.asarray(rho, dtype=CPLX)
    out = np.zeros_like(rho)
    for t in terms:
        if t.dim != rho.shape[0]:
            raise DimensionMismatch(
                f"term of dimension {t.dim} applied to state of shape {rho.shape}"
            )
        if t.cross is None:
            out += t.rate * (t.jump @ rho @ t._jdag - 0.5 * (t._w @ rho + rho @ t._w))
        else:
            x = t.rate * (t.jump @ rho @ t.cross - 0.5 * (t._w @ rho + rho @ t._w))
            out += x + x.conj().T
    return out
