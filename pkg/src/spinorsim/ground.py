"""
Ground-state structure of a block: exact ground states, the parameter-free
Gaussian hypercharge profile, the approximate tight-binding chain along the
hypercharge axis, and fragmentation of the one-particle density matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import ModelParams, OperatorKind, expectation
from .errors import ContractError
from .evolve import block_eigensystem
from .fock import BlockKey, Layout, StateVector
from .linalg import tridiagonal_eigh

FRAGMENT_FRACTION = 0.1
_MODES = ("minus", "zero", "plus")


def ground_state(N: int, m: int, params: ModelParams | None = None):
    """Lowest eigenpair ``(energy, state)`` of block ``(N, m)``."""
    params = params or ModelParams()
    system = block_eigensystem(params, BlockKey(N, m))
    return float(system.eigenvalues[0]), StateVector(Layout.block(N, m), system.eigenvectors[:, 0].astype(complex))


def hypercharge_center(N: int) -> float:
    return -N / 6 - 0.25


def gaussian_profile(N: int) -> np.ndarray:
    """Analytic ground-state amplitudes on the ``(N, 0)`` block, ascending n0.

    No fitted constants: the width and drift follow from the hypercharge
    center ``Y0 = -N/6 - 1/4`` alone.
    """
    if N < 4 or N % 2:
        raise ContractError(f"the Gaussian profile needs even N >= 4, got {N}")
    n_zero = np.arange(0, N + 1, 2)
    Y = N / 3 - n_zero
    Y0 = hypercharge_center(N)
    x = Y - Y0
    log_amp = -math.sqrt(2) * x**2 / (8 * abs(Y0)) + x / (4 * abs(Y0))
    amp = np.exp(log_amp - log_amp.max())
    return amp / np.linalg.norm(amp)


@dataclass(frozen=True)
class ChainSolution:
    n_zero: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray


def chain_solver(N: int, parity: str = "even") -> ChainSolution:
    """Eigenpairs of the approximate hypercharge chain (units of |lambda_a|).

    Diagonal ``2 (Y - Y0)^2``, hopping ``-2 t_Y`` between ``Y`` and ``Y + 2``
    with ``t_Y = (N/3 - Y)(N/3 + Y/2 + 1)``, on the n0 sublattice of the given
    parity. The odd sublattice is kept even when it is unphysical for m = 0.
    """
    if N < 4:
        raise ContractError(f"chain_solver needs N >= 4, got {N}")
    if parity not in ("even", "odd"):
        raise ContractError(f"parity must be 'even' or 'odd', got {parity!r}")
    start = 0 if parity == "even" else 1
    n_zero = np.arange(start, N + 1, 2)
    Y = N / 3 - n_zero
    Y0 = hypercharge_center(N)
    diag = 2 * (Y - Y0) ** 2
    # pair (n0, n0 + 2): the lower-Y site is n0 + 2
    lower = Y[1:]
    t = (N / 3 - lower) * (N / 3 + lower / 2 + 1)
    w, v = tridiagonal_eigh(diag, -2 * t, label=f"{parity} hypercharge chain (N={N})")
    return ChainSolution(n_zero, w, v)


@dataclass(frozen=True)
class DensityReport:
    matrix: np.ndarray  # rho_{mu nu} = <a_mu^dag a_nu>, order (-, 0, +)
    eigenvalues: np.ndarray
    fraction: float

    @property
    def fragmented(self) -> bool:
        N = np.real(np.trace(self.matrix))
        return int(np.sum(self.eigenvalues > self.fraction * N)) >= 2

    @property
    def verdict(self) -> str:
        return "fragmented" if self.fragmented else "single condensate"


def one_particle_density(state: StateVector, fraction: float = FRAGMENT_FRACTION) -> DensityReport:
    K = OperatorKind
    # <a_mu^dag a_nu> for mu != nu, keyed by (mu, nu) in (-, 0, +) order
    off = {(0, 1): K.U_plus, (2, 1): K.V_plus, (2, 0): K.T_plus}
    weights = np.abs(state.amplitudes) ** 2
    rho = np.zeros((3, 3), dtype=complex)
    rho[np.diag_indices(3)] = weights @ state.layout.occupations
    for (mu, nu), kind in off.items():
        value = expectation(state, kind)
        rho[mu, nu] = value
        rho[nu, mu] = np.conj(value)
    return DensityReport(rho, np.linalg.eigvalsh(rho), fraction)
