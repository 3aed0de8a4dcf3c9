"""
Spectral time evolution.

Each block is diagonalized once; evolving to any time is then a phase
multiplication, so long time series accumulate no stepping error.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import ModelParams, OperatorMatrix, check_dense, hamiltonian_block, hamiltonian_full
from .errors import ContractError
from .fock import BlockKey, Layout, StateVector
from .linalg import tridiagonal_eigh
from .prepare import _l2_eigensystem, allowed_l


@dataclass(frozen=True, eq=False)
class EigenSystem:
    key: BlockKey | None
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def diagonalize_block(H: OperatorMatrix) -> EigenSystem:
    """Eigen-decompose a real symmetric tridiagonal block Hamiltonian."""
    dense = H.toarray()
    n = dense.shape[0]
    if dense.shape != (n, n) or H.source != H.target:
        raise ContractError("block Hamiltonian must be square on a single layout")
    if np.iscomplexobj(dense):
        if np.abs(dense.imag).max(initial=0) > 0:
            raise ContractError("block Hamiltonian must be real")
        dense = dense.real
    if n and np.abs(np.triu(dense, 2)).max(initial=0) + np.abs(np.tril(dense, -2)).max(initial=0) > 0:
        raise ContractError("block Hamiltonian must be tridiagonal")
    if not np.array_equal(np.diag(dense, 1), np.diag(dense, -1)):
        raise ContractError("block Hamiltonian must be symmetric")
    key = H.source.keys[0] if len(H.source.ms) == 1 else None
    label = f"block (N={key[0]}, m={key[1]})" if key else None
    w, v = tridiagonal_eigh(np.diag(dense), np.diag(dense, 1), label=label)
    w.setflags(write=False)
    v.setflags(write=False)
    return EigenSystem(key, w, v)


@lru_cache(maxsize=4096)
def block_eigensystem(params: ModelParams, key: BlockKey) -> EigenSystem:
    return diagonalize_block(hamiltonian_block(params, key))


@lru_cache(maxsize=8)
def full_eigensystem(params: ModelParams, N: int) -> EigenSystem:
    # magnetic terms break the block structure: dense Hermitian solve
    H = hamiltonian_full(params, N).toarray()
    w, v = np.linalg.eigh(H)
    w.setflags(write=False)
    v.setflags(write=False)
    return EigenSystem(None, w, v)


class Propagator:
    """Evolves one initial state to arbitrary times under ``params``.

    Expansion coefficients in the energy eigenbasis are computed once.
    """

    def __init__(self, state: StateVector, params: ModelParams):
        self.params = params
        self.unit = params.time_unit
        if params.has_magnetic:
            check_dense(Layout.full(state.N).dim)
            self.layout = Layout.full(state.N)
            system = full_eigensystem(params, state.N)
            psi = state.embed(self.layout).amplitudes
            self._parts = [(slice(0, self.layout.dim), system, system.eigenvectors.conj().T @ psi)]
        else:
            self.layout = state.layout
            self._parts = []
            for m in state.layout.ms:
                system = block_eigensystem(params, BlockKey(state.N, m))
                sl = state.layout.slice_of(m)
                self._parts.append((sl, system, system.eigenvectors.T @ state.amplitudes[sl]))

    def at(self, t: float) -> StateVector:
        out = np.empty(self.layout.dim, dtype=complex)
        for sl, system, coeffs in self._parts:
            phases = np.exp(-1j * system.eigenvalues * (t / self.unit))
            out[sl] = system.eigenvectors @ (phases * coeffs)
        return StateVector(self.layout, out)


def evolve(state: StateVector, params: ModelParams, t: float) -> StateVector:
    return Propagator(state, params).at(t)


def evolve_oracle_angular(state: StateVector, params: ModelParams, t: float) -> StateVector:
    """Evolution through the |l, m> basis with energies from the L^2 spectrum.

    Uses L^2 eigenvectors and the closed-form level energies only; shares no
    code with the Hamiltonian diagonalization path.
    """
    if state.N > 40:
        raise ContractError("the angular-basis oracle is limited to N <= 40")
    if params.has_magnetic:
        raise ContractError("the angular-basis oracle has no magnetic terms")
    N = state.N
    out = np.empty(state.layout.dim, dtype=complex)
    for m in state.layout.ms:
        _, vecs = _l2_eigensystem(N, m)
        energies = np.array([params.level(N, l) for l in allowed_l(N, m)])
        coeffs = vecs.T @ state.block(m)
        out[state.layout.slice_of(m)] = vecs @ (np.exp(-1j * energies * t / params.time_unit) * coeffs)
    return StateVector(state.layout, out)


@dataclass(frozen=True)
class TimeGrid:
    """``steps + 1`` equally spaced points from ``t_start`` to ``t_stop``."""

    t_start: float = 0.0
    t_stop: float = np.pi
    steps: int = 512

    def __post_init__(self):
        if not self.t_stop > self.t_start:
            raise ContractError("t_stop must exceed t_start")
        if self.steps < 1:
            raise ContractError("need at least one step")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_stop, self.steps + 1)


@dataclass
class TimeSeries:
    columns: list[str]
    data: np.ndarray
    flags: dict[str, np.ndarray] = field(default_factory=dict)

    def __getitem__(self, name) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        flag_names = list(self.flags)
        writer.writerow(self.columns + flag_names)
        for i, row in enumerate(self.data):
            cells = [format_float(x) for x in row]
            cells += ["true" if self.flags[f][i] else "false" for f in flag_names]
            writer.writerow(cells)
        return buf.getvalue()


def format_float(x: float) -> str:
    if np.isnan(x):
        return "nan"
    return "%.17g" % x


def time_series(state0, params, grid: TimeGrid, observers, settings=None, threads: int = 1) -> TimeSeries:
    """Tabulate observables along ``grid``.

    ``observers`` are column names from :data:`spinorsim.squeeze.OBSERVABLES`
    or ``(name, callable)`` pairs mapping a state to a float.
    """
    from . import squeeze

    settings = settings or squeeze.SqueezeSettings()
    plan = squeeze.ObservablePlan(observers, settings)  # validates before any work
    propagator = Propagator(state0, params)
    times = grid.points

    def row(t):
        return plan.evaluate(propagator.at(t), t)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, times))
    else:
        rows = [row(t) for t in times]
    data = np.array([r[0] for r in rows], dtype=float).reshape(len(times), -1)
    flags = {name: np.array([r[1][name] for r in rows]) for name in plan.flag_names}
    return TimeSeries(["t"] + plan.columns, np.column_stack([times, data]), flags)
