import math

import numpy as np
import pytest

from spinorsim.algebra import ModelParams, OperatorKind as K, hamiltonian_block, hamiltonian_full
from spinorsim.errors import ContractError
from spinorsim.evolve import (
    Propagator, TimeGrid, block_eigensystem, diagonalize_block, evolve, evolve_oracle_angular, time_series,
)
from spinorsim.fock import BlockKey, Layout, ModeOccupation, StateVector
from spinorsim.prepare import CoherentSpec, coherent_state, fock_state
from scipy.linalg import expm


def test_block_spectrum_law():
    params = ModelParams(lambda_a=-1.0, lambda_s=0.3, mu=0.2)
    N, m = 9, 1
    system = block_eigensystem(params, BlockKey(N, m))
    expected = sorted(params.level(N, l) for l in (1, 3, 5, 7, 9))
    assert np.allclose(system.eigenvalues, expected, atol=1e-10)


def test_diagonalize_rejects_complex():
    H = hamiltonian_full(ModelParams(magnetic=(0.5, 0, 0)), 2)
    with pytest.raises(ContractError):
        diagonalize_block(H)


def test_against_matrix_exponential():
    params = ModelParams(lambda_a=-1.0)
    state = coherent_state(CoherentSpec.from_p0_theta(6, 0.3, 0.8))
    H = hamiltonian_full(params, 6).toarray()
    psi = state.embed(Layout.full(6)).amplitudes
    for t in (0.0, 0.37, 2.1):
        ref = expm(-1j * H * t) @ psi
        got = evolve(state, params, t).embed(Layout.full(6)).amplitudes
        assert np.allclose(got, ref, atol=1e-12)


def test_magnetic_evolution_against_expm():
    params = ModelParams(lambda_a=-1.0, magnetic=(0.3, 0.2, 0.1))
    state = fock_state(ModeOccupation(1, 2, 1))
    H = hamiltonian_full(params, 4).toarray()
    psi = state.embed(Layout.full(4)).amplitudes
    got = evolve(state, params, 0.9).embed(Layout.full(4)).amplitudes
    assert np.allclose(got, expm(-0.9j * H) @ psi, atol=1e-12)


def test_polar_coupling_time_unit():
    # with lambda_a = +2 the clock runs in units of 1/2
    state = coherent_state(CoherentSpec.from_p0_theta(5, 0.5, 0.3))
    fast = evolve(state, ModelParams(lambda_a=2.0), 0.4)
    ref = evolve_oracle_angular(state, ModelParams(lambda_a=2.0), 0.4)
    assert abs(fast.overlap(ref)) == pytest.approx(1, abs=1e-12)


def test_revival():
    state = coherent_state(CoherentSpec.from_p0_theta(17, 0.2, 1.3))
    assert abs(state.overlap(Propagator(state, ModelParams()).at(math.pi))) == pytest.approx(1, abs=1e-12)


def test_time_grid():
    assert len(TimeGrid(steps=4).points) == 5
    with pytest.raises(ContractError):
        TimeGrid(1.0, 0.5)


def test_time_series_threads_and_csv():
    state = fock_state(ModeOccupation(0, 10, 0))
    grid = TimeGrid(0, 0.3, 6)
    obs = ["n_zero", "xi_uv_min", ("norm", lambda s: s.norm())]
    one = time_series(state, ModelParams(), grid, obs)
    many = time_series(state, ModelParams(), grid, obs, threads=3)
    assert one.to_csv() == many.to_csv()
    assert np.allclose(one["norm"], 1)
    header = one.to_csv().splitlines()[0]
    assert header == "t,n_zero,xi_uv_min,norm,xi_phi_ok,xi_uv_ok,xi_pm_ok"


def test_time_series_rejects_unknown_column():
    with pytest.raises(ContractError):
        time_series(fock_state(ModeOccupation(0, 2, 0)), ModelParams(), TimeGrid(steps=2), ["nope"])
