import numpy as np
import pytest

from spinorsim.algebra import ModelParams, OperatorKind as K, expectation
from spinorsim.errors import ContractError
from spinorsim.ground import chain_solver, gaussian_profile, ground_state, one_particle_density
from spinorsim.prepare import CoherentSpec, coherent_state


def test_ferromagnetic_energy():
    # ground level is l = N: -(N(N+1) - 2N)
    energy, _ = ground_state(40, 0)
    assert energy == pytest.approx(-40 * 39)


def test_polar_ground_is_singlet():
    _, state = ground_state(30, 0, ModelParams(lambda_a=1.0))
    assert abs(expectation(state, K.L2)) <= 1e-8


def test_even_odd_degeneracy_of_ground_energy():
    assert ground_state(20, 0)[0] == pytest.approx(ground_state(20, 1)[0])


def test_gaussian_profile_shape():
    g = gaussian_profile(200)
    assert np.linalg.norm(g) == pytest.approx(1)
    assert np.argmax(g) == 50  # n0 = 100
    with pytest.raises(ContractError):
        gaussian_profile(7)


def test_chain_matches_exact():
    _, state = ground_state(300, 0)
    chain = chain_solver(300, "even")
    assert np.dot(np.real(state.amplitudes), chain.vectors[:, 0]) ** 2 > 0.999
    with pytest.raises(ContractError):
        chain_solver(300, "both")


def test_density_of_coherent_state_is_pure():
    spec = CoherentSpec.from_p0_theta(20, 0.4, 0.6)
    rho = one_particle_density(coherent_state(spec))
    expected = 20 * np.outer(np.conj(spec.alphas), spec.alphas)
    assert np.allclose(rho.matrix, expected, atol=1e-10)
    assert not rho.fragmented


def test_ground_state_fragmented():
    _, state = ground_state(100, 0)
    rho = one_particle_density(state)
    assert rho.fragmented
    assert rho.verdict == "fragmented"
