import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinorsim.algebra import (
    ModelParams, OperatorKind as K, expectation, full_operator, hamiltonian_block, hamiltonian_full,
    moments, operator_matrix, verify_identities,
)
from spinorsim.errors import ContractError, ResourceError
from spinorsim.fock import BlockKey, Layout, ModeOccupation
from spinorsim.prepare import CoherentSpec, coherent_state, fock_state

R2 = math.sqrt(2)


def test_l2_block_n2():
    L2 = operator_matrix(K.L2, BlockKey(2, 0)).toarray()
    assert np.allclose(L2, [[2, 2 * R2], [2 * R2, 4]], atol=1e-14)


def test_ferromagnetic_block_n2():
    H = hamiltonian_block(ModelParams(), BlockKey(2, 0)).toarray()
    assert np.allclose(H, [[2, -2 * R2], [-2 * R2, 0]], atol=1e-14)
    assert np.allclose(np.linalg.eigvalsh(H), [-2, 4])


def test_displacements():
    assert K.T_plus.displacement == 2
    assert K.U_plus.displacement == -1
    assert K.V_plus.displacement == 1
    assert K.K_plus.displacement == 0
    assert K.L_plus.displacement == 1
    assert K.Tx.displacement is None


def test_mixed_tag_needs_full_basis():
    with pytest.raises(ContractError):
        operator_matrix(K.Tx, BlockKey(4, 0))
    assert full_operator(K.Tx, 4).shape == (15, 15)


def test_target_outside_range_is_empty():
    op = operator_matrix(K.T_plus, BlockKey(2, 1))
    assert op.shape == (0, 1)


def test_transverse_field_spectrum():
    H = hamiltonian_full(ModelParams(magnetic=(1.0, 0.0, 0.0)), 1).toarray()
    assert np.allclose(np.linalg.eigvalsh(H), [-1, 0, 1])


def test_linear_zeeman_diagonal():
    gamma = 0.7
    H = hamiltonian_full(ModelParams(lambda_a=0.0, magnetic=(0.0, 0.0, gamma)), 3).toarray()
    m = Layout.full(3).occupations @ np.array([-1, 0, 1])
    assert np.allclose(np.diag(H), -gamma * m / 2)
    assert np.allclose(H, np.diag(np.diag(H)))


def test_dense_cap(monkeypatch):
    monkeypatch.setenv("SPINORSIM_DENSE_CAP", "10")
    with pytest.raises(ResourceError):
        hamiltonian_full(ModelParams(magnetic=(1.0, 0.0, 0.0)), 4)


def test_hypercharge_of_polar_fock():
    assert expectation(fock_state(ModeOccupation(0, 100, 0)), K.Y) == pytest.approx(-200 / 3)


@pytest.mark.parametrize("P0", [0.0, 1 / 3, 0.8])
def test_coherent_tx(P0):
    state = coherent_state(CoherentSpec.from_p0_theta(40, P0, math.pi / 2))
    assert expectation(state, K.Tx).real == pytest.approx(40 * (1 - P0) / 2, abs=1e-10)


def test_fock_variances():
    state = fock_state(ModeOccupation(3, 4, 5))
    assert moments(state, K.T3).variance == pytest.approx(0, abs=1e-14)
    # var Tx = <T+T- + T-T+>/4 = [n+(n-+1) + n-(n++1)]/4
    assert moments(state, K.Tx).variance == pytest.approx((5 * 4 + 3 * 6) / 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12))
def test_u3_v3_identities(N):
    occ = Layout.full(N).occupations
    n_m, n_0, n_p = occ.T
    U3, V3, T3 = (full_operator(k, N).diagonal() for k in (K.U3, K.V3, K.T3))
    Y = full_operator(K.Y, N).diagonal()
    assert np.allclose(U3 + V3, 1.5 * Y)
    assert np.allclose(V3 - U3, T3)
    assert np.allclose(T3, (n_p - n_m) / 2)


def test_identity_report_n20():
    report = verify_identities(20)
    assert report.passed
    assert report.bch_matches == ["eta^2"]
    assert report.printed_singlet_deviation == pytest.approx(266.666666, rel=1e-5)


def test_identity_range():
    with pytest.raises(ContractError):
        verify_identities(0)


def test_spin_mixing_element():
    # <1,0,1| V+ U+ |0,2,0> = sqrt(2): a0 a0 gives sqrt(2), each creation gives 1
    K_plus = operator_matrix(K.K_plus, BlockKey(2, 0)).toarray()
    assert K_plus[0, 1] == pytest.approx(R2)
