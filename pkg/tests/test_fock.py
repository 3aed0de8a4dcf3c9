from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinorsim.errors import EmptyBlockError
from spinorsim.fock import (
    BlockKey, Layout, ModeOccupation, StateVector, block_dim, charges, enumerate_block, enumerate_full,
)


def test_block_n2_m0_order():
    block = enumerate_block(2, 0)
    assert block.states == (ModeOccupation(1, 0, 1), ModeOccupation(0, 2, 0))
    assert block.index[ModeOccupation(0, 2, 0)] == 1


def test_block_odd():
    assert [s.n_zero for s in enumerate_block(5, 2).states] == [1, 3]


def test_empty_block_raises():
    with pytest.raises(EmptyBlockError):
        enumerate_block(3, 4)


def test_charges_single_atoms():
    assert charges(ModeOccupation(0, 1, 0)) == (Fraction(-2, 3), 0)
    assert charges(ModeOccupation(1, 0, 0)) == (Fraction(1, 3), Fraction(-1, 2))
    assert charges(ModeOccupation(0, 0, 1)) == (Fraction(1, 3), Fraction(1, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 50))
def test_dimensions_sum_to_full(N):
    assert sum(block_dim(N, m) for m in range(-N, N + 1)) == (N + 1) * (N + 2) // 2
    assert Layout.full(N).dim == (N + 1) * (N + 2) // 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 50).flatmap(lambda N: st.tuples(st.just(N), st.integers(-N, N))))
def test_locate_round_trip(Nm):
    N, m = Nm
    layout = Layout.block(N, m)
    occ = layout.occupations
    assert np.array_equal(layout.locate(occ), np.arange(layout.dim))
    assert np.all(occ.sum(axis=1) == N)
    assert np.all(occ[:, 2] - occ[:, 0] == m)
    assert np.all(np.diff(occ[:, 1]) == 2)


def test_locate_outside_layout():
    layout = Layout.block(4, 0)
    assert layout.locate(np.array([[0, 3, 1]]))[0] == -1


def test_full_layout_slices():
    layout = Layout.full(3)
    assert layout.keys[0] == BlockKey(3, -3)
    assert layout.slice_of(0) == slice(4, 6)
    assert len(enumerate_full(3)) == 7


def test_embed_and_overlap():
    v = StateVector(Layout.block(2, 0), np.array([0.6, 0.8j]))
    w = v.embed(Layout.full(2))
    assert w.norm() == pytest.approx(1.0)
    assert np.allclose(w.block(0), v.amplitudes)
    assert v.overlap(w) == pytest.approx(1.0)
