"""
Three-mode Fock basis at fixed atom number.

Occupations are always written in the order ``(n_minus, n_zero, n_plus)``.
Within an ``(N, m)`` block, states are sorted by ascending ``n_zero``; the
spin-mixing term then connects only consecutive states, which keeps every
block Hamiltonian tridiagonal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import ContractError, EmptyBlockError


class ModeOccupation(NamedTuple):
    n_minus: int
    n_zero: int
    n_plus: int

    @property
    def total(self) -> int:
        return self.n_minus + self.n_zero + self.n_plus

    @property
    def magnetization(self) -> int:
        return self.n_plus - self.n_minus


class BlockKey(NamedTuple):
    total_n: int
    magnetization: int


def block_dim(N: int, m: int) -> int:
    """Number of states in block (N, m); zero when |m| > N."""
    if abs(m) > N:
        return 0
    return (N - abs(m)) // 2 + 1


def min_n_zero(N: int, m: int) -> int:
    return (N - abs(m)) % 2


@dataclass(frozen=True)
class FockBlock:
    key: BlockKey
    states: tuple[ModeOccupation, ...]
    index: dict = field(compare=False, repr=False)

    def __len__(self):
        return len(self.states)

    @property
    def dim(self) -> int:
        return len(self.states)


def enumerate_block(N: int, m: int) -> FockBlock:
    """All occupations with total ``N`` and ``n_plus - n_minus = m``."""
    if N < 0:
        raise ContractError(f"atom number must be non-negative, got {N}")
    if abs(m) > N:
        raise EmptyBlockError(f"block (N={N}, m={m}) is empty: |m| > N")
    states = []
    for n0 in range(min_n_zero(N, m), N - abs(m) + 1, 2):
        rest = N - n0
        states.append(ModeOccupation((rest - m) // 2, n0, (rest + m) // 2))
    states = tuple(states)
    return FockBlock(BlockKey(N, m), states, {s: i for i, s in enumerate(states)})


def enumerate_full(N: int) -> list[FockBlock]:
    if N < 0:
        raise ContractError(f"atom number must be non-negative, got {N}")
    return [enumerate_block(N, m) for m in range(-N, N + 1)]


def charges(occ: ModeOccupation) -> tuple[Fraction, Fraction]:
    """Hypercharge ``Y`` and isospin projection ``T3`` of an occupation."""
    n_minus, n_zero, n_plus = occ
    if min(occ) < 0:
        raise ContractError(f"negative occupation {tuple(occ)}")
    Y = Fraction(n_plus + n_minus - 2 * n_zero, 3)
    T3 = Fraction(n_plus - n_minus, 2)
    return Y, T3


@dataclass(frozen=True)
class Layout:
    """An ordered union of (N, m) blocks, ascending in m.

    This is the coordinate system for state vectors and realized operators.
    A single-block layout and the full fixed-N layout are the two common
    cases; any ascending subset is accepted.
    """

    N: int
    ms: tuple[int, ...]

    def __post_init__(self):
        if self.N < 0:
            raise ContractError(f"atom number must be non-negative, got {self.N}")
        if not self.ms:
            raise ContractError("layout needs at least one block")
        if list(self.ms) != sorted(set(self.ms)):
            raise ContractError(f"block list must be strictly ascending, got {self.ms}")
        for m in self.ms:
            if abs(m) > self.N:
                raise EmptyBlockError(f"block (N={self.N}, m={m}) is empty: |m| > N")

    @classmethod
    def block(cls, N: int, m: int) -> "Layout":
        return cls(N, (m,))

    @classmethod
    def full(cls, N: int) -> "Layout":
        return cls(N, tuple(range(-N, N + 1)))

    @property
    def is_full(self) -> bool:
        return len(self.ms) == 2 * self.N + 1

    @property
    def keys(self) -> list[BlockKey]:
        return [BlockKey(self.N, m) for m in self.ms]

    @cached_property
    def dims(self) -> np.ndarray:
        return np.array([block_dim(self.N, m) for m in self.ms], dtype=np.int64)

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.dims)])

    @property
    def dim(self) -> int:
        return int(self.offsets[-1])

    def slice_of(self, m: int) -> slice:
        i = self.ms.index(m)
        return slice(int(self.offsets[i]), int(self.offsets[i + 1]))

    @cached_property
    def occupations(self) -> np.ndarray:
        """``(dim, 3)`` integer array of ``(n_minus, n_zero, n_plus)``."""
        rows = []
        for m in self.ms:
            n0 = np.arange(min_n_zero(self.N, m), self.N - abs(m) + 1, 2)
            rest = self.N - n0
            rows.append(np.stack([(rest - m) // 2, n0, (rest + m) // 2], axis=1))
        return np.concatenate(rows).astype(np.int64)

    @cached_property
    def _block_position(self) -> np.ndarray:
        # map m + N -> position in self.ms, or -1
        pos = np.full(2 * self.N + 1, -1, dtype=np.int64)
        for i, m in enumerate(self.ms):
            pos[m + self.N] = i
        return pos

    def locate(self, occ: np.ndarray) -> np.ndarray:
        """Positions of occupation rows in this layout; -1 where absent."""
        occ = np.asarray(occ, dtype=np.int64).reshape(-1, 3)
        n_minus, n_zero, n_plus = occ.T
        valid = (occ >= 0).all(axis=1) & (occ.sum(axis=1) == self.N)
        m = n_plus - n_minus
        out = np.full(len(occ), -1, dtype=np.int64)
        if not valid.any():
            return out
        bpos = np.full(len(occ), -1, dtype=np.int64)
        bpos[valid] = self._block_position[m[valid] + self.N]
        ok = valid & (bpos >= 0)
        first = (self.N - np.abs(m[ok])) % 2
        out[ok] = self.offsets[bpos[ok]] + (n_zero[ok] - first) // 2
        return out

    def neighborhood(self, reach: int = 2) -> "Layout":
        """This layout grown by ``reach`` blocks on each side (clipped)."""
        ms = set()
        for m in self.ms:
            ms.update(range(max(-self.N, m - reach), min(self.N, m + reach) + 1))
        return Layout(self.N, tuple(sorted(ms)))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a :class:`Layout`."""

    layout: Layout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.layout.dim,):
            raise ContractError(
                f"expected {self.layout.dim} amplitudes, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def N(self) -> int:
        return self.layout.N

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.layout, self.amplitudes / self.norm())

    def block(self, m: int) -> np.ndarray:
        return self.amplitudes[self.layout.slice_of(m)]

    def embed(self, layout: Layout) -> "StateVector":
        """Re-express on a layout containing all of this state's blocks."""
        if layout.N != self.N:
            raise ContractError("cannot embed into a layout with a different N")
        if layout == self.layout:
            return self
        missing = set(self.layout.ms) - set(layout.ms)
        if missing:
            raise ContractError(f"target layout lacks blocks m={sorted(missing)}")
        out = np.zeros(layout.dim, dtype=complex)
        for m in self.layout.ms:
            out[layout.slice_of(m)] = self.block(m)
        return StateVector(layout, out)

    def overlap(self, other: "StateVector") -> complex:
        """``<self|other>``, embedding both into a common layout."""
        if self.N != other.N:
            raise ContractError("states have different atom numbers")
        common = Layout(self.N, tuple(sorted(set(self.layout.ms) | set(other.layout.ms))))
        a = self.embed(common).amplitudes
        b = other.embed(common).amplitudes
        return complex(np.vdot(a, b))
