"""
Initial states: Fock states, Raman-prepared coherent states and the
collective angular-momentum basis |l, m>.

Angular-basis coefficients come in two independent flavours: the closed-form
alternating sum (evaluated in exact rational arithmetic) and eigenvectors of
the L^2 block. They are expected to agree up to sign.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .algebra import OperatorKind, realize
from .errors import ContractError, NumericalError
from .fock import Layout, ModeOccupation, StateVector, block_dim
from .linalg import tridiagonal_eigh

NORM_TOL = 1e-12


@dataclass(frozen=True)
class CoherentSpec:
    """Single-particle amplitudes ``(alpha_minus, alpha_zero, alpha_plus)``."""

    N: int
    alphas: tuple[complex, complex, complex]

    def __post_init__(self):
        alphas = tuple(complex(a) for a in self.alphas)
        if len(alphas) != 3:
            raise ContractError("need three amplitudes (alpha_minus, alpha_zero, alpha_plus)")
        object.__setattr__(self, "alphas", alphas)
        if self.N < 1:
            raise ContractError(f"coherent states need N >= 1, got {self.N}")
        total = sum(abs(a) ** 2 for a in alphas)
        if abs(total - 1) > NORM_TOL:
            raise ContractError(f"|alpha|^2 sums to {total!r}, not 1")

    @classmethod
    def from_populations(cls, N, populations, phases=(0.0, 0.0, 0.0)):
        """Build from populations ``P_j = |alpha_j|^2`` and phases ``delta_j``."""
        alphas = tuple(math.sqrt(P) * cmath.exp(1j * d) for P, d in zip(populations, phases))
        return cls(N, alphas)

    @classmethod
    def from_p0_theta(cls, N, P0, theta):
        """``alpha_0 = sqrt(P0) e^{i theta/2}``, ``alpha_pm = sqrt((1 - P0)/2)``."""
        side = math.sqrt((1 - P0) / 2)
        return cls(N, (side, math.sqrt(P0) * cmath.exp(0.5j * theta), side))

    @property
    def populations(self):
        return tuple(abs(a) ** 2 for a in self.alphas)


class AngularLabel(NamedTuple):
    N: int
    l: int
    m: int


def check_label(label: AngularLabel) -> AngularLabel:
    N, l, m = label
    if not (0 <= abs(m) <= l <= N) or (N - l) % 2:
        raise ContractError(f"invalid angular label (N={N}, l={l}, m={m})")
    return AngularLabel(N, l, m)


def allowed_l(N: int, m: int) -> list[int]:
    """Total spins present in block (N, m), ascending."""
    lo = abs(m) + ((N - abs(m)) % 2)
    return list(range(lo, N + 1, 2))


def fock_state(occ) -> StateVector:
    occ = ModeOccupation(*occ)
    if min(occ) < 0:
        raise ContractError(f"negative occupation {tuple(occ)}")
    layout = Layout.block(occ.total, occ.magnetization)
    amps = np.zeros(layout.dim, dtype=complex)
    amps[layout.locate(np.array([occ]))[0]] = 1.0
    return StateVector(layout, amps)


def coherent_state(spec: CoherentSpec) -> StateVector:
    """``(sum_j alpha_j a_j^dag)^N |vac> / sqrt(N!)`` on the full basis."""
    layout = Layout.full(spec.N)
    occ = layout.occupations
    log_multinomial = gammaln(spec.N + 1) - gammaln(occ + 1).sum(axis=1)
    amps = np.exp(0.5 * log_multinomial).astype(complex)
    for j, a in enumerate(spec.alphas):
        n = occ[:, j]
        if a == 0:
            amps = np.where(n == 0, amps, 0)
            continue
        amps = amps * np.exp(n * math.log(abs(a)) + 1j * n * cmath.phase(a))
    norm = np.linalg.norm(amps)
    if abs(norm - 1) > 1e-9:
        raise NumericalError(f"coherent expansion lost normalization ({norm!r})")
    return StateVector(layout, amps / norm)


# -- closed-form angular coefficients ------------------------------------


def _inv_norm_sq(N: int, l: int) -> Fraction:
    return sum(
        (Fraction(comb(2 * j, j) * comb((N + l) // 2 - j, l), 4**j) for j in range((N - l) // 2 + 1)),
        Fraction(0),
    )


def _exact_sqrt(q: Fraction) -> Fraction:
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a != q.numerator or b * b != q.denominator:
        raise NumericalError(f"expected a rational square, got {q}")
    return Fraction(a, b)


@lru_cache(maxsize=None)
def glmk_exact(N: int, l: int, m: int, n_zero: int) -> tuple[int, Fraction]:
    """Sign and exact square of the coefficient of Fock state with ``n_zero``.

    All radicands in the alternating sum differ by rational squares, so the
    sum is ``sqrt(q0) * (rational)``; nothing is rounded.
    """
    check_label(AngularLabel(N, l, m))
    if n_zero < 0 or n_zero > N - abs(m) or (n_zero - N - m) % 2:
        raise ContractError(f"n_zero={n_zero} is not in block (N={N}, m={m})")
    lo = max(0, -((l - abs(m) - n_zero) // 2))
    hi = min(n_zero // 2, (N - l) // 2)
    base = None
    total = Fraction(0)
    for r in range(lo, hi + 1):
        a = n_zero - 2 * r
        top = l - a
        if a > l or top < 0 or top > N - n_zero:
            continue
        sel2 = (l - m) - a
        sel = sel2 // 2
        if sel < 0 or sel > top:
            continue
        radicand = Fraction(
            comb(2 * r, r) * comb(n_zero, 2 * r) * comb(l, a) * comb(N - n_zero, top)
            * comb(N - l - 2 * r, (N - l) // 2 - r),
            comb(N - n_zero, (N - m - n_zero) // 2) * comb(2 * l, l - m),
        )
        coef = Fraction((-1) ** r * comb(top, sel), 4**r)
        if base is None:
            base = radicand
        total += coef * _exact_sqrt(radicand / base)
    if base is None or total == 0:
        return 0, Fraction(0)
    square = Fraction(2**n_zero) / _inv_norm_sq(N, l) * base * total * total
    return (1 if total > 0 else -1), square


def glmk(label: AngularLabel, k) -> float:
    """Coefficient of ``|n0 = 2k, n- = (N-m)/2 - k, n+ = (N+m)/2 - k>`` in ``|l m>``.

    ``k`` is a half-integer when ``N + m`` is odd.
    """
    N, l, m = check_label(label)
    n_zero = Fraction(k) * 2
    if n_zero.denominator != 1:
        raise ContractError(f"2k must be an integer, got k={k}")
    sign, square = glmk_exact(N, l, m, int(n_zero))
    return sign * math.sqrt(square)


def glmk_top(N: int, m: int, n_zero: int) -> float:
    """Closed form of the ``l = N`` coefficients (no alternating sum)."""
    k2 = n_zero
    return math.sqrt(2**k2 * comb(N, k2) * comb(N - k2, (N - m - k2) // 2) / comb(2 * N, N - m))


def glmk_top_asymptotic(N: int, n_zero: int) -> float:
    """Large-N form of the ``l = N, m = 0`` coefficients."""
    return math.exp(0.5 * (math.lgamma(N + 1) - math.lgamma(n_zero + 1) - math.lgamma(N - n_zero + 1) - (N - 1) * math.log(2)))


# -- angular states ---------------------------------------------------------


@lru_cache(maxsize=256)
def _l2_eigensystem(N: int, m: int):
    layout = Layout.block(N, m)
    L2 = realize(OperatorKind.L2, layout).toarray()
    w, v = tridiagonal_eigh(np.diag(L2), np.diag(L2, 1), label=f"L2 block (N={N}, m={m})")
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def angular_state(label: AngularLabel, method: str = "analytic") -> StateVector:
    N, l, m = check_label(label)
    layout = Layout.block(N, m)
    if method == "analytic":
        n0 = layout.occupations[:, 1]
        amps = np.array([glmk(label, Fraction(int(n), 2)) for n in n0], dtype=float)
        if amps[-1] < 0:
            amps = -amps
    elif method == "numeric":
        w, v = _l2_eigensystem(N, m)
        target = l * (l + 1)
        j = int(np.argmin(np.abs(w - target)))
        if abs(w[j] - target) > 1e-6 * max(1, target):
            raise NumericalError(f"no L2 eigenvalue near {target} in block (N={N}, m={m})")
        amps = v[:, j]
    else:
        raise ContractError(f"unknown method {method!r}")
    return StateVector(layout, amps.astype(complex))


class EtaResult(NamedTuple):
    eta: complex
    stationary: bool
    defined: bool


def eta(spec: CoherentSpec, tol: float = 1e-12) -> EtaResult:
    """``alpha_0^2 / (2 alpha_- alpha_+)``; the state is stationary iff it is 1."""
    a_minus, a_zero, a_plus = spec.alphas
    denom = 2 * a_minus * a_plus
    if denom == 0:
        return EtaResult(complex("nan"), False, False)
    value = a_zero * a_zero / denom
    return EtaResult(value, abs(value - 1) <= tol, True)


def angular_projection(state: StateVector) -> dict[tuple[int, int], complex]:
    """Amplitudes ``<l m|state>`` for every (l, m) in the state's blocks."""
    N = state.N
    out = {}
    for m in state.layout.ms:
        w, v = _l2_eigensystem(N, m)
        coeffs = v.T @ state.block(m)
        for l, c in zip(allowed_l(N, m), coeffs):
            out[(l, m)] = complex(c)
    return out
