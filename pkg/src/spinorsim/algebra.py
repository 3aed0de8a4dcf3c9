"""
SU(3) generators, angular momentum and Hamiltonians as Fock-space matrices.

Every operator is a short polynomial in the mode ladder operators, realized
exactly from ``a^dag|n> = sqrt(n+1)|n+1>`` and ``a|n> = sqrt(n)|n-1>``.
Closed-form SU(3) matrix-element formulas are only used as cross-checks.
"""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .errors import ContractError, ResourceError
from .fock import BlockKey, Layout, StateVector, block_dim

MINUS, ZERO, PLUS = 0, 1, 2
DEFAULT_DENSE_CAP = 1891  # full basis at N = 60


def _cr(mode):
    return ((mode, True),)


def _an(mode):
    return ((mode, False),)


def _num(mode):
    return ((mode, True), (mode, False))


def _scale(c, terms):
    return [(c * a, w) for a, w in terms]


def _mul(left, right):
    """Terms of the operator product ``left @ right``."""
    return [(a * b, wa + wb) for a, wa in left for b, wb in right]


def _adjoint(terms):
    return [(np.conj(c), tuple((mode, not dag) for mode, dag in reversed(w))) for c, w in terms]


def _build_terms():
    hop = lambda dst, src: [(1.0, _cr(dst) + _an(src))]
    n = {j: [(1.0, _num(j))] for j in (MINUS, ZERO, PLUS)}
    t = {}
    t["T_plus"] = hop(PLUS, MINUS)
    t["T_minus"] = hop(MINUS, PLUS)
    t["T3"] = _scale(0.5, n[PLUS]) + _scale(-0.5, n[MINUS])
    t["Tx"] = _scale(0.5, t["T_plus"]) + _scale(0.5, t["T_minus"])
    t["Ty"] = _scale(-0.5j, t["T_plus"]) + _scale(0.5j, t["T_minus"])
    t["U_plus"] = hop(MINUS, ZERO)
    t["U_minus"] = hop(ZERO, MINUS)
    t["U3"] = _scale(0.5, n[MINUS]) + _scale(-0.5, n[ZERO])
    t["V_plus"] = hop(PLUS, ZERO)
    t["V_minus"] = hop(ZERO, PLUS)
    t["V3"] = _scale(0.5, n[PLUS]) + _scale(-0.5, n[ZERO])
    t["Y"] = _scale(1 / 3, n[PLUS]) + _scale(1 / 3, n[MINUS]) + _scale(-2 / 3, n[ZERO])
    t["Ntot"] = n[MINUS] + n[ZERO] + n[PLUS]
    r2 = math.sqrt(2.0)
    t["L_plus"] = _scale(r2, t["V_plus"] + t["U_minus"])
    t["L_minus"] = _scale(r2, t["V_minus"] + t["U_plus"])
    t["Lz"] = n[PLUS] + _scale(-1.0, n[MINUS])
    t["L2"] = _mul(t["L_minus"], t["L_plus"]) + _mul(t["Lz"], t["Lz"]) + t["Lz"]
    t["K_plus"] = _mul(t["V_plus"], t["U_plus"])
    t["K_minus"] = _mul(t["U_minus"], t["V_minus"])
    t["G_Y"] = _scale(2.0, t["K_plus"] + t["K_minus"])
    r3 = math.sqrt(3.0)
    t["A_singlet"] = [(1 / r3, _an(ZERO) + _an(ZERO)), (-2 / r3, _an(PLUS) + _an(MINUS))]
    t["AdagA"] = _mul(_adjoint(t["A_singlet"]), t["A_singlet"])
    return t


_TERMS = _build_terms()


class OperatorKind(enum.Enum):
    T_plus = "T_plus"
    T_minus = "T_minus"
    T3 = "T3"
    Tx = "Tx"
    Ty = "Ty"
    U_plus = "U_plus"
    U_minus = "U_minus"
    U3 = "U3"
    V_plus = "V_plus"
    V_minus = "V_minus"
    V3 = "V3"
    Y = "Y"
    Ntot = "Ntot"
    L_plus = "L_plus"
    L_minus = "L_minus"
    Lz = "Lz"
    L2 = "L2"
    G_Y = "G_Y"
    A_singlet = "A_singlet"
    AdagA = "AdagA"
    K_plus = "K_plus"
    K_minus = "K_minus"

    @property
    def terms(self):
        return _TERMS[self.value]

    @property
    def shifts(self) -> frozenset:
        """Set of magnetization changes ``m -> m + shift`` over all terms."""
        return frozenset(_word_shift(w) for _, w in self.terms)

    @property
    def displacement(self):
        """The single magnetization shift, or None for mixed tags (Tx, Ty)."""
        s = self.shifts
        return next(iter(s)) if len(s) == 1 else None

    @property
    def is_real(self) -> bool:
        return all(np.imag(c) == 0 for c, _ in self.terms)


ADJOINT = {
    OperatorKind.T_plus: OperatorKind.T_minus,
    OperatorKind.U_plus: OperatorKind.U_minus,
    OperatorKind.V_plus: OperatorKind.V_minus,
    OperatorKind.L_plus: OperatorKind.L_minus,
    OperatorKind.K_plus: OperatorKind.K_minus,
}
ADJOINT.update({v: k for k, v in ADJOINT.items()})


def _word_shift(word):
    shift = 0
    for mode, dag in word:
        step = 1 if dag else -1
        if mode == PLUS:
            shift += step
        elif mode == MINUS:
            shift -= step
    return shift


def as_kind(kind) -> OperatorKind:
    if isinstance(kind, OperatorKind):
        return kind
    try:
        return OperatorKind(kind)
    except ValueError:
        raise ContractError(f"unknown operator tag {kind!r}") from None


def _realize_terms(terms, src: Layout, dst: Layout, real: bool):
    occ0 = src.occupations
    rows, cols, vals = [], [], []
    col_index = np.arange(src.dim)
    for coef, word in terms:
        occ = occ0.copy()
        # integer product of ladder factors; one sqrt at the end keeps n exact
        weight = np.ones(src.dim)
        for mode, dag in reversed(word):
            if dag:
                weight *= np.maximum(occ[:, mode] + 1, 0)
                occ[:, mode] += 1
            else:
                weight *= np.maximum(occ[:, mode], 0)
                occ[:, mode] -= 1
        amp = np.sqrt(weight)
        target = dst.locate(occ)
        keep = (target >= 0) & (amp != 0)
        rows.append(target[keep])
        cols.append(col_index[keep])
        vals.append(coef * amp[keep])
    dtype = float if real else complex
    data = np.concatenate(vals).astype(dtype) if vals else np.zeros(0, dtype)
    mat = sp.coo_matrix(
        (data, (np.concatenate(rows), np.concatenate(cols))), shape=(dst.dim, src.dim)
    )
    return mat.tocsr()


@lru_cache(maxsize=512)
def realize(kind, src: Layout, dst: Layout | None = None) -> sp.csr_matrix:
    """Sparse matrix of ``kind`` from ``src`` to ``dst`` (default: ``src``).

    Components that land outside ``dst`` are dropped.
    """
    kind = as_kind(kind)
    dst = src if dst is None else dst
    if dst.N != src.N:
        raise ContractError("operators conserve N; layouts disagree")
    return _realize_terms(kind.terms, src, dst, kind.is_real)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A realized operator between two layouts (usually single blocks)."""

    source: Layout
    target: Layout
    entries: object  # scipy.sparse matrix or ndarray
    kind: OperatorKind | None = None

    @property
    def source_key(self) -> BlockKey:
        return self.source.keys[0]

    @property
    def target_key(self) -> BlockKey | None:
        return self.target.keys[0] if self.target is not None else None

    @property
    def shape(self):
        return self.entries.shape

    def toarray(self) -> np.ndarray:
        e = self.entries
        return e.toarray() if sp.issparse(e) else np.asarray(e)

    def tridiagonal(self):
        """(diagonal, superdiagonal) of a square real tridiagonal matrix."""
        dense = self.toarray()
        return np.real(np.diag(dense)).copy(), np.real(np.diag(dense, 1)).copy()


def operator_matrix(kind, source: BlockKey) -> OperatorMatrix:
    """Block matrix of a single-displacement operator tag."""
    kind = as_kind(kind)
    N, m = source
    src = Layout.block(N, m)
    shift = kind.displacement
    if shift is None:
        raise ContractError(
            f"{kind.value} mixes magnetization blocks; use full_operator() instead"
        )
    m2 = m + shift
    if block_dim(N, m2) == 0:
        dtype = float if kind.is_real else complex
        return OperatorMatrix(src, None, sp.csr_matrix((0, src.dim), dtype=dtype), kind)
    dst = Layout.block(N, m2)
    return OperatorMatrix(src, dst, realize(kind, src, dst), kind)


def full_operator(kind, N: int) -> sp.csr_matrix:
    """Sparse matrix of ``kind`` over the full fixed-N basis."""
    layout = Layout.full(N)
    return realize(kind, layout, layout)


@dataclass(frozen=True)
class ModelParams:
    """Couplings of ``H = mu N - lambda_s N(N+1) + lambda_a (L^2 - 2N)``.

    ``magnetic`` optionally holds ``(alpha_B, beta_B, gamma_B)`` for the
    field-gradient term ``alpha_B (T+ + T-) + beta_B T3^2 - gamma_B T3``.
    Time is measured in units of hbar / |lambda_a|.
    """

    lambda_a: float = -1.0
    lambda_s: float = 0.0
    mu: float = 0.0
    magnetic: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.magnetic is not None:
            object.__setattr__(self, "magnetic", tuple(float(x) for x in self.magnetic))
            if len(self.magnetic) != 3:
                raise ContractError("magnetic terms need (alpha_B, beta_B, gamma_B)")

    @property
    def has_magnetic(self) -> bool:
        return self.magnetic is not None and any(x != 0 for x in self.magnetic)

    def constant(self, N: int) -> float:
        """Energy offset shared by every state at fixed N."""
        return self.mu * N - self.lambda_s * N * (N + 1) - 2 * self.lambda_a * N

    def level(self, N: int, l: int) -> float:
        """Energy of the total-spin-``l`` manifold (no magnetic terms)."""
        return self.constant(N) + self.lambda_a * l * (l + 1)

    @property
    def time_unit(self) -> float:
        if self.lambda_a == 0:
            raise ContractError("lambda_a must be nonzero to define the time unit")
        return abs(self.lambda_a)


def hamiltonian_block(params: ModelParams, key: BlockKey) -> OperatorMatrix:
    N, m = key
    if params.has_magnetic:
        raise ContractError("magnetic terms couple blocks; use hamiltonian_full()")
    layout = Layout.block(N, m)
    L2 = realize(OperatorKind.L2, layout, layout)
    H = params.lambda_a * L2 + params.constant(N) * sp.identity(layout.dim, format="csr")
    return OperatorMatrix(layout, layout, sp.csr_matrix(H))


def dense_cap() -> int:
    raw = os.environ.get("SPINORSIM_DENSE_CAP")
    return int(raw) if raw else DEFAULT_DENSE_CAP


def check_dense(dim: int):
    cap = dense_cap()
    if dim > cap:
        raise ResourceError(dim, cap)


def hamiltonian_full(params: ModelParams, N: int) -> OperatorMatrix:
    """Dense Hamiltonian over the full fixed-N basis, magnetic terms included."""
    layout = Layout.full(N)
    check_dense(layout.dim)
    H = params.lambda_a * realize(OperatorKind.L2, layout).toarray()
    H += params.constant(N) * np.eye(layout.dim)
    if params.magnetic is not None:
        a, b, g = params.magnetic
        T3 = realize(OperatorKind.T3, layout).toarray()
        H += a * (realize(OperatorKind.T_plus, layout) + realize(OperatorKind.T_minus, layout)).toarray()
        H += b * T3 @ T3 - g * T3
    return OperatorMatrix(layout, layout, H)


# -- moments --------------------------------------------------------------


class Moments(NamedTuple):
    mean: complex
    variance: float


def _apply(op, state: StateVector, work: Layout):
    """Return ``op|state>`` on ``work`` (the state must already live there)."""
    if isinstance(op, OperatorMatrix):
        if op.target is None:
            return np.zeros(work.dim, dtype=complex)
        missing = set(state.layout.ms) - set(op.source.ms)
        if missing:
            raise ContractError(f"operator source lacks state blocks m={sorted(missing)}")
        extra = set(op.target.ms) - set(work.ms)
        if extra:
            raise ContractError(f"operator leaves the state's block set (m={sorted(extra)})")
        vec = state.embed(op.source).amplitudes
        out = np.zeros(work.dim, dtype=complex)
        res = op.entries @ vec
        for m in op.target.ms:
            out[work.slice_of(m)] = res[op.target.slice_of(m)]
        return out
    kind = as_kind(op)
    return realize(kind, work, work) @ state.embed(work).amplitudes


def _work_layout(state: StateVector, ops) -> Layout:
    reach = 2
    for op in ops:
        if isinstance(op, OperatorMatrix):
            reach = 0
    return state.layout.neighborhood(reach) if reach else state.layout


def expectation(state: StateVector, op) -> complex:
    work = _work_layout(state, [op])
    psi = state.embed(work).amplitudes
    return complex(np.vdot(psi, _apply(op, state, work)))


def covariance(state: StateVector, a, b) -> complex:
    """``<AB> - <A><B>`` without symmetrization."""
    if isinstance(a, OperatorMatrix) or isinstance(b, OperatorMatrix):
        return _covariance_explicit(state, a, b)
    work = state.layout.neighborhood(2)
    psi = state.embed(work).amplitudes
    Ra = realize(as_kind(a), work, work)
    Rb = realize(as_kind(b), work, work)
    b_psi = Rb @ psi
    adag_psi = Ra.conj().T @ psi
    ab = np.vdot(adag_psi, b_psi)
    mean_a = np.vdot(psi, Ra @ psi)
    mean_b = np.vdot(psi, b_psi)
    return complex(ab - mean_a * mean_b)


def _covariance_explicit(state, a, b):
    if not (isinstance(a, OperatorMatrix) and isinstance(b, OperatorMatrix)):
        raise ContractError("mix of explicit matrices and tags is not supported")
    if b.target is None or a.target is None:
        return 0j
    if b.target != a.source:
        raise ContractError("B's target layout must equal A's source layout")
    psi_b = b.entries @ state.embed(b.source).amplitudes
    psi_ab = a.entries @ psi_b
    common = Layout(state.N, tuple(sorted(set(state.layout.ms) | set(a.target.ms) | set(b.target.ms))))
    bra = state.embed(common)

    def lift(vec, layout):
        out = np.zeros(common.dim, dtype=complex)
        for m in layout.ms:
            out[common.slice_of(m)] = vec[layout.slice_of(m)]
        return out

    psi = bra.amplitudes
    ab = np.vdot(psi, lift(psi_ab, a.target))
    mean_b = np.vdot(psi, lift(psi_b, b.target))
    psi_a = a.entries @ state.embed(a.source).amplitudes
    mean_a = np.vdot(psi, lift(psi_a, a.target))
    return complex(ab - mean_a * mean_b)


def moments(state: StateVector, a, b=None):
    """Mean and variance of ``a``, or the covariance of ``(a, b)``."""
    if b is not None:
        return covariance(state, a, b)
    mean = expectation(state, a)
    var = covariance(state, a, a) if not isinstance(a, OperatorMatrix) else _covariance_explicit(state, a, a)
    return Moments(mean, float(np.real(var)))


def second_moments(state: StateVector, kinds):
    """Means ``<A_i>`` and the matrix ``S_ij = <A_i A_j>`` for a list of tags.

    One sparse product per operator; every angle-dependent variance of a
    linear combination of the ``A_i`` follows from these by contraction.
    """
    kinds = [as_kind(k) for k in kinds]
    work = state.layout.neighborhood(2)
    psi = state.embed(work).amplitudes
    mats = [realize(k, work, work) for k in kinds]
    right = np.stack([R @ psi for R in mats])
    left = np.stack([R.conj().T @ psi for R in mats])
    means = right @ psi.conj()
    S = left.conj() @ right.T
    return means, S


# -- identity checks --------------------------------------------------------

EPS_PLUS = -1.5 + math.sqrt(2.0)
EPS_MINUS = -1.5 - math.sqrt(2.0)


@dataclass
class Check:
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


@dataclass
class IdentityReport:
    N: int
    checks: dict[str, Check] = field(default_factory=dict)
    bch_matches: list[str] = field(default_factory=list)
    bch_deviations: dict[str, float] = field(default_factory=dict)
    printed_singlet_deviation: float = float("nan")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def lines(self):
        for name, c in self.checks.items():
            flag = "PASS" if c.passed else "FAIL"
            yield f"{flag}  {name:<40s} dev={c.deviation:.3e} tol={c.tolerance:.1e}"
        yield f"info  singlet with printed coefficient 1       dev={self.printed_singlet_deviation:.3e}"
        for name, dev in self.bch_deviations.items():
            yield f"info  disentangling with c = {name:<20s} dev={dev:.3e}"


def nilpotent_exp(A: np.ndarray) -> np.ndarray:
    """``exp(A)`` for nilpotent ``A`` by its terminating power series."""
    n = A.shape[0]
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for j in range(1, n + 1):
        term = term @ A / j
        if not term.any():
            return out
        out = out + term
    if np.abs(term).max() > 0:
        raise ContractError("matrix is not nilpotent")
    return out


def verify_identities(N: int, params: ModelParams | None = None, etas=(0.3, -0.45, 0.2 + 0.3j, 0.5j)) -> IdentityReport:
    """Check the SU(3) operator identities over the full fixed-N basis."""
    if not 1 <= N <= 20:
        # N = 0 cannot tell the disentangling candidates apart; N > 20 is slow
        raise ContractError(f"verify_identities needs 1 <= N <= 20, got {N}")
    params = params or ModelParams()
    layout = Layout.full(N)
    K = OperatorKind
    op = {k: realize(k, layout) for k in K}
    Id = sp.identity(layout.dim, format="csr")
    report = IdentityReport(N)

    def dev(A):
        A = A.toarray() if sp.issparse(A) else A
        return float(np.abs(A).max()) if A.size else 0.0

    L2 = op[K.L2]
    scale = max(dev(L2), 1.0)
    Nop = op[K.Ntot]
    shifted_Y = op[K.Y] + Nop / 6 + Id / 4
    rhs = (
        4 * op[K.T3] @ op[K.T3]
        + 0.5 * (Nop - EPS_PLUS * Id) @ (Nop - EPS_MINUS * Id)
        - 2 * shifted_Y @ shifted_Y
        + op[K.G_Y]
    )
    report.checks["L2 hypercharge decomposition"] = Check(dev(L2 - rhs), 1e-10 * scale)

    NN1 = Nop @ (Nop + Id)
    report.checks["singlet: L2 = N(N+1) - 3 AdagA"] = Check(dev(L2 - (NN1 - 3 * op[K.AdagA])), 1e-10)
    report.printed_singlet_deviation = dev(L2 - (NN1 - op[K.AdagA]))

    def comm(a, b):
        return a @ b - b @ a

    tol = 1e-12
    for X in ("T", "U", "V"):
        p, m, z = op[K[f"{X}_plus"]], op[K[f"{X}_minus"]], op[K[f"{X}3"]]
        report.checks[f"[{X}+,{X}-] = 2{X}3"] = Check(dev(comm(p, m) - 2 * z), tol)
        report.checks[f"[{X}3,{X}+] = +{X}+"] = Check(dev(comm(z, p) - p), tol)
        report.checks[f"[{X}3,{X}-] = -{X}-"] = Check(dev(comm(z, m) + m), tol)
    report.checks["[V+,U-] = T+"] = Check(dev(comm(op[K.V_plus], op[K.U_minus]) - op[K.T_plus]), tol)
    report.checks["[T3,G_Y] = 0"] = Check(dev(comm(op[K.T3], op[K.G_Y])), tol)
    H = params.lambda_a * L2 + params.constant(N) * Id
    report.checks["[H,Lz] = 0"] = Check(dev(comm(H, op[K.Lz])), tol)
    report.checks["[H,N] = 0"] = Check(dev(comm(H, Nop)), tol)

    # exp(eta L+) = exp(sqrt2 eta V+) exp(sqrt2 eta U-) exp(-c T+)
    r2 = math.sqrt(2.0)
    dense = {k: op[k].toarray() for k in (K.L_plus, K.V_plus, K.U_minus, K.T_plus)}
    candidates = {"eta^2": lambda e: e * e, "eta/sqrt2": lambda e: e / r2}
    worst = {name: 0.0 for name in candidates}
    for eta in etas:
        lhs = nilpotent_exp(eta * dense[K.L_plus])
        left = nilpotent_exp(r2 * eta * dense[K.V_plus]) @ nilpotent_exp(r2 * eta * dense[K.U_minus])
        for name, coef in candidates.items():
            rhs = left @ nilpotent_exp(-coef(eta) * dense[K.T_plus])
            worst[name] = max(worst[name], float(np.abs(lhs - rhs).max()))
    report.bch_deviations = worst
    report.bch_matches = [name for name, dev in worst.items() if dev <= 1e-10]
    report.checks["exactly one disentangling coefficient matches"] = Check(
        float(abs(len(report.bch_matches) - 1)), 0.0
    )
    return report
