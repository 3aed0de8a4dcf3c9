"""
Squeezing diagnostics: U-V quadratures, two-spin squeezing, the two-mode
entanglement sum and isospin squeezing.

All quantities are contractions of one table of first and second moments
of ``(U+, U-, V+, V-, Tx, Ty, T3, Y)``, so angle scans cost no extra
operator applications.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .algebra import OperatorKind, second_moments
from .errors import ContractError
from .fock import StateVector

K = OperatorKind
_BASIS = (K.U_plus, K.U_minus, K.V_plus, K.V_minus, K.Tx, K.Ty, K.T3, K.Y)
_POS = {k: i for i, k in enumerate(_BASIS)}
UNDEFINED_TOL = 1e-9


class MomentTable:
    """First and second moments of the squeezing operator set for one state."""

    def __init__(self, state: StateVector):
        self.N = state.N
        self.means, self.S = second_moments(state, _BASIS)

    def coeffs(self, **weights) -> np.ndarray:
        """Coefficient vector for ``sum_k w_k * A_k`` (keys are tag names)."""
        c = np.zeros(len(_BASIS), dtype=complex)
        for name, w in weights.items():
            c[_POS[K[name]]] += w
        return c

    def mean(self, c: np.ndarray):
        return c @ self.means

    def variance(self, c: np.ndarray) -> np.ndarray:
        """Variance of the Hermitian combination(s) ``c`` (rows)."""
        c = np.atleast_2d(c)
        second = np.einsum("ai,ij,aj->a", c, self.S, c)
        first = c @ self.means
        return np.real(second - first * first)

    def cov(self, a: OperatorKind, b: OperatorKind) -> complex:
        i, j = _POS[a], _POS[b]
        return complex(self.S[i, j] - self.means[i] * self.means[j])

    @property
    def Y(self) -> float:
        return float(np.real(self.means[_POS[K.Y]]))

    @property
    def Tx(self) -> float:
        return float(np.real(self.means[_POS[K.Tx]]))


def _x_u(table, alpha):
    alpha = np.atleast_1d(alpha)[:, None]
    c = np.zeros((alpha.shape[0], len(_BASIS)), dtype=complex)
    c[:, [_POS[K.U_minus]]] = np.exp(1j * alpha) / math.sqrt(2)
    c[:, [_POS[K.U_plus]]] = np.exp(-1j * alpha) / math.sqrt(2)
    return c


def _x_v(table, alpha):
    alpha = np.atleast_1d(alpha)[:, None]
    c = np.zeros((alpha.shape[0], len(_BASIS)), dtype=complex)
    c[:, [_POS[K.V_minus]]] = np.exp(1j * alpha) / math.sqrt(2)
    c[:, [_POS[K.V_plus]]] = np.exp(-1j * alpha) / math.sqrt(2)
    return c


def _q_plus(table, alpha):
    return (_x_v(table, alpha) + _x_u(table, alpha)) / 2


def _q_minus(table, alpha):
    return (_x_v(table, alpha) - _x_u(table, alpha)) / 2


def _c_uv(table, alpha):
    return np.real(np.exp(-2j * np.atleast_1d(alpha)) * table.cov(K.V_plus, K.U_plus))


def _uv_sum(table, alpha):
    """``var(Q+^a) + var(Q-^{a+pi/2})`` for an array of angles."""
    return table.variance(_q_plus(table, alpha)) + table.variance(_q_minus(table, np.atleast_1d(alpha) + np.pi / 2))


# -- angle optimization -------------------------------------------------------


def periodic_minimize(f, period=np.pi, points=180, xtol=1e-6):
    """Grid scan over ``[0, period)`` refined by golden-section search.

    ``f`` must accept an array of angles. Returns ``(angle, value)``.
    """
    grid = np.arange(points) * (period / points)
    values = f(grid)
    finite = np.isfinite(values)
    if not finite.any():
        return float("nan"), float("nan")
    values = np.where(finite, values, np.inf)
    i = int(np.argmin(values))
    step = period / points
    lo, mid, hi = grid[i] - step, grid[i], grid[i] + step
    scalar = lambda x: float(f(np.array([x]))[0])
    f_lo, f_mid, f_hi = scalar(lo), scalar(mid), scalar(hi)
    best_x, best_f = mid, min(values[i], f_mid)
    # flat minima can defeat the strict bracket test; keep the grid point then
    if f_lo > f_mid and f_hi > f_mid:
        try:
            res = optimize.minimize_scalar(
                scalar, bracket=(lo, mid, hi), method="golden", options={"xtol": xtol / period}
            )
        except ValueError:
            res = None
        if res is not None and res.fun < best_f:
            best_x, best_f = float(res.x), float(res.fun)
    return float(best_x % period), float(best_f)


# -- public diagnostics ------------------------------------------------------


@dataclass(frozen=True)
class QuadratureStats:
    alpha: float
    var_xu: float
    var_xv: float
    var_xu_perp: float
    var_xv_perp: float
    var_qplus: float
    var_qminus_perp: float
    c_uv: float

    @property
    def identity_residual(self) -> float:
        quarter = 0.25 * (self.var_xu + self.var_xv + self.var_xu_perp + self.var_xv_perp)
        return abs(self.var_qplus + self.var_qminus_perp - quarter - self.c_uv)


def _table(state_or_table):
    if isinstance(state_or_table, MomentTable):
        return state_or_table
    return MomentTable(state_or_table)


def quadrature_stats(state, alpha: float) -> QuadratureStats:
    t = _table(state)
    perp = alpha + np.pi / 2
    return QuadratureStats(
        alpha=float(alpha),
        var_xu=float(t.variance(_x_u(t, alpha))[0]),
        var_xv=float(t.variance(_x_v(t, alpha))[0]),
        var_xu_perp=float(t.variance(_x_u(t, perp))[0]),
        var_xv_perp=float(t.variance(_x_v(t, perp))[0]),
        var_qplus=float(t.variance(_q_plus(t, alpha))[0]),
        var_qminus_perp=float(t.variance(_q_minus(t, perp))[0]),
        c_uv=float(_c_uv(t, alpha)[0]),
    )


class XiResult(NamedTuple):
    value: float
    angle: float
    defined: bool


def xi_uv(state, alpha=None, points=180) -> XiResult:
    """Two-spin squeezing ``[var Q+ + var Q-_perp] / |<Y>|``; squeezed below 3/4.

    ``alpha=None`` minimizes over the quadrature angle.
    """
    t = _table(state)
    denom = abs(t.Y)
    if denom < UNDEFINED_TOL * max(t.N, 1):
        return XiResult(float("nan"), float("nan") if alpha is None else float(alpha), False)
    f = lambda a: _uv_sum(t, a) / denom
    if alpha is None:
        angle, value = periodic_minimize(f, np.pi, points)
        return XiResult(value, angle, True)
    return XiResult(float(f(alpha)[0]), float(alpha), True)


class PmResult(NamedTuple):
    plus_sq: float
    minus_sq: float
    total: float
    angle: float
    defined: bool


def _pm_parts(t: MomentTable, alpha):
    alpha = np.atleast_1d(alpha)
    perp = alpha + np.pi / 2
    j_plus = 0.5 * (1.5 * t.Y + t.Tx)
    j_minus = 0.5 * (1.5 * t.Y - t.Tx)
    den_plus = np.real(t.mean(_q_plus(t, perp))) ** 2 + j_plus**2
    den_minus = np.real(t.mean(_q_minus(t, perp + np.pi / 2))) ** 2 + j_minus**2
    num_plus = t.N * t.variance(_q_plus(t, alpha))
    num_minus = t.N * t.variance(_q_minus(t, perp))
    floor = (UNDEFINED_TOL * max(t.N, 1)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        plus = np.where(den_plus > floor, num_plus / den_plus, np.nan)
        minus = np.where(den_minus > floor, num_minus / den_minus, np.nan)
    return plus, minus


def xi_pm(state, alpha=None, points=180) -> PmResult:
    """``(xi_+^a)^2``, ``(xi_-^{a+pi/2})^2`` and their sum (entangled below 2)."""
    t = _table(state)
    if alpha is None:
        angle, _ = periodic_minimize(lambda a: np.sum(_pm_parts(t, a), axis=0), np.pi, points)
    else:
        angle = float(alpha)
    if np.isnan(angle):
        return PmResult(float("nan"), float("nan"), float("nan"), angle, False)
    plus, minus = (float(x[0]) for x in _pm_parts(t, angle))
    total = plus + minus
    return PmResult(plus, minus, total, angle, bool(np.isfinite(total)))


def _isospin_parts(t: MomentTable, phi):
    phi = np.atleast_1d(phi)[:, None]
    c_y = np.zeros((phi.shape[0], len(_BASIS)), dtype=complex)
    c_y[:, [_POS[K.Ty]]] = np.cos(phi)
    c_y[:, [_POS[K.T3]]] = np.sin(phi)
    c_z = np.zeros_like(c_y)
    c_z[:, [_POS[K.Ty]]] = -np.sin(phi)
    c_z[:, [_POS[K.T3]]] = np.cos(phi)
    var = t.variance(c_y)
    denom = t.Tx**2 + np.real(c_z @ t.means) ** 2
    return var, denom


def xi_phi(state, phi=None, points=180) -> XiResult:
    """Isospin squeezing after rotating by ``phi`` about x; squeezed below 1."""
    t = _table(state)
    floor = (UNDEFINED_TOL * max(t.N, 1)) ** 2

    def f(p):
        var, denom = _isospin_parts(t, p)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(denom > floor, np.sqrt(np.maximum(t.N * var / denom, 0)), np.nan)

    if phi is None:
        angle, value = periodic_minimize(f, np.pi, points)
        return XiResult(value, angle, bool(np.isfinite(value)))
    value = float(f(phi)[0])
    return XiResult(value, float(phi), bool(np.isfinite(value)))


@dataclass(frozen=True)
class SqueezeSettings:
    phi: float = 2 * np.pi / 3
    alpha: float = 0.0
    phi_points: int = 180
    alpha_points: int = 180

    def __post_init__(self):
        if self.phi_points < 3 or self.alpha_points < 3:
            raise ContractError("angle scans need at least 3 grid points")


@dataclass(frozen=True)
class SqueezeReport:
    t: float
    xi_uv: XiResult
    xi_uv_fixed: XiResult
    xi_pm: PmResult
    xi_phi: XiResult
    xi_phi_min: XiResult

    @property
    def two_mode_sum(self) -> float:
        return self.xi_pm.total


def squeeze_report(state: StateVector, t: float = 0.0, settings: SqueezeSettings | None = None) -> SqueezeReport:
    s = settings or SqueezeSettings()
    table = MomentTable(state)
    return SqueezeReport(
        t=t,
        xi_uv=xi_uv(table, None, s.alpha_points),
        xi_uv_fixed=xi_uv(table, s.alpha),
        xi_pm=xi_pm(table, None, s.alpha_points),
        xi_phi=xi_phi(table, s.phi),
        xi_phi_min=xi_phi(table, None, s.phi_points),
    )


# -- observables for time series ---------------------------------------------

POPULATION_COLUMNS = ("n_minus", "n_zero", "n_plus", "Y", "T3")
SQUEEZE_COLUMNS = (
    "xi_phi_fixed", "xi_phi_min", "phi_min",
    "xi_uv_fixed", "xi_uv_min", "alpha_min",
    "xi_plus_sq", "xi_minus_sq", "two_mode_sum", "alpha_pm_min",
)
OBSERVABLES = POPULATION_COLUMNS + SQUEEZE_COLUMNS


def populations(state: StateVector) -> np.ndarray:
    """``<n_minus>, <n_zero>, <n_plus>``."""
    weights = np.abs(state.amplitudes) ** 2
    return weights @ state.layout.occupations


class ObservablePlan:
    """Validated list of observers, evaluated together on each state."""

    def __init__(self, observers, settings: SqueezeSettings):
        self.settings = settings
        self.columns = []
        self.custom = {}
        for obs in observers:
            if isinstance(obs, str):
                if obs not in OBSERVABLES:
                    raise ContractError(f"unknown observable {obs!r}; choose from {OBSERVABLES}")
                self.columns.append(obs)
            else:
                name, fn = obs
                if not callable(fn):
                    raise ContractError(f"observer {name!r} is not callable")
                self.columns.append(name)
                self.custom[name] = fn
        self.needs_squeeze = any(c in SQUEEZE_COLUMNS for c in self.columns)
        self.flag_names = []
        if self.needs_squeeze:
            self.flag_names = ["xi_phi_ok", "xi_uv_ok", "xi_pm_ok"]

    def evaluate(self, state: StateVector, t: float):
        values = {}
        n_minus, n_zero, n_plus = populations(state)
        values.update(
            n_minus=n_minus, n_zero=n_zero, n_plus=n_plus,
            Y=(n_plus + n_minus - 2 * n_zero) / 3, T3=(n_plus - n_minus) / 2,
        )
        flags = {}
        if self.needs_squeeze:
            r = squeeze_report(state, t, self.settings)
            values.update(
                xi_phi_fixed=r.xi_phi.value, xi_phi_min=r.xi_phi_min.value, phi_min=r.xi_phi_min.angle,
                xi_uv_fixed=r.xi_uv_fixed.value, xi_uv_min=r.xi_uv.value, alpha_min=r.xi_uv.angle,
                xi_plus_sq=r.xi_pm.plus_sq, xi_minus_sq=r.xi_pm.minus_sq,
                two_mode_sum=r.xi_pm.total, alpha_pm_min=r.xi_pm.angle,
            )
            flags = {
                "xi_phi_ok": r.xi_phi.defined and r.xi_phi_min.defined,
                "xi_uv_ok": r.xi_uv.defined,
                "xi_pm_ok": r.xi_pm.defined,
            }
        for name, fn in self.custom.items():
            values[name] = float(fn(state))
        return [float(np.real(values[c])) for c in self.columns], flags
