"""
Flat ``key = value`` run configuration.

Dotted keys group related settings (``state.kind = coherent``). Numeric
values may be simple arithmetic over numbers and ``pi`` (``2*pi/3``).
Unknown keys are rejected.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import ModelParams
from .errors import ContractError, SpinorError


class ConfigError(SpinorError):
    """Invalid or incomplete configuration; the message names the field."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _arith(node):
    if isinstance(node, ast.Expression):
        return _arith(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _arith(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_arith(node.left), _arith(node.right))
    raise ValueError("not an arithmetic expression")


def parse_number(key, text):
    try:
        return float(_arith(ast.parse(text.strip(), mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError):
        raise ConfigError(key, f"expected a number, got {text!r}") from None


def parse_int(key, text):
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}") from None


def parse_bool(key, text):
    low = text.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(key, f"expected true/false, got {text!r}")


def parse_triple(key, text, item):
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != 3:
        raise ConfigError(key, f"expected three comma-separated values, got {text!r}")
    return tuple(item(key, p) for p in parts)


KEYS = {
    "N": "int",
    "params.lambda_a": "float", "params.lambda_s": "float", "params.mu": "float",
    "params.alpha_B": "float", "params.beta_B": "float", "params.gamma_B": "float",
    "state.kind": "str", "state.occupation": "int3",
    "state.P0": "float", "state.theta": "float",
    "state.populations": "float3", "state.phases": "float3",
    "state.l": "int", "state.m": "int", "state.method": "str",
    "ground.m": "int", "ground.fraction": "float",
    "time.start": "float", "time.stop": "float", "time.steps": "int",
    "scan.phi": "float", "scan.alpha": "float", "scan.phi_points": "int", "scan.alpha_points": "int",
    "outputs.csv_path": "str", "outputs.report_path": "str", "outputs.emit_plot_script": "bool",
    "validate.max_n": "int", "validate.draws": "int",
}


def parse_text(text: str) -> dict:
    """Parse config text into ``{key: typed value}``."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        if key in raw:
            raise ConfigError(key, "given twice")
        raw[key] = value
    out = {}
    for key, value in raw.items():
        kind = KEYS[key]
        if kind == "int":
            out[key] = parse_int(key, value)
        elif kind == "float":
            out[key] = parse_number(key, value)
        elif kind == "bool":
            out[key] = parse_bool(key, value)
        elif kind == "int3":
            out[key] = parse_triple(key, value, parse_int)
        elif kind == "float3":
            out[key] = parse_triple(key, value, parse_number)
        else:
            out[key] = value
    return out


@dataclass
class StateConfig:
    kind: str
    occupation: tuple | None = None
    P0: float | None = None
    theta: float | None = None
    populations: tuple | None = None
    phases: tuple = (0.0, 0.0, 0.0)
    l: int | None = None
    m: int | None = None
    method: str = "analytic"


@dataclass
class RunConfig:
    N: int
    params: ModelParams
    state: StateConfig | None
    ground_m: int = 0
    ground_fraction: float = 0.1
    t_start: float = 0.0
    t_stop: float = math.pi
    steps: int = 512
    phi: float = 2 * math.pi / 3
    alpha: float = 0.0
    phi_points: int = 180
    alpha_points: int = 180
    csv_path: str | None = None
    report_path: str | None = None
    emit_plot_script: bool = False
    validate_max_n: int = 10
    validate_draws: int = 20
    raw: dict = field(default_factory=dict, repr=False)


def _require(values, key):
    if key not in values:
        raise ConfigError(key, "required but missing")
    return values[key]


def build(values: dict, command: str) -> RunConfig:
    """Validate parsed values for ``command`` and assemble a RunConfig."""
    if command == "validate":
        N = values.get("N", 0)
    else:
        N = _require(values, "N")
    if N < 0:
        raise ConfigError("N", "must be non-negative")
    magnetic = None
    mag_keys = ("params.alpha_B", "params.beta_B", "params.gamma_B")
    if any(k in values for k in mag_keys):
        magnetic = tuple(values.get(k, 0.0) for k in mag_keys)
    params = ModelParams(
        values.get("params.lambda_a", -1.0), values.get("params.lambda_s", 0.0),
        values.get("params.mu", 0.0), magnetic,
    )
    cfg = RunConfig(N=N, params=params, state=None, raw=values)
    cfg.ground_m = values.get("ground.m", 0)
    cfg.ground_fraction = values.get("ground.fraction", 0.1)
    cfg.t_start = values.get("time.start", 0.0)
    cfg.t_stop = values.get("time.stop", math.pi)
    cfg.steps = values.get("time.steps", 512)
    cfg.phi = values.get("scan.phi", 2 * math.pi / 3)
    cfg.alpha = values.get("scan.alpha", 0.0)
    cfg.phi_points = values.get("scan.phi_points", 180)
    cfg.alpha_points = values.get("scan.alpha_points", 180)
    cfg.csv_path = values.get("outputs.csv_path")
    cfg.report_path = values.get("outputs.report_path")
    cfg.emit_plot_script = values.get("outputs.emit_plot_script", False)
    cfg.validate_max_n = values.get("validate.max_n", 10)
    cfg.validate_draws = values.get("validate.draws", 20)

    if command in ("evolve", "stationary"):
        if params.lambda_a == 0:
            raise ConfigError("params.lambda_a", "must be nonzero for dynamics")
        if not cfg.t_stop > cfg.t_start:
            raise ConfigError("time.stop", "must exceed time.start")
        if cfg.steps < 1:
            raise ConfigError("time.steps", "must be at least 1")
        if cfg.phi_points < 3:
            raise ConfigError("scan.phi_points", "must be at least 3")
        if cfg.alpha_points < 3:
            raise ConfigError("scan.alpha_points", "must be at least 3")
        cfg.state = _build_state(values, N)
        if command == "stationary" and cfg.state.kind != "coherent":
            raise ConfigError("state.kind", "stationary checks need a coherent state")
    if command == "ground":
        if params.has_magnetic:
            raise ConfigError("params.alpha_B", "ground works per block; magnetic terms are not supported")
        if abs(cfg.ground_m) > N:
            raise ConfigError("ground.m", f"|m| must not exceed N={N}")
        if not 0 < cfg.ground_fraction < 1:
            raise ConfigError("ground.fraction", "must lie in (0, 1)")
    if command == "validate":
        if not 1 <= cfg.validate_max_n <= 20:
            raise ConfigError("validate.max_n", "must lie in [1, 20]")
        if cfg.validate_draws < 1:
            raise ConfigError("validate.draws", "must be positive")
    return cfg


def _build_state(values, N) -> StateConfig:
    kind = _require(values, "state.kind")
    if kind == "fock":
        occ = _require(values, "state.occupation")
        if min(occ) < 0 or sum(occ) != N:
            raise ConfigError("state.occupation", f"needs non-negative counts summing to N={N}")
        return StateConfig(kind, occupation=occ)
    if kind == "coherent":
        if N < 1:
            raise ConfigError("N", "coherent states need N >= 1")
        if "state.P0" in values or "state.theta" in values:
            if "state.populations" in values:
                raise ConfigError("state.populations", "give either P0/theta or populations, not both")
            P0 = _require(values, "state.P0")
            if not 0 <= P0 <= 1:
                raise ConfigError("state.P0", "must lie in [0, 1]")
            return StateConfig(kind, P0=P0, theta=values.get("state.theta", 0.0))
        pops = _require(values, "state.populations")
        if min(pops) < 0 or abs(sum(pops) - 1) > 1e-12:
            raise ConfigError("state.populations", "must be non-negative and sum to 1")
        return StateConfig(kind, populations=pops, phases=values.get("state.phases", (0.0, 0.0, 0.0)))
    if kind == "angular":
        l, m = _require(values, "state.l"), _require(values, "state.m")
        if not (abs(m) <= l <= N) or (N - l) % 2:
            raise ConfigError("state.l", f"need |m| <= l <= N with l = N mod 2 (N={N})")
        method = values.get("state.method", "analytic")
        if method not in ("analytic", "numeric"):
            raise ConfigError("state.method", "must be 'analytic' or 'numeric'")
        return StateConfig(kind, l=l, m=m, method=method)
    raise ConfigError("state.kind", f"must be fock, coherent or angular, got {kind!r}")


def load(path, command: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("--config", f"cannot read {path}: {exc.strerror}") from None
    try:
        return build(parse_text(text), command)
    except ContractError as exc:
        raise ConfigError("config", str(exc)) from None
