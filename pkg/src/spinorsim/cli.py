"""
Command-line runner: ``spinorsim <ground|evolve|stationary|validate> --config FILE``.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical failure. Every artifact is written only after all computation
has succeeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load
from .errors import ContractError, NumericalError
from .evolve import Propagator, TimeGrid, format_float, time_series
from .fock import ModeOccupation
from .ground import chain_solver, gaussian_profile, ground_state, one_particle_density
from .prepare import AngularLabel, CoherentSpec, angular_state, coherent_state, eta, fock_state
from .squeeze import OBSERVABLES, SqueezeSettings, populations
from .validation import run_suite

log = logging.getLogger("spinorsim")

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format_float(float(x))


def build_state(cfg: RunConfig):
    s = cfg.state
    if s.kind == "fock":
        return fock_state(ModeOccupation(*s.occupation))
    if s.kind == "coherent":
        return coherent_state(coherent_spec(cfg))
    return angular_state(AngularLabel(cfg.N, s.l, s.m), s.method)


def coherent_spec(cfg: RunConfig) -> CoherentSpec:
    s = cfg.state
    if s.P0 is not None:
        return CoherentSpec.from_p0_theta(cfg.N, s.P0, s.theta)
    return CoherentSpec.from_populations(cfg.N, s.populations, s.phases)


# -- subcommands; each returns (exit code, {filename: text}) --------------


def run_ground(cfg: RunConfig, args):
    N, m = cfg.N, cfg.ground_m
    energy, state = ground_state(N, m, cfg.params)
    psi = np.real(state.amplitudes)
    occ = state.layout.occupations
    header = ["n_zero", "Y", "psi_exact"]
    columns = [occ[:, 1], N / 3 - occ[:, 1], psi]
    lines = [f"ground state of block N={N}, m={m}", f"energy = {format_float(energy)}"]
    if m == 0 and N % 2 == 0 and N >= 4:
        gauss = gaussian_profile(N)
        even = chain_solver(N, "even")
        odd = chain_solver(N, "odd")
        chain = even.vectors[:, 0]
        header += ["psi_gauss", "psi_chain_even"]
        columns += [gauss, chain]
        gap = abs(even.energies[0] - odd.energies[0]) / max(abs(even.energies[0]), abs(odd.energies[0]))
        lines += [
            f"overlap^2 exact vs Gaussian = {format_float(float(np.dot(psi, gauss)) ** 2)}",
            f"overlap^2 exact vs chain    = {format_float(float(np.dot(psi, chain)) ** 2)}",
            f"chain even/odd relative gap = {format_float(gap)}",
        ]
    rho = one_particle_density(state, cfg.ground_fraction)
    pops = np.real(np.diag(rho.matrix))
    lines += [
        "one-particle density diagonal (n_minus, n_zero, n_plus) = "
        + ", ".join(format_float(x) for x in pops),
        "one-particle density eigenvalues = " + ", ".join(format_float(x) for x in rho.eigenvalues),
        f"verdict (threshold {cfg.ground_fraction} N): {rho.verdict}",
    ]
    profile = _csv_text(header, zip(*columns))
    summary = _csv_text(
        ["N", "m", "energy", "n_minus", "n_zero", "n_plus", "rho_eig_1", "rho_eig_2", "rho_eig_3", "fragmented"],
        [[N, m, energy, *pops, *rho.eigenvalues, rho.fragmented]],
    )
    csv_name = cfg.csv_path or "ground.csv"
    files = {
        csv_name: profile,
        _with_suffix(csv_name, "_summary"): summary,
        cfg.report_path or "ground_report.txt": "\n".join(lines) + "\n",
    }
    if cfg.emit_plot_script:
        plot_cols = [(c, "lines") for c in header[2:]]
        files[_with_suffix(csv_name, "", ".gp")] = plot_script(csv_name, header, [plot_cols], x="n_zero")
    return EXIT_OK, files


def run_evolve(cfg: RunConfig, args):
    state = build_state(cfg)
    settings = SqueezeSettings(cfg.phi, cfg.alpha, cfg.phi_points, cfg.alpha_points)
    grid = TimeGrid(cfg.t_start, cfg.t_stop, cfg.steps)
    series = time_series(state, cfg.params, grid, list(OBSERVABLES), settings, threads=args.threads)
    csv_name = cfg.csv_path or "evolve.csv"
    t = series["t"]
    lines = [f"evolution of {cfg.state.kind} state, N={cfg.N}, {len(t)} time points"]
    for name in ("xi_phi_fixed", "xi_phi_min", "xi_uv_min", "two_mode_sum"):
        col = series[name]
        if np.isfinite(col).any():
            i = int(np.nanargmin(col))
            lines.append(f"min {name:<13s} = {format_float(col[i])} at t = {format_float(t[i])}")
        else:
            lines.append(f"min {name:<13s} = undefined")
    phi = series["phi_min"]
    if np.isfinite(phi).any():
        lines.append(f"time-averaged phi_min = {format_float(float(np.nanmean(phi)))}")
    files = {csv_name: series.to_csv(), cfg.report_path or "evolve_report.txt": "\n".join(lines) + "\n"}
    if cfg.emit_plot_script:
        header = series.columns
        if cfg.state.kind == "fock":
            panels = [[("xi_uv_min", "lines dt 2"), ("two_mode_sum", "lines dt 1")]]
        else:
            panels = [[("xi_phi_fixed", "lines")], [("xi_phi_min", "lines")], [("phi_min", "lines")]]
        files[_with_suffix(csv_name, "", ".gp")] = plot_script(csv_name, header, panels, x="t")
    return EXIT_OK, files


def run_stationary(cfg: RunConfig, args):
    spec = coherent_spec(cfg)
    result = eta(spec)
    state = coherent_state(spec)
    prop = Propagator(state, cfg.params)
    times = TimeGrid(cfg.t_start, cfg.t_stop, cfg.steps).points
    pops = np.array([populations(prop.at(t)) for t in times])
    drift = float(np.abs(pops - pops[0]).max())
    lines = [
        f"eta = {format_float(result.eta.real)} + {format_float(result.eta.imag)}i"
        if result.defined else "eta undefined (alpha_minus * alpha_plus = 0)",
        f"stationary = {'yes' if result.stationary else 'no'}",
        f"max population drift over t in [{format_float(times[0])}, {format_float(times[-1])}] = {format_float(drift)}",
    ]
    files = {
        cfg.csv_path or "stationary.csv": _csv_text(["t", "n_minus", "n_zero", "n_plus"], [[t, *p] for t, p in zip(times, pops)]),
        cfg.report_path or "stationary_report.txt": "\n".join(lines) + "\n",
    }
    return EXIT_OK, files


def run_validate(cfg: RunConfig, args):
    results = run_suite(cfg.validate_max_n, cfg.validate_draws, args.seed)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<66s} {format_float(r.value):>24s}  tol {r.tolerance:g}" for r in results]
    ok = all(r.passed for r in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    files = {
        cfg.csv_path or "validate.csv": _csv_text(["check", "value", "tolerance", "passed"], [[r.name, r.value, r.tolerance, r.passed] for r in results]),
        cfg.report_path or "validate_report.txt": "\n".join(lines) + "\n",
    }
    return (EXIT_OK if ok else EXIT_VALIDATION), files


COMMANDS = {"ground": run_ground, "evolve": run_evolve, "stationary": run_stationary, "validate": run_validate}


# -- plot scripts ---------------------------------------------------------------


def plot_script(csv_name, header, panels, x="t") -> str:
    """Gnuplot script drawing ``panels`` (lists of (column, style)) against ``x``."""
    wanted = [x] + [c for panel in panels for c, _ in panel]
    missing = [c for c in wanted if c not in header]
    if missing:
        raise ConfigError("columns", f"not in CSV header: {', '.join(missing)}")
    out = [
        f"# plots {csv_name}; run with: gnuplot -p {Path(csv_name).with_suffix('.gp').name}",
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{x}'",
    ]
    if len(panels) > 1:
        out.append(f"set multiplot layout {len(panels)},1")
    xi = header.index(x) + 1
    for panel in panels:
        parts = [f"'{Path(csv_name).name}' using {xi}:{header.index(c) + 1} with {style}" for c, style in panel]
        out.append("plot " + ", \\\n     ".join(parts))
    if len(panels) > 1:
        out.append("unset multiplot")
    return "\n".join(out) + "\n"


def emit_plot_script(csv_path, columns, x="t", out_path=None) -> Path:
    """Write a gnuplot script for ``columns`` of an existing CSV (one panel each)."""
    csv_path = Path(csv_path)
    try:
        with csv_path.open() as fh:
            header = next(csv.reader(fh))
    except (OSError, StopIteration):
        raise ConfigError("csv_path", f"cannot read a header from {csv_path}") from None
    panels = [[(c, "lines")] for c in columns]
    text = plot_script(csv_path.name, header, panels, x=x)
    out_path = Path(out_path) if out_path else csv_path.with_suffix(".gp")
    out_path.write_text(text)
    return out_path


def _with_suffix(name, tag, ext=None):
    p = Path(name)
    return str(p.with_name(p.stem + tag + (ext or p.suffix)))


# -- entry point -----------------------------------------------------------------


def make_parser():
    parser = argparse.ArgumentParser(prog="spinorsim", description="Spinor-1 condensate simulations")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="flat key = value configuration file")
    parser.add_argument("--out", default=".", help="directory for artifacts (default: cwd)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for time points")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized validation draws")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = make_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads", "must be at least 1")
        cfg = load(args.config, args.command)
        code, files = COMMANDS[args.command](cfg, args)
    except (ConfigError, ContractError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        with open(out / name, "w", newline="\n") as fh:
            fh.write(text)
    report = next((text for name, text in files.items() if name.endswith(".txt")), "")
    sys.stdout.write(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
