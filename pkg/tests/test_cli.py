import pytest

from spinorsim.cli import emit_plot_script, main

EVOLVE = """N = 30
state.kind = fock
state.occupation = 0, 30, 0
time.stop = pi/8
time.steps = 6
outputs.emit_plot_script = true
"""


def run(tmp_path, command, text, out="out", *extra):
    cfg = tmp_path / f"{command}.cfg"
    cfg.write_text(text)
    return main([command, "--config", str(cfg), "--out", str(tmp_path / out), *extra])


def test_evolve_is_deterministic(tmp_path):
    assert run(tmp_path, "evolve", EVOLVE, "a") == 0
    assert run(tmp_path, "evolve", EVOLVE, "b", "--threads", "3") == 0
    a, b = (tmp_path / d / "evolve.csv" for d in "ab")
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()
    assert b"\r" not in a.read_bytes()
    first = dict(zip(rows[0].split(","), rows[1].split(",")))
    assert float(first["xi_uv_min"]) == pytest.approx(0.75, abs=1e-9)
    assert float(first["two_mode_sum"]) == pytest.approx(2.0, abs=1e-9)
    assert first["xi_phi_fixed"] == "nan" and first["xi_phi_ok"] == "false"
    assert (tmp_path / "a" / "evolve.gp").exists()


def test_config_error_exits_2_without_artifacts(tmp_path, capsys):
    assert run(tmp_path, "evolve", EVOLVE + "time.steps = 0\n") == 2
    assert not (tmp_path / "out").exists()
    assert "time.steps" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["ground", "--config", str(tmp_path / "none.cfg"), "--out", str(tmp_path / "o")]) == 2


def test_numerical_failure_exits_3(tmp_path, monkeypatch):
    monkeypatch.setenv("SPINORSIM_DENSE_CAP", "5")
    text = "N = 4\nparams.alpha_B = 0.2\nstate.kind = fock\nstate.occupation = 0, 4, 0\ntime.steps = 2\n"
    assert run(tmp_path, "evolve", text) == 3
    assert not (tmp_path / "out").exists()


def test_ground_outputs(tmp_path):
    assert run(tmp_path, "ground", "N = 40\nground.m = 0\n") == 0
    header = (tmp_path / "out" / "ground.csv").read_text().splitlines()[0]
    assert header == "n_zero,Y,psi_exact,psi_gauss,psi_chain_even"
    summary = (tmp_path / "out" / "ground_summary.csv").read_text().splitlines()
    assert summary[1].endswith(",true")


def test_stationary_report(tmp_path):
    text = "N = 20\nstate.kind = coherent\nstate.populations = 0.25, 0.5, 0.25\ntime.steps = 8\n"
    assert run(tmp_path, "stationary", text) == 0
    assert "stationary = yes" in (tmp_path / "out" / "stationary_report.txt").read_text()


def test_validate(tmp_path):
    assert run(tmp_path, "validate", "validate.max_n = 4\nvalidate.draws = 3\n", "o", "--seed", "7") == 0
    assert "checks passed" in (tmp_path / "o" / "validate_report.txt").read_text()


def test_emit_plot_script(tmp_path):
    csv = tmp_path / "s.csv"
    csv.write_text("t,xi_phi_min,phi_min\n0,1,2\n")
    script = emit_plot_script(csv, ["xi_phi_min", "phi_min"])
    text = script.read_text()
    assert "multiplot layout 2,1" in text and "using 1:3" in text
    from spinorsim.config import ConfigError
    with pytest.raises(ConfigError):
        emit_plot_script(csv, ["xi_uv_min"])
