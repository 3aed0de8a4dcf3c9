import math

import pytest

from spinorsim.config import ConfigError, build, parse_text


def test_parse_arithmetic_and_comments():
    values = parse_text("# run\nN = 100\nstate.P0 = 1/3\nstate.theta = pi/2  # half turn\n")
    assert values == {"N": 100, "state.P0": pytest.approx(1 / 3), "state.theta": pytest.approx(math.pi / 2)}


def test_triples():
    values = parse_text("state.occupation = 25, 50, 25\nstate.populations = 0.25, 0.5, 0.25")
    assert values["state.occupation"] == (25, 50, 25)


@pytest.mark.parametrize("text,key", [
    ("bogus = 1", "bogus"),
    ("N = 3\nN = 4", "N"),
    ("N = 2.5", "N"),
    ("outputs.emit_plot_script = maybe", "outputs.emit_plot_script"),
    ("N = __import__('os')", "N"),
])
def test_parse_errors_name_the_key(text, key):
    with pytest.raises(ConfigError) as info:
        parse_text(text)
    assert info.value.key == key


@pytest.mark.parametrize("text,command,key", [
    ("ground.m = 0", "ground", "N"),
    ("N = 4\nground.m = 5", "ground", "ground.m"),
    ("N = 4\nstate.kind = fock\nstate.occupation = 1, 1, 1", "evolve", "state.occupation"),
    ("N = 4\nstate.kind = angular\nstate.l = 3\nstate.m = 0", "evolve", "state.l"),
    ("N = 4\nstate.kind = coherent\nstate.populations = 0.5, 0.5, 0.5", "evolve", "state.populations"),
    ("N = 4\nstate.kind = fock\nstate.occupation = 0, 4, 0", "stationary", "state.kind"),
    ("N = 4\nstate.kind = fock\nstate.occupation = 0, 4, 0\ntime.steps = 0", "evolve", "time.steps"),
    ("validate.max_n = 40", "validate", "validate.max_n"),
])
def test_semantic_errors(text, command, key):
    with pytest.raises(ConfigError) as info:
        build(parse_text(text), command)
    assert info.value.key == key


def test_coherent_from_p0():
    cfg = build(parse_text("N = 100\nstate.kind = coherent\nstate.P0 = 1/3\nstate.theta = pi/2"), "evolve")
    assert cfg.state.P0 == pytest.approx(1 / 3)
    assert cfg.steps == 512 and cfg.t_stop == pytest.approx(math.pi)
