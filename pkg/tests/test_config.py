import pytest

from modules.config import ScenarioConfig, load_config, parse_config
from modules.errors import ConfigError, NotationError
from modules.notation import parse_a_element
from modules.windows import Margin, Window


def _shift(**window):
    return {
        "algebra": {"kind": "polynomial"},
        "skew": {"u": "3", "alpha": "translation", "lambda": "1"},
        "window": {"weights": [0], "max_index": 2, "max_degree": 2, "max_tensor": 3, **window},
        "run": {"family": "W"},
    }


def test_every_shipped_scenario_loads(scenarios):
    files = sorted(scenarios.glob("*.cfg"))
    assert len(files) >= 5
    for path in files:
        config = load_config(path)
        assert isinstance(config, ScenarioConfig)
        assert config.name == path.stem
        config.build_spec()


def test_usl2_scenario(scenarios, polynomial):
    config = load_config(scenarios / "usl2.cfg")
    spec = config.build_spec()
    assert spec.alpha.is_shift and spec.alpha.shift == 2
    assert spec.u == parse_a_element("-(t-1)^2/4", polynomial)
    assert config.run.family == "W"
    assert config.build_window() == Window((0,), 3, 8, 0, 2)


def test_quantum_scenario_reads_its_matrix(scenarios):
    spec = load_config(scenarios / "qaffine_u0.cfg").build_spec()
    assert spec.base.variables == 2
    assert not spec.u


def test_source_names_the_scenario():
    assert parse_config(_shift(), "somewhere/shift.cfg").name == "shift"


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")
    broken = tmp_path / "broken.cfg"
    broken.write_text("[algebra\nkind = ")
    with pytest.raises(ConfigError):
        load_config(broken)


@pytest.mark.parametrize("data", [
    {"algebra": {"kind": "polynomial", "colour": "red"}},
    {"skew": {"alpha": "translation"}},
    {"skew": {"gamma": "translation", "lambda": "1"}},
    {"algebra": {"kind": "laurent", "variables": 2}},
    {"run": {"suites": ["no-such-suite"]}},
    {"run": {"format": "xml"}},
    {"parameters": {"p": "0"}},
    {"skew": {"u": "t", "gamma": "scaling", "gamma_factors": ["2"]}},
])
def test_invalid_scenarios_raise_config_errors(data):
    with pytest.raises(ConfigError):
        parse_config(data)


def test_notation_errors_keep_their_position():
    with pytest.raises(NotationError) as excinfo:
        parse_config({"skew": {"u": "t^-1"}})
    assert excinfo.value.text == "t^-1"


def test_with_run_overrides():
    config = parse_config(_shift())
    assert config.with_run(seed=None) is config
    changed = config.with_run(format="json", seed=7)
    assert changed.run.format == "json" and changed.run.seed == 7
    assert config.run.format == "table"
    with pytest.raises(ValueError):
        config.with_run(variant="sideways")


def test_margin_falls_back_to_the_family_minimum():
    minimum = Margin(1, 0, 0)
    assert parse_config(_shift()).build_margin(minimum) == minimum
    assert parse_config(_shift(margin_degree=2)).build_margin(minimum) == Margin(1, 2, 0)


def test_resource_caps_come_from_the_environment(monkeypatch):
    monkeypatch.setenv("SKEWHH_MAX_BASIS", "123")
    monkeypatch.setenv("SKEWHH_JOBS", "2")
    run = parse_config(_shift()).run
    assert run.max_basis == 123
    assert run.jobs == 2


def test_bad_environment_value(monkeypatch):
    monkeypatch.setenv("SKEWHH_MAX_ENTRIES", "lots")
    with pytest.raises(ConfigError):
        parse_config(_shift())
