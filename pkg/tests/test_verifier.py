import json
from pathlib import Path

import pytest
from jsonschema import validate

from modules.config import SUITES, load_config, parse_config
from modules.errors import FamilyHypothesisError
from modules.verifier import (
    REPORT_SCHEMA,
    SUITE_REGISTRY,
    Check,
    Report,
    SuiteReport,
    applicable_suites,
    run_suite,
    run_suites,
)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def _quantum(max_degree=0):
    return parse_config({
        "algebra": {"kind": "quantum_affine", "variables": 2, "qmatrix": [["1", "2"], ["1/2", "1"]]},
        "skew": {"u": "0", "alpha": "scaling", "alpha_factors": ["q", "q"]},
        "window": {"weights": [0], "max_index": 1, "max_degree": max_degree, "max_tensor": 3},
    }, "quantum.cfg")


def _shift_const(max_degree=2):
    return parse_config({
        "skew": {"u": "3", "alpha": "translation", "lambda": "1"},
        "window": {"weights": [0], "max_index": 2, "max_degree": max_degree, "max_tensor": 3},
        "run": {"family": "W"},
    }, "shift.cfg")


@pytest.fixture
def usl2_config(scenarios):
    return load_config(scenarios / "usl2.cfg")


def test_every_suite_is_registered():
    assert set(SUITE_REGISTRY) == set(SUITES)


def test_applicable_suites(usl2_config):
    names = applicable_suites(usl2_config.build_spec())
    assert "thm-2.2.8" in names and "lemma-2.2.7" in names
    assert "prop-2.2.2" not in names
    assert "cor-2.3.2" not in names
    assert names == [n for n in SUITES if n in names]
    assert "prop-2.2.2" in applicable_suites(_shift_const().build_spec())


@pytest.mark.parametrize("name", ["casimir", "lemma-1.3", "lemma-2.2.3", "lemma-2.2.5", "lemma-2.2.7"])
def test_identity_suites_pass_for_usl2(usl2_config, name):
    report = run_suite(name, usl2_config)
    assert report.status == "pass", report.failures()


def test_twisted_exactness_for_usl2(usl2_config):
    report = run_suite("x-twisted-exactness", usl2_config)
    assert report.status == "pass"
    assert len(report.checks) == 10


def test_constant_u_profile():
    report = run_suite("prop-2.2.2", _shift_const())
    assert all(check.passed for check in report.checks)
    assert report.checks[0].computed == (3, 6, 7, 4)


def test_monomial_counts_on_the_quantum_plane():
    report = run_suite("thm-2.1.1", _quantum())
    assert report.status == "pass"
    assert report.checks[0].expected == (2, 4, 2, 0)
    assert not report.notes


def test_positive_degree_surplus_is_noted():
    report = run_suite("thm-2.1.1", _quantum(max_degree=1))
    assert report.status == "pass"
    assert any("coefficients of positive degree" in note for note in report.notes)


def test_reduced_complex_suites():
    config = _quantum()
    assert run_suite("cor-1.8", config).status == "pass"
    assert run_suite("thm-1.7-reduction", config).status == "pass"


def test_hypothesis_mismatch_raises():
    with pytest.raises(FamilyHypothesisError) as excinfo:
        run_suite("thm-2.2.8", _shift_const())
    assert "u not in k" in str(excinfo.value)
    with pytest.raises(ValueError):
        run_suite("no-such-suite", _shift_const())


def test_statuses():
    assert SuiteReport("casimir").status == "fail"
    assert SuiteReport("casimir", [Check("a", True)]).status == "pass"
    assert SuiteReport("casimir", [Check("a", True, certified=False)]).status == "uncertified"
    assert SuiteReport("casimir", [Check("a", False), Check("b", True, certified=False)]).status == "fail"
    assert Report("empty", 0).status == "fail"
    mixed = Report("mixed", 0, [SuiteReport("casimir", [Check("a", True)]),
                                SuiteReport("lemma-1.3", [Check("b", True, certified=False)])])
    assert mixed.status == "uncertified"
    assert not mixed.passed


def test_report_json_follows_the_schema(usl2_config):
    report = run_suites(usl2_config, ["casimir", "lemma-2.2.5"])
    data = json.loads(report.to_json(timings=True))
    validate(data, REPORT_SCHEMA)
    assert data["scenario"] == "usl2"
    assert data["status"] == "pass"
    assert [s["name"] for s in data["suites"]] == ["casimir", "lemma-2.2.5"]
    assert "seconds" in data["suites"][0]


def test_table_lists_failures():
    failing = SuiteReport("casimir", [Check("z x = p x z", False, 1, 2, "witness here")])
    text = Report("broken", 3, [failing]).table()
    assert text.startswith("scenario broken (seed 3): fail")
    assert "witness here" in text


def test_configured_suites_run_by_default():
    config = _shift_const().with_run(suites=["casimir"])
    report = run_suites(config)
    assert [s.name for s in report.suites] == ["casimir"]


def _laurent():
    return parse_config({
        "algebra": {"kind": "laurent"},
        "skew": {"u": "t - t^-1", "alpha": "scaling", "alpha_factors": ["q"]},
        "window": {"weights": [0], "max_index": 1, "max_degree": 1, "min_degree": -1, "max_tensor": 1},
        "run": {"family": "Wtilde"},
    }, "laurent.cfg")


def _shrunk(config):
    w = config.window
    window = w.model_copy(update={
        "weights": w.weights[:1], "max_index": min(w.max_index, 1), "max_degree": min(w.max_degree, 1),
        "min_degree": max(w.min_degree, -1), "max_tensor": min(w.max_tensor, 2),
    })
    return config.model_copy(update={"window": window})


def test_constant_u_scenario(scenarios):
    report = run_suite("prop-2.2.2", load_config(scenarios / "shift_const.cfg"))
    assert all(check.passed for check in report.checks)
    assert report.checks[0].computed == (5, 10, 11, 6)


@pytest.mark.parametrize("config", [_quantum(), _laurent()], ids=["quantum plane", "laurent"])
def test_square_zero_suite(config):
    report = run_suite("square-zero", config)
    assert report.status == "pass", report.failures()
    assert any("basis elements checked" in note for note in report.notes)


def test_square_zero_on_the_shipped_polynomial_window(scenarios):
    config = load_config(scenarios / "squarezero_kt.cfg")
    assert config.run.suites == ["square-zero"]
    assert run_suite("square-zero", config).status == "pass"


def test_laurent_suites():
    config = _laurent()
    assert run_suite("prop-2.3.1-chainmap", config).status == "pass"
    report = run_suite("cor-2.3.2", config)
    assert report.checks
    assert all(check.passed for check in report.checks)


def test_bar_oracle_on_the_quantum_plane():
    report = run_suite("bar-oracle", _quantum())
    assert report.status == "pass", report.failures()


@pytest.mark.parametrize("path", sorted(SCENARIOS.glob("*.cfg")), ids=lambda p: p.stem)
def test_shipped_scenarios(path):
    config = load_config(path)
    assert config.name == path.stem
    assert config.run.suites
    assert set(config.run.suites) <= set(applicable_suites(config.build_spec()))
    report = run_suite(config.run.suites[0], _shrunk(config))
    assert report.status == "pass", report.failures()
