import json

import pytest
from click.testing import CliRunner

from modules.cli import main, skewhh

QUANTUM_PLANE = """
name = "tiny_plane"

[algebra]
kind = "quantum_affine"
variables = 2
qmatrix = [["1", "2"], ["1/2", "1"]]

[skew]
u = "0"
alpha = "scaling"
alpha_factors = ["q", "q"]

[window]
weights = [0]
max_index = 1
max_degree = 0
max_tensor = 3
"""


SMALL_USL2 = """
name = "small_usl2"

[skew]
u = "-(t-1)^2/4"
alpha = "translation"
lambda = "2"

[window]
weights = [0]
max_index = 1
max_degree = 1
max_tensor = 2
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def usl2_path(scenarios):
    return str(scenarios / "usl2.cfg")


@pytest.fixture
def plane_path(tmp_path):
    path = tmp_path / "tiny_plane.cfg"
    path.write_text(QUANTUM_PLANE)
    return str(path)


def test_cycles_prints_v0(runner, usl2_path):
    result = runner.invoke(skewhh, ["cycles", usl2_path, "--kind", "V", "--n", "0"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "x^0y^0 e1e2"


def test_cycles_as_json(runner, usl2_path):
    result = runner.invoke(skewhh, ["cycles", usl2_path, "--kind", "U", "--n", "1", "--j", "1", "--format", "json"])
    assert result.exit_code == 0
    assert json.loads(result.stdout) == {"kind": "U", "n": 1, "j": 1, "value": "1"}


def test_verify_passes(runner, usl2_path):
    result = runner.invoke(skewhh, ["verify", usl2_path, "--suite", "casimir"])
    assert result.exit_code == 0
    assert "scenario usl2 (seed 0): pass" in result.stdout


def test_verify_json(runner, usl2_path):
    result = runner.invoke(skewhh, ["verify", usl2_path, "--suite", "casimir", "--format", "json", "--timings"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["status"] == "pass"
    assert data["suites"][0]["name"] == "casimir"


def test_hypothesis_errors_are_usage_errors(runner, scenarios):
    result = runner.invoke(skewhh, ["verify", str(scenarios / "shift_const.cfg"), "--suite", "thm-2.2.8"])
    assert result.exit_code == 2
    assert "hypothesis violated" in result.stderr


def test_homology_table(runner, plane_path):
    result = runner.invoke(skewhh, ["homology", plane_path])
    assert result.exit_code == 0
    header, row = result.stdout.strip().splitlines()[:2]
    assert header.split() == ["weight", "H0", "H1", "H2", "H3"]
    assert row.split() == ["0", "2", "4", "2", "0"]


def test_homology_single_position(runner, plane_path):
    result = runner.invoke(skewhh, ["homology", plane_path, "--position", "1"])
    assert result.exit_code == 0
    assert result.stdout.strip().splitlines()[-1].split() == ["0", "4"]


def test_homology_json(runner, plane_path):
    result = runner.invoke(skewhh, ["homology", plane_path, "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["family"] == "Y"
    assert data["variant"] == "statement"


@pytest.mark.parametrize("args", [
    ["homology", "{plane}", "--margin", "1,2"],
    ["homology", "{plane}", "--margin", "a"],
    ["homology", "{plane}", "--family", "X"],
    ["verify", "{plane}", "--suite", "no-such-suite"],
    ["cycles", "{plane}", "--kind", "V", "--n", "0"],
])
def test_usage_errors_exit_with_two(runner, plane_path, args):
    args = [a.format(plane=plane_path) for a in args]
    assert runner.invoke(skewhh, args).exit_code == 2


def test_missing_scenario(runner, tmp_path):
    assert runner.invoke(skewhh, ["verify", str(tmp_path / "absent.cfg")]).exit_code == 2


def test_main_returns_the_exit_code(usl2_path, tmp_path):
    assert main(["cycles", usl2_path, "--kind", "V", "--n", "0"]) == 0
    assert main(["verify", str(tmp_path / "absent.cfg")]) == 2


def test_homology_row_route_on_a_windowed_slice(runner, tmp_path):
    path = tmp_path / "small_usl2.cfg"
    path.write_text(SMALL_USL2)
    result = runner.invoke(skewhh, ["homology", str(path), "--family", "Y", "--route", "row_then_vertical",
                                    "--format", "json"])
    assert result.exit_code in (0, 1), result.stderr
    data = json.loads(result.stdout)
    assert data["route"] == "row_then_vertical"
    assert all("rank_phi_sum" in block["rows"] for block in data["blocks"])
