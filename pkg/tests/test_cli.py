import json

import pytest
from click.testing import CliRunner

from e0struct.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write_desc(tmp_path, desc, name="curve.json"):
    path = tmp_path / name
    path.write_text(json.dumps(desc))
    return str(path)


E5_DESC = {"p": 5, "field": {"kind": "unramified", "n": 1},
           "a": [0, 20, -5, -15, 0], "precision": 12}
E2_DESC = {"p": 2, "field": {"kind": "unramified", "n": 1},
           "a": [0, 0, 2, 0, -2], "precision": 12}
RAM_DESC = {"p": 2, "field": {"kind": "eisenstein", "poly": [-2, 0, 1]},
            "a": [0, 0, 2, 0, -2], "precision": 12}


def test_classify_text(runner, tmp_path):
    res = runner.invoke(main, ["classify", write_desc(tmp_path, E5_DESC)])
    assert res.exit_code == 0
    assert res.output == "Z_5 x Z/5Z, method: corollary-iii, certified\n"


def test_classify_json_deterministic(runner, tmp_path):
    path = write_desc(tmp_path, E5_DESC)
    outputs = {runner.invoke(main, ["classify", path, "--json"]).output
               for _ in range(3)}
    assert len(outputs) == 1
    payload = json.loads(outputs.pop())
    assert payload["structure"] == {"free_rank": 1, "torsion": [5]}
    assert payload["method"] == "corollary-iii"
    assert payload["certified"] is True


def test_classify_stdin(runner):
    res = runner.invoke(main, ["classify", "-"], input=json.dumps(E5_DESC))
    assert res.exit_code == 0
    assert res.output.startswith("Z_5 x Z/5Z")


def test_classify_exploratory_exit_code(runner, tmp_path):
    res = runner.invoke(main, ["classify", write_desc(tmp_path, RAM_DESC)])
    assert res.exit_code == 2
    assert "ramified-exploratory, exploratory" in res.output


def test_classify_rejects_multiplicative(runner, tmp_path):
    desc = {"p": 5, "field": {"kind": "unramified", "n": 1},
            "a": [0, 1, 0, 0, 5], "precision": 12}
    res = runner.invoke(main, ["classify", write_desc(tmp_path, desc)])
    assert res.exit_code == 1
    assert "reduction type: multiplicative (additive required)" in res.stderr


def test_classify_schema_error(runner, tmp_path):
    desc = {"p": 5, "field": {"kind": "unramified", "n": 1},
            "a": [0, 0, 0, 0], "precision": 12}
    res = runner.invoke(main, ["classify", write_desc(tmp_path, desc)])
    assert res.exit_code == 1
    assert "descriptor schema" in res.stderr


def test_classify_nonprime_p(runner, tmp_path):
    desc = {"p": 4, "field": {"kind": "unramified", "n": 1},
            "a": [0, 0, 0, 0, 4], "precision": 12}
    res = runner.invoke(main, ["classify", write_desc(tmp_path, desc)])
    assert res.exit_code == 1
    assert "not prime" in res.stderr


def test_normalize(runner, tmp_path):
    res = runner.invoke(main, ["normalize", write_desc(tmp_path, E5_DESC)])
    assert res.exit_code == 0
    assert res.output.startswith("normalized a-invariants")
    assert "transform (r, s, t):" in res.output


def test_formal_group_command(runner):
    res = runner.invoke(main, ["formal-group", "--p", "5", "--n-series", "5"])
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0].startswith(
        "F(X, Y) = X + Y - a1*X*Y - a2*X^2*Y - a2*X*Y^2")
    assert lines[1].startswith("[5](T) = 5*T - 10*a1*T^2")
    assert lines[-1] == "g = T - (3*a4/5)~ * T^5"


def test_formal_group_degree_cap(runner):
    res = runner.invoke(main, ["formal-group", "--p", "3", "--degree", "99"])
    assert res.exit_code == 1


def test_verify_point(runner, tmp_path):
    desc = dict(E2_DESC, points=[{"x": 1, "y": -1}, "infinity"])
    res = runner.invoke(main, ["verify-point", write_desc(tmp_path, desc)])
    assert res.exit_code == 0
    assert res.output == "in E_0, level 0, 2-torsion\ninfinity: identity\n"


def test_verify_point_infinite_order(runner, tmp_path):
    desc = {"p": 2, "field": {"kind": "unramified", "n": 1},
            "a": [0, 0, 0, 0, -2], "precision": 12,
            "points": [{"x": 3, "y": 5}]}
    res = runner.invoke(main, ["verify-point", write_desc(tmp_path, desc)])
    assert res.exit_code == 0
    assert res.output == "in E_0, level 0, infinite order (group is Z_2)\n"


def test_verify_point_singular(runner, tmp_path):
    desc = {"p": 2, "field": {"kind": "unramified", "n": 1},
            "a": [0, -6, 0, 8, 0], "precision": 12,
            "points": [{"x": 0, "y": 0}]}
    res = runner.invoke(main, ["verify-point", write_desc(tmp_path, desc)])
    assert res.exit_code == 0
    assert res.output == "not in E_0 (reduces to singular point)\n"


def test_verify_point_off_curve(runner, tmp_path):
    desc = dict(E2_DESC, points=[{"x": 1, "y": 1}])
    res = runner.invoke(main, ["verify-point", write_desc(tmp_path, desc)])
    assert res.exit_code == 1
    assert "not on curve" in res.stderr


def test_oracle_command(runner, tmp_path):
    res = runner.invoke(
        main, ["oracle", write_desc(tmp_path, E5_DESC), "-m", "3"])
    assert res.exit_code == 0
    assert res.output == "order 125, p_rank 2, kernel 25: pass\n"


def test_oracle_json(runner, tmp_path):
    res = runner.invoke(
        main, ["oracle", write_desc(tmp_path, E2_DESC), "-m", "4", "--json"])
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["verdict"] == "pass"
    assert payload["order"] == 16 and payload["kernel_size"] == 4


def test_rational_string_coefficients(runner, tmp_path):
    # "n/d" strings and coefficient vectors are accepted
    desc = {"p": 5, "field": {"kind": "unramified", "n": 1},
            "a": ["0", "100/5", "-5", "-15", 0], "precision": 12}
    res = runner.invoke(main, ["classify", write_desc(tmp_path, desc)])
    assert res.exit_code == 0
    assert res.output.startswith("Z_5 x Z/5Z")
