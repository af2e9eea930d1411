import json

import pytest
from click.testing import CliRunner

from toric_periods import acceptance, cli
from toric_periods.acceptance import CriterionResult


def run(args, tmp_path=None, config=None):
    if config is not None:
        path = tmp_path / "run.toml"
        path.write_text(config)
        args = [*args, "--config", str(path)]
    return CliRunner().invoke(cli.main, args)


def test_epsilon_command(tmp_path):
    res = run(["epsilon"], tmp_path, '[E]\nkind = "ramified"\n')
    assert res.exit_code == 0
    assert json.loads(res.output)["result"]["epsilon"] == -1


def test_integrate_reference(tmp_path):
    res = run(["integrate"], tmp_path, '[chi]\nb = "2/25"\n')
    assert res.exit_code == 0
    out = json.loads(res.output)["result"]
    assert out["predicted"] == ["1/6"] and out["match"] and out["all_phases_zero"]
    assert abs(out["brute"][0] - 1 / 6) < 1e-9


def test_output_is_deterministic(tmp_path):
    config = '[chi]\nb = "2/25"\n'
    first = run(["integrate"], tmp_path, config).output
    assert run(["integrate"], tmp_path, config).output == first


def test_out_file_matches_stdout(tmp_path):
    target = tmp_path / "report.json"
    res = run(["conductor", "--out", str(target)])
    assert res.exit_code == 0
    assert json.loads(target.read_text()) == json.loads(res.output)


@pytest.mark.parametrize("config", [
    "[context]\np = 3\n",
    '[L]\nkind = "split"\n',
    "[run]\ncase = 9\n",
    "[bogus]\nx = 1\n",
    '[theta]\nb = "one half"\n',
    "[context\n",
])
def test_config_errors_exit_2(tmp_path, config):
    res = run(["conductor"], tmp_path, config)
    assert res.exit_code == 2


def test_missing_config_exits_2():
    assert run(["conductor", "--config", "/nonexistent/run.toml"]).exit_code == 2


def test_star_violation_exits_2(tmp_path):
    res = run(["integrate"], tmp_path, '[chi]\nb = "1/25"\n')
    assert res.exit_code == 2


def test_orbital_archimedean(tmp_path):
    res = run(["orbital"], tmp_path, "[run]\nk = 3\nm = 1\narch_xi = [-1]\n")
    assert res.exit_code == 0
    assert json.loads(res.output)["result"]["archimedean"] == [{"xi": "-1", "value": "1"}]


def test_verify_suite_failure_exits_3(monkeypatch):
    monkeypatch.setattr(acceptance, "run_suite",
                        lambda name: [CriterionResult(1, "stub", False, {})])
    res = run(["verify-suite", "quick"])
    assert res.exit_code == 3
    assert json.loads(res.output)["result"]["all_passed"] is False


def test_verify_suite_unknown_suite():
    assert run(["verify-suite", "nightly"]).exit_code == 2


def test_pretty_output():
    res = run(["conductor", "--pretty"])
    assert res.exit_code == 0
    assert res.output.startswith("command: conductor")
