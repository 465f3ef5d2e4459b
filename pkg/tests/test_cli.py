import json

import numpy as np
import pytest

from harmop.cli import CheckRecord, Report, RunConfig, emit, main, parse_report, run
from harmop.groups import symmetric_group
from harmop.functions import function_to_json, indicator_function, measure_to_json
from harmop.functions import Measure


def _strip_wall_time(text: str) -> dict:
    data = json.loads(text)
    data.pop("wall_time_s")
    return data


def test_verify_s3_with_sigma_file(tmp_path, capsys):
    s3 = symmetric_group(3)
    sigma = indicator_function(s3, (0, 3, 4))
    path = tmp_path / "indicator-A3.json"
    path.write_text(json.dumps(function_to_json(sigma)))
    code = main(["verify", "--group", "S3", "--sigma", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["failed"] == 0
    dims = [c for c in data["checks"] if c["name"].endswith("dimension")]
    assert dims and all(c["passed"] for c in dims)


def test_unknown_group_kind_is_usage_error(capsys):
    assert main(["verify", "--group", "foo"]) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["explode", "--group", "Z4"])
    assert err.value.code == 2


def test_broken_group_file_is_input_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x", "order": 2}')
    assert main(["verify", "--group", str(path)]) == 2


def test_group_file_input(tmp_path, capsys):
    s3 = symmetric_group(3)
    path = tmp_path / "s3.json"
    path.write_text(json.dumps(s3.to_json()))
    assert main(["verify", "--group", str(path), "--count", "2"]) == 0


def test_tolerance_echoed(capsys):
    assert main(["verify", "--group", "Z4", "--count", "1", "--tol", "1e-6"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["tol"] == 1e-6
    route_checks = [c for c in data["checks"] if c["name"].endswith("three_routes")]
    assert all(c["tolerance"] == 1e-6 for c in route_checks)


def test_json_deterministic_for_fixed_seed():
    config = RunConfig(command="support", group="S3", count=10, seed=42)
    first = _strip_wall_time(emit(run(config), "json"))
    second = _strip_wall_time(emit(run(config), "json"))
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_json_differs_for_other_seed():
    base = RunConfig(command="fixed-points", group="Z6", count=3, seed=1)
    other = RunConfig(command="fixed-points", group="Z6", count=3, seed=2)
    a = _strip_wall_time(emit(run(base), "json"))
    b = _strip_wall_time(emit(run(other), "json"))
    assert a["config"] != b["config"]


def test_report_round_trip():
    report = run(RunConfig(command="support", group="Z4", count=5))
    back = parse_report(emit(report, "json"))
    assert back == report


def test_empty_report_emits():
    report = Report(config={"command": "verify"}, checks=[], wall_time_s=0.0)
    assert json.loads(emit(report, "json"))["summary"]["total"] == 0
    assert "summary: 0/0" in emit(report, "markdown")


def test_markdown_one_row_per_check():
    report = run(RunConfig(command="verify", group="Z4", count=2, format="markdown"))
    text = emit(report, "markdown")
    rows = [line for line in text.splitlines() if line.startswith("| verify")]
    assert len(rows) == len(report.checks)
    for check, row in zip(report.checks, rows):
        assert check.statement in row


@pytest.mark.parametrize("command", ["verify", "support", "fixed-points", "ideals",
                                     "limit-product", "fuzz"])
def test_all_commands_pass_on_small_group(command, capsys):
    code = main([command, "--group", "Z4", "--count", "2", "--seed", "7"])
    capsys.readouterr()
    assert code == 0


def test_measure_file_input(tmp_path, capsys):
    from harmop.groups import cyclic_group

    mu = Measure(cyclic_group(4), [0.0, 0.5, 0.0, 0.5])
    path = tmp_path / "mu.json"
    path.write_text(json.dumps(measure_to_json(mu)))
    code = main(["fixed-points", "--group", "Z4", "--mu", str(path), "--count", "1"])
    capsys.readouterr()
    assert code == 0


def test_failed_check_gives_exit_one(capsys):
    # with no averaging budget the stopping rule cannot trigger, so each
    # limit-product check reports non-convergence and the run exits 1
    code = main(["limit-product", "--group", "Z4", "--max-n", "1", "--count", "1"])
    out = capsys.readouterr().out
    assert code == 1
    data = json.loads(out)
    assert data["summary"]["failed"] > 0


def test_check_record_fields():
    report = run(RunConfig(command="verify", group="Z4", count=1))
    for check in report.checks:
        assert isinstance(check, CheckRecord)
        assert check.name and check.statement
        assert isinstance(check.metric, float)
