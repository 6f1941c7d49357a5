import json
import math
import pytest
from app import App, build_parser
from experiment_framework import ExperimentFramework, format_value
from experiments.models import SweepSpec
from physics.scenario_files import fixture_path


def run(*argv):
    return App().run(list(argv))


def test_fixtures_command(capsys):
    assert run("fixtures", "--no-progress") == 0
    assert "ppt_blind_1" in capsys.readouterr().out.split()


def test_witness_command(capsys):
    assert run("witness", fixture_path("two_singlets")) == 0
    out = capsys.readouterr().out
    result = json.loads(out[out.index("{\n"):])
    assert result["nchsh"]["violated"]


def test_degrees_flag():
    args = build_parser().parse_args(["sweep3-depol", "--theta", "90", "--degrees", "--grid", "2"])
    assert App.spec_from_args(args).theta == pytest.approx(math.pi / 2)


def test_alpha_flag_repeats():
    args = build_parser().parse_args(["distance", "--alpha", "0.2", "--alpha", "0.4"])
    assert App.spec_from_args(args).alphas == [0.2, 0.4]


def test_json_report(tmp_path):
    out = tmp_path / "reports" / "depol.json"
    assert run("sweep3-depol", "--grid", "2", "--no-progress", "--out", str(out)) == 0
    report = json.loads(out.read_text())
    assert report["spec"]["kind"] == "3party-depolarizing"
    assert len(report["records"]) == 4
    assert report["version"]


def test_csv_matches_json(tmp_path):
    framework = ExperimentFramework(show_progress=False)
    report = framework.run(SweepSpec(kind="3party-amplitude", grid=2))
    path = tmp_path / "amp.csv"
    framework.write_report(report, str(path), "csv")
    rows = framework.read_csv(str(path))
    assert list(rows[0]) == report.columns
    for row, record in zip(rows, report.records):
        assert float(row["lhs"]) == record["lhs"]
        assert row["violated"] == format_value(record["violated"])


def test_invalid_input_exit_code():
    assert run("sweep3-depol", "--grid", "1", "--no-progress") == 1
    assert run("sweep3-amp", "--theta", "1.0", "--grid", "2", "--no-progress") == 1
    assert run("random-study", "--samples", "1", "--inject", "nonexistent", "--no-progress") == 1


def test_io_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("sweep3-depol", "--grid", "2", "--no-progress", "--out", str(blocker / "report.json")) == 3
    assert run("witness", str(tmp_path / "missing.json")) == 3


def test_format_value():
    assert format_value(True) == "true"
    assert format_value(0.1) == "0.10000000000000001"
    assert float(format_value(1 / 3)) == 1 / 3
    assert format_value(None) == ""


def test_usage_errors_exit_with_invalid_input_code():
    assert run("sweep3-depol", "--format", "xml") == 1
    assert run("sweep3-depol", "--grid", "x") == 1
    assert run() == 1
    assert run("no-such-command") == 1


def test_no_color_flag_reaches_framework():
    args = build_parser().parse_args(["fixtures", "--no-color"])
    assert args.no_color
    assert run("fixtures", "--no-progress", "--no-color") == 0
