import json
import math

import pytest

from cli import build_parser, main
from utils.export import read_csv


def run(tmp_path, *argv):
    return main(["--out", str(tmp_path), *argv])


def test_tcurve_writes_profile(tmp_path, capsys):
    assert run(tmp_path, "--curve", "identity", "tcurve", "--radii", "1,2") == 0
    df = read_csv(tmp_path / "tcurve" / "profile.csv")
    assert df["T"].tolist() == pytest.approx([0.5 * math.log(2), 0.5 * math.log(5)], abs=1e-9)
    assert (tmp_path / "tcurve" / "profile.figure.json").is_file()
    report = json.loads((tmp_path / "tcurve" / "tcurve.json").read_text())
    assert report["report"]["passed"] is True
    assert report["config"]["curve"] == "identity"
    assert capsys.readouterr().out.startswith("PASS")


def test_zeros_of_exp_minus_one(tmp_path):
    assert run(tmp_path, "--curve", "exp", "zeros", "--r", "7") == 0
    report = json.loads((tmp_path / "zeros" / "zeros.json").read_text())["report"]
    assert report["total"] == 3


def test_identical_runs_write_identical_files(tmp_path):
    argv = ["--curve", "line", "cover", "--alpha", "0.5"]
    assert run(tmp_path, *argv) == 0
    first = {name: (tmp_path / "cover" / name).read_bytes() for name in ("disks.csv", "cover.json")}
    assert run(tmp_path, *argv) == 0
    for name, data in first.items():
        assert (tmp_path / "cover" / name).read_bytes() == data


def test_missing_curve_is_a_config_error(tmp_path, capsys):
    assert run(tmp_path, "--curve", "no_such_curve", "tcurve") == 2
    assert "ConfigError" in capsys.readouterr().err


def test_malformed_curve_is_a_config_error(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('kind = "affine"\ncomponents = ["1/z"]\n')
    assert run(tmp_path, "--curve", str(bad), "tcurve") == 2


def test_bad_tolerance(tmp_path):
    assert run(tmp_path, "--curve", "identity", "--tol", "-1", "tcurve") == 2


def test_usage_error_exits_with_input_code():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["tcurve", "--radii", "one,two"])
    assert exc.value.code == 2


def test_unknown_config_key(tmp_path):
    config = tmp_path / "run.toml"
    config.write_text('curve = "identity"\n[tcurve]\nradius = 1\n')
    assert run(tmp_path, "--config", str(config), "tcurve") == 2


def test_property_violation_exits_with_one(tmp_path):
    config = tmp_path / "run.toml"
    config.write_text('curve = "exp"\ntol = 1e-6\n[tcurve]\nradii = [0.5, 1]\ncross_check = true\ncross_tol = 0.0\n')
    assert run(tmp_path, "--config", str(config), "tcurve") == 1
    assert (tmp_path / "tcurve" / "profile.csv").is_file()


def test_suite_small_diameter_check(tmp_path):
    assert run(tmp_path, "suite", "--only", "small_diameter_vanishing") == 0
    report = json.loads((tmp_path / "suite" / "suite.json").read_text())["report"]
    (check,) = report["checks"]
    assert check["status"] == "pass"
    assert "nodes 1/2 and 1/3" in check["detail"]
    assert math.isnan(read_csv(tmp_path / "suite" / "suite.csv")["seconds"][0])


@pytest.mark.slow
def test_full_suite_passes(tmp_path, capsys):
    assert run(tmp_path, "suite") == 0
    report = json.loads((tmp_path / "suite" / "suite.json").read_text())["report"]
    assert len(report["checks"]) == 12
    assert report["failed"] == []
    assert all(check["status"] == "pass" for check in report["checks"])
    assert (tmp_path / "suite" / "suite.docx").read_bytes()[:2] == b"PK"
    assert capsys.readouterr().out.count("PASS") >= 12
