import json
import math
import subprocess
import sys

import numpy as np
import pytest

from trimcusum.cli import DataError, load_series, main


@pytest.fixture
def hand_csv(tmp_path, hand_sample):
    path = tmp_path / "series.csv"
    path.write_text("".join(f"{v}\n" for v in hand_sample))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_load_series_plain(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1.0\n-2.5\n0.0\n3\n")
    np.testing.assert_array_equal(load_series(str(path)), [1.0, -2.5, 0.0, 3.0])


def test_load_series_header_skip(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("value\n1\n2\n3\n4\n")
    np.testing.assert_array_equal(load_series(str(path)), [1.0, 2.0, 3.0, 4.0])


def test_load_series_scientific_notation(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1e-3\n-2.5E2\n0.0\n3\n")
    np.testing.assert_array_equal(load_series(str(path)), [0.001, -250.0, 0.0, 3.0])


def test_load_series_error_line_number(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1\nabc\n")
    with pytest.raises(DataError, match="line 2"):
        load_series(str(path))


def test_load_series_rejects_nan(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1\n2\nnan\n4\n")
    with pytest.raises(DataError, match="line 3"):
        load_series(str(path))


def test_load_series_too_short(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1\n2\n3\n")
    with pytest.raises(DataError, match="at least 4"):
        load_series(str(path))


def test_load_series_missing_file():
    with pytest.raises(DataError):
        load_series("/nonexistent/series.csv")


def test_test_subcommand_hand_sample(capsys, hand_csv):
    code, out, err = run_cli(capsys, "test", "--input", hand_csv, "--d", "2")
    assert code == 0
    report = json.loads(out)
    assert report["statistic"] == pytest.approx(0.65754, abs=1e-5)
    assert report["critical_value_asymptotic"] == pytest.approx(1.3581, abs=5e-4)
    assert report["reject"] is False
    assert report["change_at"] == 1
    assert report["method"] == "asymptotic"
    assert report["config"]["subcommand"] == "test"


def test_test_subcommand_resampled(capsys, hand_csv):
    code, out, _ = run_cli(
        capsys, "test", "--input", hand_csv, "--d", "2", "--resample-B", "50", "--seed", "1"
    )
    report = json.loads(out)
    assert report["method"] == "resampled"
    assert report["critical_value_resampled"] is not None
    assert code in (0, 1)
    assert report["reject"] is (code == 1)


def test_test_subcommand_rejects_large_shift(capsys, tmp_path):
    rng = np.random.default_rng(0)
    x = rng.standard_normal(200)
    x[100:] += 5.0
    path = tmp_path / "shift.csv"
    path.write_text("".join(f"{v}\n" for v in x))
    code, out, _ = run_cli(capsys, "test", "--input", str(path))
    report = json.loads(out)
    assert code == 1
    assert report["reject"] is True
    assert abs(report["change_at"] - 100) <= 10


def test_test_subcommand_degenerate_is_data_error(capsys, tmp_path):
    path = tmp_path / "flat.csv"
    path.write_text("2\n2\n2\n2\n2\n")
    code, out, err = run_cli(capsys, "test", "--input", str(path), "--d", "2")
    assert code == 3
    assert "identical" in err


def test_test_subcommand_bad_depth(capsys, hand_csv):
    code, _, err = run_cli(capsys, "test", "--input", hand_csv, "--d", "1")
    assert code == 2
    code, _, err = run_cli(capsys, "test", "--input", hand_csv, "--d", "5")
    assert code == 2


def test_quantile_prints_tabulated_value(capsys):
    code, out, _ = run_cli(capsys, "quantile", "--level", "0.95")
    assert code == 0
    assert out == "1.3581\n"


def test_quantile_json(capsys):
    code, out, _ = run_cli(capsys, "quantile", "--level", "0.95", "--format", "json")
    doc = json.loads(out)
    assert doc["quantile"] == pytest.approx(1.3581, abs=5e-4)
    assert doc["config"]["level"] == 0.95


def test_quantile_bad_level(capsys):
    code, _, err = run_cli(capsys, "quantile", "--level", "1.5")
    assert code == 2


def test_simulate_deterministic_output(capsys):
    args = ("simulate", "--n", "20,40", "--reps", "50", "--seed", "3")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.strip().split("\n")
    assert lines[0] == "n,critical_value"
    assert len(lines) == 4
    assert lines[-1].startswith("inf,")


def test_simulate_json_format(capsys):
    code, out, _ = run_cli(
        capsys, "simulate", "--n", "20", "--reps", "20", "--format", "json"
    )
    doc = json.loads(out)
    assert doc["config"]["subcommand"] == "simulate"
    assert doc["table"][-1][0] == "inf"


def test_power_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "power", "--n", "20", "--reps", "10", "--seed", "2"
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "shift,power"
    assert len(lines) == 62  # 61 default grid points
    rates = [float(line.split(",")[1]) for line in lines[1:]]
    assert all(0.0 <= r <= 1.0 for r in rates)


def test_resample_subcommand(capsys, hand_csv):
    code, out, _ = run_cli(
        capsys, "resample", "--input", hand_csv, "--d", "2", "--reps", "40", "--mode", "bootstrap"
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "value,level,B,standard_error"
    value = float(lines[1].split(",")[0])
    assert value > 0.0


def test_diagnose_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "diagnose", "--n", "500", "--reps", "20", "--seed", "1"
    )
    assert code == 0
    doc = json.loads(out)
    assert "centering" in doc and "gap_medians" in doc
    assert doc["gap_medians"]["uncentered"] >= 0.0


def test_output_file(capsys, tmp_path, hand_csv):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys, "test", "--input", hand_csv, "--d", "2", "--output", str(out_path)
    )
    assert code == 0
    assert out == ""
    report = json.loads(out_path.read_text())
    assert report["statistic"] == pytest.approx(0.65754, abs=1e-5)


def test_missing_input_is_data_error(capsys):
    code, _, err = run_cli(capsys, "test", "--input", "/nonexistent.csv")
    assert code == 3


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2


def test_workers_env_override(capsys, monkeypatch):
    monkeypatch.setenv("TRIMCUSUM_WORKERS", "not-a-number")
    code, _, err = run_cli(capsys, "simulate", "--n", "20", "--reps", "10")
    assert code == 2
    monkeypatch.setenv("TRIMCUSUM_WORKERS", "2")
    code, out, _ = run_cli(capsys, "simulate", "--n", "20", "--reps", "10")
    assert code == 0


def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "trimcusum.cli", "quantile", "--level", "0.95"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "1.3581\n"
