"""Tests for the click command-line interface."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from src.analysis.regime import STATES
from src.analysis.scanner import WindowRecord
from src.cli.commands import cli, run_command
from src.data.reports import read_report
from src.estimation.grid import FitResult
from src.utils.config import Config

GRID_YAML = """\
grid:
  b_quad_range: [-1.0, 1.0, 0.1]
  b_nl_range: [-0.5, 0.5, 0.1]
  gamma_set: [2, 3]
  m_set: [2, 3, 4]
"""


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def grid_file(tmp_path) -> str:
    path = tmp_path / "grid.yaml"
    path.write_text(GRID_YAML)
    return str(path)


def _last_json(output: str) -> dict:
    return json.loads(output.strip().splitlines()[-1])


def test_simulate_is_reproducible(runner, tmp_path):
    outputs = [str(tmp_path / f"sim{i}.csv") for i in range(2)]
    for out in outputs:
        result = runner.invoke(cli, ["simulate", "--b-quad", "0.5", "--m", "4", "--sigma", "0.03",
                                     "--n", "2000", "--seed", "7", "--out", out])
        assert result.exit_code == 0, result.output
    assert open(outputs[0], "rb").read() == open(outputs[1], "rb").read()
    assert np.loadtxt(outputs[0]).size == 2004
    record = _last_json(result.output)
    assert record["record"] == "simulation"
    assert record["warmup"] == 4


def test_stability_prints_boundaries(runner):
    result = runner.invoke(cli, ["stability", "--m", "2"])
    assert result.exit_code == 0, result.output
    record = _last_json(result.output)
    assert record["b_low"] == pytest.approx(-2.0, abs=1e-6)
    assert record["b_high"] == pytest.approx(2.0, abs=1e-6)


def test_scan_writes_one_record_per_window(runner, tmp_path, grid_file):
    prices = str(tmp_path / "prices.csv")
    runner.invoke(cli, ["simulate", "--b-quad", "0.5", "--m", "3", "--sigma", "0.05",
                        "--n", "1197", "--seed", "1", "--out", prices])
    report = str(tmp_path / "scan.jsonl")
    result = runner.invoke(cli, ["scan", "--input", prices, "--window", "400", "--step", "200",
                                 "--grid-spec", grid_file, "--out", report,
                                 "--plot-dir", str(tmp_path / "plots")])
    assert result.exit_code == 0, result.output
    header, records = read_report(report)
    assert header["command"] == "scan"
    assert header["config"]["window"] == 400
    assert header["config"]["grid"]["m_set"] == [2, 3, 4]
    windows = [record for record in records if isinstance(record, WindowRecord)]
    assert len(windows) == 5
    for window in windows:
        assert window.fit is not None
        assert window.regime.state in STATES
    assert records[-1]["record"] == "summary"
    assert np.loadtxt(tmp_path / "plots" / "scan_b_quad.dat").shape == (5, 2)


def test_fit_and_classify(runner, tmp_path, grid_file, random_walk_file):
    report = str(tmp_path / "fit.jsonl")
    result = runner.invoke(cli, ["fit", "--input", random_walk_file, "--grid-spec", grid_file,
                                 "--criterion", "bic", "--out", report,
                                 "--plot-dir", str(tmp_path / "plots")])
    assert result.exit_code == 0, result.output
    _, records = read_report(report)
    assert len(records) == 3
    assert all(isinstance(record, FitResult) for record in records)
    assert sum(record.selected for record in records) == 1
    assert all(record.criterion == "bic" for record in records)
    assert (tmp_path / "plots" / "moving_center.dat").exists()

    report = str(tmp_path / "classify.jsonl")
    result = runner.invoke(cli, ["classify", "--input", random_walk_file,
                                 "--grid-spec", grid_file, "--out", report])
    assert result.exit_code == 0, result.output
    _, records = read_report(report)
    assert records[0].selected
    assert records[1]["state"] in STATES


def test_student_t_flag(runner, tmp_path, grid_file, random_walk_file):
    report = str(tmp_path / "fit.jsonl")
    result = runner.invoke(cli, ["fit", "--input", random_walk_file, "--grid-spec", grid_file,
                                 "--noise", "student-t", "--dof", "5", "--out", report])
    assert result.exit_code == 0, result.output
    _, records = read_report(report)
    assert all(record.noise_kind == "student_t" for record in records)


def test_potential_writes_plot_files(runner, tmp_path, grid_file, random_walk_file):
    plots = tmp_path / "plots"
    result = runner.invoke(cli, ["potential", "--input", random_walk_file, "--m", "2",
                                 "--bins", "11", "--min-count", "5", "--overlay",
                                 "--grid-spec", grid_file, "--plot-dir", str(plots),
                                 "--out", str(tmp_path / "potential.jsonl")])
    assert result.exit_code == 0, result.output
    for name in ("potential_empirical.dat", "potential_force.dat",
                 "potential_fitted.dat", "price.dat"):
        assert np.loadtxt(plots / name).shape[1] == 2
    _, records = read_report(str(tmp_path / "potential.jsonl"))
    assert records[0]["m"] == 2
    assert records[1].model.m == 2


def test_barrier_command(runner):
    result = runner.invoke(cli, ["barrier", "--b-quad", "0.6", "--b-nl", "-0.3", "--sigma", "0.1",
                                 "--horizon", "50", "--trials", "20"])
    assert result.exit_code == 0, result.output
    record = _last_json(result.output)
    assert record["barrier_position"] == pytest.approx(2.0)
    assert record["barrier_height"] == pytest.approx(0.4)


def test_contour_writes_three_columns(runner, tmp_path, grid_file, random_walk_file):
    plots = tmp_path / "contour"
    result = runner.invoke(cli, ["contour", "--input", random_walk_file, "--grid-spec", grid_file,
                                 "--plot-dir", str(plots), "--out", str(tmp_path / "c.jsonl")])
    assert result.exit_code == 0, result.output
    assert np.loadtxt(plots / "contour_bq_bnl_gamma2.dat").shape == (21 * 11, 3)
    assert np.loadtxt(plots / "contour_m_bnl_gamma2.dat").shape == (3 * 11, 3)


def test_make_demo(runner, tmp_path):
    out = str(tmp_path / "demo.csv")
    result = runner.invoke(cli, ["make-demo", "--seed", "2", "--sigma", "0.3",
                                 "--quadratic-length", "300", "--cubic-length", "300",
                                 "--crash-length", "50", "--out", out])
    assert result.exit_code == 0, result.output
    assert np.loadtxt(out).size == 654
    assert _last_json(result.output)["segments"]["crash"] == [604, 654]


def test_errors_and_exit_codes(runner, tmp_path):
    assert runner.invoke(cli, ["stability", "--m", "1"]).exit_code == 1
    missing = runner.invoke(cli, ["fit", "--input", str(tmp_path / "none.csv")])
    assert missing.exit_code == 1
    assert "Cannot read input file" in missing.output
    assert runner.invoke(cli, ["stability"]).exit_code == 2
    assert run_command(["unknown"]) == 2
    assert run_command(["stability", "--m", "2", "--bogus"]) == 2
    assert run_command(["stability", "--m", "1"]) == 1
    assert run_command(["stability", "--m", "3", "--out", str(tmp_path / "s.jsonl")]) == 0


def test_history(runner, tmp_path, monkeypatch):
    monkeypatch.setattr(Config, "RUN_LOG_PATH", str(tmp_path / "history.json"))
    runner.invoke(cli, ["stability", "--m", "4", "--out", str(tmp_path / "s.jsonl")])
    result = runner.invoke(cli, ["history", "--limit", "5"])
    assert result.exit_code == 0, result.output
    record = _last_json(result.output)
    assert record["command"] == "stability"
    assert record["details"]["status"] == "ok"


def test_contour_writes_beside_report_without_plot_dir(runner, tmp_path, grid_file,
                                                       random_walk_file):
    report = tmp_path / "reports" / "contour.jsonl"
    report.parent.mkdir()
    result = runner.invoke(cli, ["contour", "--input", random_walk_file, "--grid-spec", grid_file,
                                 "--out", str(report)])
    assert result.exit_code == 0, result.output
    assert (report.parent / "contour_bq_bnl_gamma2.dat").exists()
    assert (report.parent / "contour_m_bnl_gamma2.dat").exists()

    result = runner.invoke(cli, ["contour", "--input", random_walk_file, "--grid-spec", grid_file])
    assert result.exit_code == 2
    assert "--plot-dir" in result.output
