"""Tests for run reports and plot files."""

import json
import math

import numpy as np
import pytest

from src.analysis.scanner import scan_windows
from src.data.plots import write_plot, write_surface
from src.data.reports import ReportWriter, read_report
from src.estimation.fitting import select_families
from src.utils.errors import ArgumentError, IngestError


def test_fit_records_round_trip_exactly(tmp_path, simulated, small_grid):
    results = select_families(simulated(b_quad=0.5, m=4, n=500, seed=1), small_grid)
    path = str(tmp_path / "fit.jsonl")
    with ReportWriter(path, "fit", {"criterion": "aic"}) as report:
        for result in results.values():
            report.write_fit(result)

    header, records = read_report(path)
    assert header["command"] == "fit"
    assert header["config"] == {"criterion": "aic"}
    assert "version" in header
    assert records == list(results.values())
    for record in records:
        assert record.aic == -2.0 * record.log_likelihood + 2.0 * record.k_params
        assert record.bic == -2.0 * record.log_likelihood + record.k_params * math.log(record.n_obs)


def test_window_records_round_trip(tmp_path, simulated, small_grid):
    records = scan_windows(simulated(b_quad=0.5, m=4, n=600, seed=2), window=300, step=150,
                           grid=small_grid)
    path = str(tmp_path / "scan.jsonl")
    with ReportWriter(path, "scan") as report:
        for record in records:
            report.write_window(record)
        report.write("summary", {"windows": len(records)})
    _, restored = read_report(path)
    assert restored[:-1] == records
    assert restored[-1] == {"record": "summary", "windows": len(records)}


def test_reports_are_line_delimited_and_reproducible(tmp_path):
    paths = [str(tmp_path / f"r{i}.jsonl") for i in range(2)]
    for path in paths:
        with ReportWriter(path, "stability", {"m": 2}) as report:
            report.write("stability", {"m": 2, "b_low": -2.0, "b_high": 2.0})
    lines = open(paths[0]).read().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1])["b_low"] == -2.0
    assert open(paths[0]).read() == open(paths[1]).read()


def test_read_report_errors(tmp_path):
    with pytest.raises(IngestError):
        read_report(str(tmp_path / "missing.jsonl"))
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"record": "fit"}\n')
    with pytest.raises(IngestError):
        read_report(str(bad))


def test_plot_files(tmp_path):
    path = str(tmp_path / "plots" / "curve.dat")
    write_plot(path, [0.0, 0.5, 1.0], [1.0, 2.0, 3.0])
    data = np.loadtxt(path)
    assert data.shape == (3, 2)
    assert data[:, 1].tolist() == [1.0, 2.0, 3.0]
    with pytest.raises(ArgumentError):
        write_plot(path, [0.0], [1.0, 2.0])


def test_surface_files(tmp_path):
    path = str(tmp_path / "surface.dat")
    write_surface(path, [1.0, 2.0], [10.0, 20.0, 30.0], np.arange(6.0).reshape(2, 3))
    data = np.loadtxt(path)
    assert data.shape == (6, 3)
    assert data[1].tolist() == [1.0, 20.0, 1.0]
    assert data[3].tolist() == [2.0, 10.0, 3.0]
    with pytest.raises(ArgumentError):
        write_surface(path, [1.0], [10.0], np.zeros((2, 2)))
