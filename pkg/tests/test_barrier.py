"""Tests for the cubic barrier geometry and the escape Monte Carlo."""

import math

import numpy as np
import pytest

from src.analysis.barrier import barrier_geometry, barrier_report
from src.core.potential import potential_value
from src.core.types import NoiseModel, PotentialModel
from src.utils.errors import ArgumentError, NoBarrierError

CUBIC = PotentialModel(b_quad=0.6, gamma=2, b_nl=-0.3, m=4)


def test_barrier_of_reference_cubic():
    report = barrier_report(CUBIC, NoiseModel(sigma=0.1), horizon=10, n_trials=10)
    assert report.barrier_position == pytest.approx(2.0, rel=1e-12)
    assert report.barrier_height == pytest.approx(0.4, rel=1e-12)
    assert report.well_position == 0.0
    p = np.arange(0.0, 4.0, 1e-5)
    assert report.barrier_height == pytest.approx(potential_value(p, CUBIC).max(), rel=1e-6)


def test_barrier_height_matches_numeric_maximum():
    rng = np.random.default_rng(8)
    for _ in range(50):
        b_quad = rng.uniform(0.05, 2.0)
        b_nl = rng.uniform(0.05, 1.0) * rng.choice([-1.0, 1.0])
        model = PotentialModel(b_quad=b_quad, gamma=2, b_nl=b_nl)
        position, height = barrier_geometry(model)
        p = np.linspace(0.0, 1.5 * position, 300_001)
        assert height == pytest.approx(potential_value(p, model).max(), rel=1e-6)
        assert height >= 0.0


@pytest.mark.parametrize("model", [
    PotentialModel(b_quad=0.6, gamma=3, b_nl=-0.3),
    PotentialModel(b_quad=-0.6, gamma=2, b_nl=0.3),
    PotentialModel(b_quad=0.0, gamma=2, b_nl=0.3),
    PotentialModel(b_quad=0.6, gamma=2, b_nl=0.0),
])
def test_no_barrier(model):
    with pytest.raises(NoBarrierError):
        barrier_report(model, NoiseModel(), horizon=10, n_trials=10)


def test_mirrored_cubic_has_barrier_on_negative_side():
    position, height = barrier_geometry(PotentialModel(b_quad=0.6, gamma=2, b_nl=0.3))
    assert position == pytest.approx(-2.0)
    assert height == pytest.approx(0.4)


def test_no_noise_means_no_escape():
    report = barrier_report(CUBIC, NoiseModel(sigma=1e-8), horizon=2000, n_trials=50)
    assert report.escape_fraction == 0.0
    assert math.isnan(report.mean_escape_time)


def test_escape_fraction_grows_with_noise():
    fractions = []
    for sigma in (0.05, 0.1, 0.2, 0.5, 1.0, 2.0):
        report = barrier_report(CUBIC, NoiseModel(sigma=sigma), horizon=200,
                                n_trials=1000, rng_seed=3)
        assert 0.0 <= report.escape_fraction <= 1.0
        fractions.append(report.escape_fraction)
    assert fractions == sorted(fractions)
    assert fractions[-1] > 0.5


def test_escape_statistics():
    report = barrier_report(CUBIC, NoiseModel(sigma=1.0), horizon=100, n_trials=500, rng_seed=1)
    again = barrier_report(CUBIC, NoiseModel(sigma=1.0), horizon=100, n_trials=500, rng_seed=1)
    assert report == again
    assert report.escape_fraction > 0.0
    assert 1.0 <= report.mean_escape_time <= 100.0
    buffered = barrier_report(CUBIC, NoiseModel(sigma=1.0), horizon=100, n_trials=500,
                              rng_seed=1, escape_buffer=1.0)
    assert buffered.escape_fraction <= report.escape_fraction
    assert buffered.to_dict()["escape_buffer"] == 1.0


def test_barrier_report_preconditions():
    with pytest.raises(ArgumentError):
        barrier_report(CUBIC, NoiseModel(), horizon=0, n_trials=10)
    with pytest.raises(ArgumentError):
        barrier_report(CUBIC, NoiseModel(), horizon=10, n_trials=0)
    with pytest.raises(ArgumentError):
        barrier_report(CUBIC, NoiseModel(), horizon=10, n_trials=10, escape_buffer=-1.0)
