"""Tests for noise densities, the trace likelihood and information criteria."""

import math

import numpy as np
import pytest
from scipy import stats

from src.core.dynamics import residuals
from src.core.types import NoiseModel, PotentialModel, TickSeries
from src.estimation import get_noise_density
from src.estimation.gaussian import GaussianDensity
from src.estimation.likelihood import (
    information_criteria,
    log_likelihood,
    noise_log_likelihood,
    profile_sigma,
)
from src.estimation.student_t import StudentTDensity
from src.utils.errors import ArgumentError, DegenerateFitError, InsufficientDataError


def test_single_zero_residual():
    value = noise_log_likelihood([0.0], NoiseModel(sigma=1.0))
    assert value == pytest.approx(-0.5 * math.log(2 * math.pi))
    assert value == pytest.approx(-0.91894, abs=1e-5)


def test_log_likelihood_matches_term_by_term_sum():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        m = int(rng.integers(1, 5))
        series = TickSeries(prices=rng.normal(0.0, 1.0, size=int(rng.integers(m + 2, 30))))
        model = PotentialModel(b_quad=rng.uniform(-1, 1), gamma=int(rng.integers(2, 4)),
                               b_nl=rng.uniform(-0.5, 0.5), m=m)
        sigma = rng.uniform(0.1, 3.0)
        expected = 0.0
        for f in residuals(series, model):
            expected += -0.5 * math.log(2 * math.pi * sigma ** 2) - f * f / (2 * sigma ** 2)
        actual = log_likelihood(series, model, NoiseModel(sigma=sigma))
        assert actual == pytest.approx(expected, abs=1e-10, rel=1e-12)


def test_gaussian_scale_identity(simulated):
    series = simulated(b_quad=0.5, m=4, sigma=0.03, n=500, seed=2)
    model = PotentialModel(b_quad=0.45, m=4)
    c = 3.7
    scaled = TickSeries(prices=series.prices * c)
    n_obs = len(series) - model.m
    base = log_likelihood(series, model, NoiseModel(sigma=0.03))
    rescaled = log_likelihood(scaled, model, NoiseModel(sigma=0.03 * c))
    assert rescaled - base == pytest.approx(-n_obs * math.log(c), rel=1e-9)


def test_log_likelihood_preconditions():
    with pytest.raises(InsufficientDataError):
        log_likelihood(TickSeries(prices=[1.0, 2.0, 3.0]), PotentialModel(m=2), NoiseModel())
    with pytest.raises(ArgumentError):
        NoiseModel(sigma=0.0)


@pytest.mark.parametrize("prices,expected", [
    ([0.0, 1.0, 0.0], 1.0),
    ([0.0, 2.0, 0.0, 2.0], 2.0),
])
def test_profile_sigma_examples(prices, expected):
    assert profile_sigma(TickSeries(prices=prices), PotentialModel(m=1)) == pytest.approx(expected)


def test_profile_sigma_degenerate():
    with pytest.raises(DegenerateFitError):
        profile_sigma(TickSeries(prices=[4.0] * 10), PotentialModel(b_quad=0.3, m=3))


def test_profile_sigma_is_the_argmax(simulated):
    series = simulated(b_quad=0.3, m=3, sigma=0.2, n=400, seed=9)
    model = PotentialModel(b_quad=0.3, m=3)
    sigma = profile_sigma(series, model)
    best = log_likelihood(series, model, NoiseModel(sigma=sigma))
    n = len(series) - model.m
    assert best == pytest.approx(-0.5 * n * (math.log(2 * math.pi * sigma ** 2) + 1), rel=1e-12)
    for factor in (0.99, 1.01):
        assert log_likelihood(series, model, NoiseModel(sigma=sigma * factor)) < best
    grid = np.linspace(0.5 * sigma, 1.5 * sigma, 10_000)
    values = residuals(series, model)
    scan = [GaussianDensity().log_likelihood(values, s) for s in grid[::50]]
    assert best >= max(scan)


def test_information_criteria_examples():
    aic, _ = information_criteria(-100.0, 5, 1000)
    assert aic == 210.0
    assert information_criteria(0.0, 1, 1) == (2.0, 0.0)
    aic7, bic7 = information_criteria(-10.0, 3, 7)
    aic8, bic8 = information_criteria(-10.0, 3, 8)
    assert bic7 < aic7
    assert aic8 < bic8
    with pytest.raises(ArgumentError):
        information_criteria(0.0, 1, 0)
    with pytest.raises(ArgumentError):
        information_criteria(0.0, 0, 10)


def test_noise_density_factory():
    assert isinstance(get_noise_density(NoiseModel()), GaussianDensity)
    density = get_noise_density(NoiseModel(kind="student_t", dof=5.0))
    assert isinstance(density, StudentTDensity)
    assert density.dof == 5.0


def test_student_t_density_uses_standard_deviation():
    density = StudentTDensity(dof=4.0)
    values = np.array([-1.0, 0.0, 0.5, 3.0])
    expected = stats.t.logpdf(values, df=4.0, scale=2.0 * math.sqrt(0.5))
    assert np.allclose(density.log_pdf(values, 2.0), expected)
    with pytest.raises(ArgumentError):
        StudentTDensity(dof=2.0)


def test_student_t_fit_sigma_recovers_scale():
    rng = np.random.default_rng(4)
    dof, sigma = 5.0, 0.4
    draws = sigma * math.sqrt((dof - 2) / dof) * rng.standard_t(dof, size=20_000)
    density = StudentTDensity(dof)
    fitted = density.fit_sigma(draws)
    assert fitted == pytest.approx(sigma, rel=0.05)
    best = density.log_likelihood(draws, fitted)
    assert density.log_likelihood(draws, fitted * 1.01) < best
    assert density.log_likelihood(draws, fitted * 0.99) < best
