"""Tests for the empirical potential and the volatility statistic."""

import numpy as np
import pytest

from src.analysis.empirical import empirical_potential, fitted_potential_curve, volatility
from src.core.potential import potential_value
from src.core.types import PotentialModel, TickSeries
from src.utils.errors import ArgumentError, DivergenceError, InsufficientDataError


def _central(values: np.ndarray) -> slice:
    trim = int(round(0.2 * values.size))
    return slice(trim, values.size - trim)


def test_quadratic_data_gives_parabola(simulated):
    series = simulated(b_quad=0.5, m=4, sigma=0.1, n=10_000, seed=21)
    result = empirical_potential(series, m=4)
    central = _central(result.bin_centers)
    p = result.bin_centers[central]
    u = result.u_values[central]
    slope, _ = np.polyfit(p ** 2, u, 1)
    assert slope == pytest.approx(0.25, rel=0.2)
    analytic = potential_value(p, PotentialModel(b_quad=0.5, m=4))
    assert np.corrcoef(u, analytic)[0, 1] > 0.9


def test_random_walk_has_no_drift(simulated):
    sigma = 0.1
    series = simulated(m=3, sigma=sigma, n=10_000, seed=22)
    result = empirical_potential(series, m=3)
    assert np.all(result.counts >= 20)
    assert np.all(np.abs(result.mean_increment) <= 4 * sigma / np.sqrt(result.counts))


def test_shapes_and_anchor(simulated):
    result = empirical_potential(simulated(b_quad=0.3, m=2, sigma=0.1, n=3000, seed=1),
                                 m=2, n_bins=15, min_count=10)
    sizes = {result.bin_centers.size, result.mean_increment.size,
             result.counts.size, result.u_values.size}
    assert len(sizes) == 1
    anchor = int(np.argmin(np.abs(result.bin_centers)))
    assert result.u_values[anchor] == 0.0
    assert np.all(np.diff(result.bin_centers) > 0)
    assert result.to_dict()["m"] == 2


def test_empirical_potential_preconditions(simulated):
    series = simulated(b_quad=0.3, m=2, sigma=0.1, n=500, seed=1)
    with pytest.raises(ArgumentError):
        empirical_potential(series, m=2, n_bins=2)
    with pytest.raises(InsufficientDataError):
        empirical_potential(TickSeries(prices=np.arange(20.0)), m=2, n_bins=31)
    with pytest.raises(InsufficientDataError):
        empirical_potential(TickSeries(prices=[5.0] * 200), m=3)
    with pytest.raises(InsufficientDataError):
        empirical_potential(series, m=2, min_count=10_000)


def test_fitted_curve_is_the_analytic_potential():
    model = PotentialModel(b_quad=0.6, gamma=2, b_nl=-0.3)
    p = np.linspace(-1.0, 2.5, 8)
    assert np.allclose(fitted_potential_curve(model, p), potential_value(p, model))


def test_volatility():
    assert volatility(TickSeries(prices=[3.0] * 5)) == 0.0
    assert volatility(TickSeries(prices=[0.0, 1.0, 0.0, 1.0])) == 1.0
    with pytest.raises(ArgumentError):
        volatility(TickSeries(prices=[1.0]))


def _interior_extrema(result, b_nl: float):
    """Indices (well, barrier) of u_values, oriented so the barrier lies at larger p."""
    centers, u = result.bin_centers, result.u_values
    if b_nl > 0:
        centers, u = -centers[::-1], u[::-1]
    barrier = int(np.argmax(np.where(centers > 0, u, -np.inf)))
    well = int(np.argmin(np.where(centers < centers[barrier], u, np.inf)))
    return well, barrier, u


@pytest.mark.parametrize("b_nl", [-0.15, 0.15])
def test_cubic_data_gives_well_then_barrier(simulated, b_nl):
    shaped = 0
    for seed in range(4):
        try:
            series = simulated(b_quad=0.3, b_nl=b_nl, gamma=2, m=4, sigma=1.0, n=200_000,
                               seed=40 + seed, start=1e4)
        except DivergenceError:
            continue
        result = empirical_potential(series, m=4, n_bins=21, min_count=50)
        well, barrier, u = _interior_extrema(result, b_nl)
        shaped += (0 < well < barrier < u.size - 1
                   and u[0] > u[well] and u[-1] < u[barrier])
    assert shaped >= 3


def test_volatility_matches_across_stable_and_unstable_wells(simulated):
    n = 100_000
    base_sigma = 0.05
    stable = volatility(simulated(b_quad=0.5, m=4, sigma=base_sigma, n=n, seed=61, start=1e4))
    unstable = volatility(simulated(b_quad=-0.5, m=4, sigma=base_sigma, n=n, seed=62, start=1e4))
    assert unstable > stable
    # Both recursions are linear, so volatility scales with sigma squared.
    calibrated = base_sigma * np.sqrt(stable / unstable)
    stable = volatility(simulated(b_quad=0.5, m=4, sigma=base_sigma, n=n, seed=63, start=1e4))
    unstable = volatility(simulated(b_quad=-0.5, m=4, sigma=calibrated, n=n, seed=64, start=1e4))
    assert unstable == pytest.approx(stable, rel=0.1)
