"""Shared fixtures: simulated price series, small grids and price files."""

import numpy as np
import pytest

from src.core.dynamics import simulate
from src.core.types import NoiseModel, PotentialModel, SimulationConfig, TickSeries
from src.estimation.grid import GridSpec


def simulate_series(b_quad: float = 0.0, b_nl: float = 0.0, gamma: int = 2, m: int = 4,
                    sigma: float = 0.03, n: int = 2000, seed: int = 0,
                    start: float = 100.0) -> TickSeries:
    """Simulate n ticks after a flat warm-up of m prices."""
    config = SimulationConfig(
        model=PotentialModel(b_quad=b_quad, gamma=gamma, b_nl=b_nl, m=m, sigma=sigma),
        noise=NoiseModel(kind="gaussian", sigma=sigma),
        n_steps=n,
        initial_prices=[start] * m,
        rng_seed=seed,
    )
    return simulate(config)


@pytest.fixture
def simulated():
    """Factory building simulated series."""
    return simulate_series


@pytest.fixture
def small_grid() -> GridSpec:
    """A coarse grid that keeps selection tests fast."""
    return GridSpec(
        b_quad_range=(-1.0, 1.0, 0.05),
        b_nl_range=(-0.5, 0.5, 0.05),
        gamma_set=(2, 3),
        m_set=(2, 3, 4, 5, 6),
    )


@pytest.fixture
def write_prices(tmp_path):
    """Factory writing a text price file and returning its path."""
    def _write(text: str, name: str = "prices.csv") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


@pytest.fixture
def random_walk_file(tmp_path) -> str:
    """Price-only file of a 600-tick Gaussian random walk."""
    rng = np.random.default_rng(11)
    prices = 100.0 + np.cumsum(rng.normal(0.0, 0.05, size=600))
    path = tmp_path / "walk.csv"
    np.savetxt(path, prices, fmt="%.17g")
    return str(path)
