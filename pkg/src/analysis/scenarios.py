"""Synthetic quadratic -> cubic -> crash timeline for precursor experiments."""

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from src.analysis.barrier import barrier_geometry
from src.core.dynamics import displacements, simulate
from src.core.types import NoiseModel, PotentialModel, SimulationConfig, TickSeries
from src.utils.errors import ArgumentError, DivergenceError
from src.utils.logger import logger

MAX_ATTEMPTS = 20


@dataclass(frozen=True, eq=False)
class DemoScenario:
    """Glued series and the [start, end) tick range of each segment."""

    series: TickSeries
    segments: Dict[str, Tuple[int, int]]

    def segment_of(self, tick: int) -> str:
        """Name of the segment containing ``tick``."""
        for name, (start, end) in self.segments.items():
            if start <= tick < end:
                return name
        raise ArgumentError(f"tick {tick} lies outside the scenario")


def _trapped_segment(model: PotentialModel, noise: NoiseModel, n_steps: int,
                     warmup: np.ndarray, seed: int) -> np.ndarray:
    """Simulate a cubic segment whose displacement never passes the barrier.

    A draw is rejected and reseeded when the walker crosses p* on the barrier
    side at any tick of the segment, or when the trajectory overflows.
    """
    barrier_position, _ = barrier_geometry(model)
    side = math.copysign(1.0, barrier_position)
    for attempt in range(MAX_ATTEMPTS):
        config = SimulationConfig(model=model, noise=noise, n_steps=n_steps,
                                  initial_prices=warmup, rng_seed=seed + 7919 * attempt)
        try:
            prices = simulate(config).prices
        except DivergenceError:
            logger.warning(f"Cubic segment diverged on attempt {attempt + 1}; reseeding")
            continue
        # displacements()[i] belongs to tick i + m - 1
        p = displacements(prices, model.m)[warmup.size - model.m + 1:]
        if np.max(side * p) <= abs(barrier_position):
            return prices[warmup.size:]
        logger.warning(f"Cubic segment crossed the barrier on attempt {attempt + 1}; reseeding")
    raise ArgumentError(f"cubic segment escaped in all {MAX_ATTEMPTS} attempts; lower sigma")


def make_demo_scenario(seed: int = 0, m: int = 4, sigma: float = 0.5,
                       quadratic_length: int = 4000, cubic_length: int = 4000,
                       crash_length: int = 500, b_quad: float = 0.6,
                       b_nl: float = 0.3, crash_drift: float = 0.5,
                       start_price: float = 100.0) -> DemoScenario:
    """Build the glued quadratic / cubic / crash fixture.

    The quadratic segment uses a stable well (b_quad=0.5); the cubic segment
    keeps the walker trapped in the well of b_quad, b_nl (gamma=2); the crash
    is a noisy slide of ``crash_drift`` per tick towards the barrier side.

    Args:
        seed: Base seed; each segment derives its own.
        m: Moving-average span of both simulated segments.
        sigma: Gaussian noise standard deviation.
        quadratic_length: Ticks in the quadratic segment (after warm-up).
        cubic_length: Ticks in the cubic segment.
        crash_length: Ticks in the crash segment.
        b_quad: Quadratic coefficient of the cubic segment.
        b_nl: Cubic coefficient; its sign sets the crash direction.
        crash_drift: Mean price change per crash tick (magnitude).
        start_price: Flat warm-up price.

    Returns:
        DemoScenario: Series plus segment ranges.
    """
    if b_nl == 0.0:
        raise ArgumentError("the cubic segment needs b_nl != 0")
    noise = NoiseModel(kind="gaussian", sigma=sigma)
    warmup = np.full(m, start_price)

    quadratic = simulate(SimulationConfig(
        model=PotentialModel(b_quad=0.5, m=m, sigma=sigma),
        noise=noise, n_steps=quadratic_length, initial_prices=warmup, rng_seed=seed,
    )).prices

    cubic_model = PotentialModel(b_quad=b_quad, gamma=2, b_nl=b_nl, m=m, sigma=sigma)
    cubic = _trapped_segment(cubic_model, noise, cubic_length, quadratic[-m:], seed + 1)

    rng = np.random.default_rng(seed + 2)
    direction = math.copysign(1.0, -b_quad / b_nl)
    steps = direction * crash_drift + rng.normal(0.0, sigma, size=crash_length)
    crash = cubic[-1] + np.cumsum(steps)

    prices = np.concatenate([quadratic, cubic, crash])
    q_end = quadratic.size
    c_end = q_end + cubic.size
    segments = {
        "quadratic": (0, q_end),
        "cubic": (q_end, c_end),
        "crash": (c_end, prices.size),
    }
    logger.info(f"Built demo scenario with segments {segments} (seed {seed})")
    return DemoScenario(series=TickSeries(prices=prices, label=f"demo-seed-{seed}"),
                        segments=segments)
