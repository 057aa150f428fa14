"""Moving-average centre, forward simulation and residual extraction."""

from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.core.potential import potential_force
from src.core.types import NoiseModel, PotentialModel, SimulationConfig, TickSeries
from src.utils.errors import (
    ArgumentError,
    DivergenceError,
    IndexRangeError,
    InsufficientDataError,
)
from src.utils.logger import logger


def moving_center(series: TickSeries, t: int, m: int) -> float:
    """Mean of the last ``m`` prices up to and including tick ``t``.

    Args:
        series: Price trace.
        t: Current tick index.
        m: Moving-average span.

    Returns:
        float: P_M(t) = (P(t) + P(t-1) + ... + P(t-m+1)) / m.
    """
    if m < 1:
        raise ArgumentError(f"moving-average span m must be >= 1, got {m}")
    if t < m - 1 or t >= len(series):
        raise IndexRangeError(
            f"tick {t} is outside [{m - 1}, {len(series) - 1}] for m={m}"
        )
    return float(np.mean(series.prices[t - m + 1:t + 1]))


def moving_center_series(prices: np.ndarray, m: int) -> np.ndarray:
    """P_M(t) for every t >= m-1; element i belongs to tick i + m - 1."""
    if m < 1:
        raise ArgumentError(f"moving-average span m must be >= 1, got {m}")
    prices = np.asarray(prices, dtype=float)
    if prices.size < m:
        raise InsufficientDataError(f"need at least {m} prices for m={m}, got {prices.size}")
    return sliding_window_view(prices, m).mean(axis=1)


def displacements(prices: np.ndarray, m: int) -> np.ndarray:
    """p(t) = P(t) - P_M(t) for every t >= m-1; element i belongs to tick i + m - 1."""
    prices = np.asarray(prices, dtype=float)
    return prices[m - 1:] - moving_center_series(prices, m)


def smooth(series: TickSeries, span: int) -> TickSeries:
    """Trailing uniform-weight pre-smoother.

    Each output price is the mean of ``span`` consecutive input prices and
    carries the timestamp of the last of them. ``span=1`` returns the input.

    Args:
        series: Raw price trace.
        span: Averaging span.

    Returns:
        TickSeries: Smoothed trace, ``span - 1`` ticks shorter.
    """
    if span < 1:
        raise ArgumentError(f"smoothing span must be >= 1, got {span}")
    if span == 1:
        return series
    if len(series) < span:
        raise InsufficientDataError(
            f"series of length {len(series)} is shorter than smoothing span {span}"
        )
    stamps = None if series.timestamps is None else series.timestamps[span - 1:]
    return TickSeries(
        prices=moving_center_series(series.prices, span),
        timestamps=stamps,
        label=series.label,
    )


def residuals(series: TickSeries, model: PotentialModel,
              warmup: Optional[int] = None) -> np.ndarray:
    """Recover the noise terms f(t) from a price trace.

    f(t) = [P(t+1) - P(t)] + b_quad p(t) + b_nl p(t)^gamma, for t from
    ``warmup`` (default m-1) to len-2.

    Args:
        series: Price trace.
        model: Potential assumed to have generated the trace.
        warmup: First tick at which a residual is formed; must be >= m-1.

    Returns:
        np.ndarray: ``len(series) - warmup - 1`` residuals.
    """
    m = model.m
    start = m - 1 if warmup is None else warmup
    if start < m - 1:
        raise ArgumentError(f"warm-up {start} is shorter than m-1={m - 1}")
    if len(series) < start + 2:
        raise InsufficientDataError(
            f"series of length {len(series)} gives no residual for m={m} and warm-up {start}"
        )
    prices = series.prices
    p = displacements(prices, m)[start - (m - 1):-1]
    increments = np.diff(prices[start:])
    return increments - potential_force(p, model)


def draw_noise(noise: NoiseModel, rng: np.random.Generator, size) -> np.ndarray:
    """Draw zero-mean noise with standard deviation ``noise.sigma``.

    Args:
        noise: Noise distribution.
        rng: Random generator.
        size: Output shape.

    Returns:
        np.ndarray: Noise draws.
    """
    if noise.kind == "gaussian":
        return rng.normal(0.0, noise.sigma, size=size)
    scale = noise.sigma * np.sqrt((noise.dof - 2.0) / noise.dof)
    return scale * rng.standard_t(noise.dof, size=size)


def simulate_with_noise(config: SimulationConfig) -> Tuple[TickSeries, np.ndarray]:
    """Run the PUCK recursion and return the trace with the noise it consumed.

    P(t+1) = P(t) - dU/dp |_{p = P(t) - P_M(t)} + f(t)

    Args:
        config: Model, noise, warm-up history, step count and seed.

    Returns:
        Tuple[TickSeries, np.ndarray]: The warm-up followed by ``n_steps``
        generated prices, and the ``n_steps`` noise draws in order.

    Raises:
        DivergenceError: The trajectory overflowed to non-finite prices.
    """
    model = config.model
    warmup = np.asarray(config.initial_prices, dtype=float)
    if warmup.size < model.m:
        raise ArgumentError(f"warm-up of {warmup.size} prices is shorter than m={model.m}")

    rng = np.random.default_rng(config.rng_seed)
    noise = draw_noise(config.noise, rng, config.n_steps)

    n0 = warmup.size
    prices = np.empty(n0 + config.n_steps)
    prices[:n0] = warmup
    m = model.m
    diverged_at = None
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(config.n_steps):
            t = n0 - 1 + step
            p = prices[t] - prices[t - m + 1:t + 1].mean()
            if not np.isfinite(p):
                diverged_at = step
                break
            prices[t + 1] = prices[t] - (model.b_quad * p + model.b_nl * p ** model.gamma) + noise[step]

    if diverged_at is not None or not np.all(np.isfinite(prices)):
        raise DivergenceError(
            f"simulation diverged to non-finite prices (b_quad={model.b_quad}, "
            f"b_nl={model.b_nl}, m={m}); shorten n_steps or move inside the stable region"
        )

    logger.debug(f"Simulated {config.n_steps} steps with seed {config.rng_seed}")
    return TickSeries(prices=prices, label=f"sim-seed-{config.rng_seed}"), noise


def simulate(config: SimulationConfig) -> TickSeries:
    """Generate a price trace from the PUCK model.

    Args:
        config: Model, noise, warm-up history, step count and seed.

    Returns:
        TickSeries: Warm-up history followed by ``n_steps`` generated prices.
    """
    series, _ = simulate_with_noise(config)
    return series
