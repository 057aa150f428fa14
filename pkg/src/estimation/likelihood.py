"""Likelihood of a price trace under the PUCK model and information criteria."""

import math
from typing import Optional, Sequence, Tuple

import numpy as np

from src.core.dynamics import residuals
from src.core.types import NoiseModel, PotentialModel, TickSeries
from src.estimation import get_noise_density
from src.estimation.gaussian import GaussianDensity
from src.utils.errors import ArgumentError, InsufficientDataError


def noise_log_likelihood(values: Sequence[float], noise: NoiseModel) -> float:
    """Sum of ln w(f) over an explicit residual vector.

    Args:
        values: Residuals f(t).
        noise: Noise density and scale.

    Returns:
        float: The log-likelihood.
    """
    return get_noise_density(noise).log_likelihood(np.asarray(values, dtype=float), noise.sigma)


def log_likelihood(series: TickSeries, model: PotentialModel, noise: NoiseModel,
                   warmup: Optional[int] = None) -> float:
    """Log of the product of noise densities over the trace's residuals.

    Args:
        series: Price trace.
        model: Potential assumed to drive the trace.
        noise: Noise density; its ``sigma`` scales w.
        warmup: First residual tick (default m-1).

    Returns:
        float: sum_t ln w(f(t)).
    """
    if len(series) < model.m + 2:
        raise InsufficientDataError(
            f"log-likelihood needs at least m+2={model.m + 2} ticks, got {len(series)}"
        )
    if not noise.sigma > 0:
        raise ArgumentError(f"noise sigma must be positive, got {noise.sigma}")
    return noise_log_likelihood(residuals(series, model, warmup), noise)


def profile_sigma(series: TickSeries, model: PotentialModel,
                  warmup: Optional[int] = None) -> float:
    """Maximum-likelihood Gaussian scale sqrt(mean f^2).

    Args:
        series: Price trace.
        model: Potential assumed to drive the trace.
        warmup: First residual tick (default m-1).

    Returns:
        float: The profiled sigma.
    """
    values = residuals(series, model, warmup)
    if values.size < 2:
        raise InsufficientDataError(f"need at least 2 residuals, got {values.size}")
    return GaussianDensity().fit_sigma(values)


def information_criteria(log_likelihood: float, k_params: int, n_obs: int) -> Tuple[float, float]:
    """AIC and BIC of a fitted model.

    Args:
        log_likelihood: Maximized log-likelihood.
        k_params: Number of fitted quantities.
        n_obs: Number of residuals used.

    Returns:
        Tuple[float, float]: (-2 ll + 2k, -2 ll + k ln n).
    """
    if n_obs < 1 or k_params < 1:
        raise ArgumentError(f"need n_obs >= 1 and k_params >= 1, got {n_obs}, {k_params}")
    aic = -2.0 * log_likelihood + 2.0 * k_params
    bic = -2.0 * log_likelihood + k_params * math.log(n_obs)
    return aic, bic
