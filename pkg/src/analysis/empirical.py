"""Nonparametric potential reconstruction from binned price increments."""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from scipy.integrate import cumulative_trapezoid

from src.core.dynamics import displacements
from src.core.potential import potential_value
from src.core.types import PotentialModel, TickSeries
from src.utils.errors import ArgumentError, InsufficientDataError
from src.utils.logger import logger

DEFAULT_BINS = 31
MIN_OCCUPANCY = 20


@dataclass(frozen=True, eq=False)
class EmpiricalPotential:
    """Binned force estimates and their integral.

    Attributes:
        bin_centers: Displacement p at each surviving bin centre.
        mean_increment: Mean P(t+1) - P(t) per bin, an estimate of -dU/dp.
        counts: Ticks per bin.
        u_values: -integral of ``mean_increment``, zero at the bin nearest p=0.
        m: Moving-average span used for the displacements.
    """

    bin_centers: np.ndarray
    mean_increment: np.ndarray
    counts: np.ndarray
    u_values: np.ndarray
    m: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "bin_centers": self.bin_centers.tolist(),
            "mean_increment": self.mean_increment.tolist(),
            "counts": self.counts.tolist(),
            "u_values": self.u_values.tolist(),
        }


def empirical_potential(series: TickSeries, m: int, n_bins: int = DEFAULT_BINS,
                        min_count: int = MIN_OCCUPANCY) -> EmpiricalPotential:
    """Estimate U(p) by integrating the mean increment against displacement.

    Args:
        series: Price trace.
        m: Moving-average span.
        n_bins: Equal-width bins over the observed displacement range.
        min_count: Bins with fewer ticks are dropped.

    Returns:
        EmpiricalPotential: Surviving bins with their force and potential values.
    """
    if n_bins < 3:
        raise ArgumentError(f"n_bins must be >= 3, got {n_bins}")
    if m < 1:
        raise ArgumentError(f"m must be >= 1, got {m}")
    if len(series) < m + n_bins:
        raise InsufficientDataError(
            f"series of length {len(series)} is shorter than m + n_bins = {m + n_bins}"
        )

    prices = series.prices
    p = displacements(prices, m)[:-1]
    increments = np.diff(prices)[m - 1:]
    low, high = float(p.min()), float(p.max())
    if low == high:
        raise InsufficientDataError("displacements are constant; nothing to bin")

    edges = np.linspace(low, high, n_bins + 1)
    index = np.clip(np.digitize(p, edges) - 1, 0, n_bins - 1)
    counts = np.bincount(index, minlength=n_bins)
    sums = np.bincount(index, weights=increments, minlength=n_bins)
    keep = counts >= min_count
    if np.count_nonzero(keep) < 3:
        raise InsufficientDataError(
            f"only {np.count_nonzero(keep)} bins reach {min_count} ticks; need at least 3"
        )
    dropped = n_bins - int(np.count_nonzero(keep))
    if dropped:
        logger.debug(f"Dropped {dropped} of {n_bins} bins below {min_count} ticks")

    centers = 0.5 * (edges[:-1] + edges[1:])[keep]
    mean_increment = sums[keep] / counts[keep]
    u_values = -cumulative_trapezoid(mean_increment, centers, initial=0.0)
    u_values = u_values - u_values[int(np.argmin(np.abs(centers)))]

    return EmpiricalPotential(
        bin_centers=centers,
        mean_increment=mean_increment,
        counts=counts[keep],
        u_values=u_values,
        m=m,
    )


def fitted_potential_curve(model: PotentialModel, p_values: np.ndarray) -> np.ndarray:
    """Analytic U at the given displacements, for overlay on empirical bins."""
    return np.asarray(potential_value(np.asarray(p_values, dtype=float), model))


def volatility(series: TickSeries) -> float:
    """Mean squared one-tick increment.

    Args:
        series: Price trace of at least two ticks.

    Returns:
        float: mean of (P(t+1) - P(t))^2.
    """
    if len(series) < 2:
        raise ArgumentError(f"volatility needs at least 2 ticks, got {len(series)}")
    return float(np.mean(np.diff(series.prices) ** 2))
