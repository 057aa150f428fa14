"""Linear stability of the noise-free quadratic PUCK map.

x(t+1) - x(t) = -b (x(t) - mean(x(t), ..., x(t-m+1))) has the characteristic
polynomial lambda^m - (1 - b + b/m) lambda^(m-1) - (b/m)(lambda^(m-2) + ... + 1),
which always carries the root lambda = 1. Dividing it out leaves

    lambda^(m-1) + sum_{j=1}^{m-1} b (1 - j/m) lambda^(m-1-j)

whose roots decide whether displacements decay.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np

from src.utils.errors import ArgumentError
from src.utils.logger import logger

SCAN_STEP = 0.01
SCAN_LIMIT = 100.0
TOLERANCE = 1e-9


def deflated_coefficients(b: np.ndarray, m: int) -> np.ndarray:
    """Coefficients c_1..c_{m-1} of the deflated monic polynomial, one row per b."""
    b = np.atleast_1d(np.asarray(b, dtype=float))
    j = np.arange(1, m)
    return b[:, None] * (1.0 - j[None, :] / m)


def spectral_radius(b, m: int) -> np.ndarray:
    """Largest root magnitude other than the persistent unit root.

    Args:
        b: Quadratic coefficient(s).
        m: Moving-average span (>= 2).

    Returns:
        np.ndarray: One radius per value of ``b``.
    """
    coefficients = deflated_coefficients(b, m)
    n = m - 1
    companion = np.zeros((coefficients.shape[0], n, n))
    companion[:, 0, :] = -coefficients
    if n > 1:
        companion[:, np.arange(1, n), np.arange(n - 1)] = 1.0
    return np.abs(np.linalg.eigvals(companion)).max(axis=1)


def _boundary(m: int, direction: float) -> float:
    grid = direction * np.arange(1, int(SCAN_LIMIT / SCAN_STEP) + 1) * SCAN_STEP
    radius = spectral_radius(grid, m)
    crossing = np.flatnonzero(radius >= 1.0)
    if crossing.size == 0:
        raise ArgumentError(f"no stability boundary within |b| <= {SCAN_LIMIT} for m={m}")
    k = int(crossing[0])
    inside = 0.0 if k == 0 else float(grid[k - 1])
    outside = float(grid[k])
    while abs(outside - inside) > TOLERANCE:
        middle = 0.5 * (inside + outside)
        if spectral_radius(middle, m)[0] < 1.0:
            inside = middle
        else:
            outside = middle
    return 0.5 * (inside + outside)


@lru_cache(maxsize=None)
def stability_boundaries(m: int) -> Tuple[float, float]:
    """Interval of b for which the noise-free quadratic map does not diverge.

    Args:
        m: Moving-average span (>= 2; m=1 has no force).

    Returns:
        Tuple[float, float]: (b_low, b_high) with b_low < 0 < b_high.
    """
    if m < 2:
        raise ArgumentError(f"stability boundaries need m >= 2, got {m}")
    b_low, b_high = _boundary(m, -1.0), _boundary(m, 1.0)
    logger.debug(f"Stability boundaries for m={m}: ({b_low:.9f}, {b_high:.9f})")
    return b_low, b_high
