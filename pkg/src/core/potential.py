"""Potential function and force law centred on the moving average."""

from typing import Union

import numpy as np

from src.core.types import PotentialModel
from src.utils.errors import ArgumentError

ArrayLike = Union[float, np.ndarray]


def _checked(p: ArrayLike) -> np.ndarray:
    values = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ArgumentError("displacement p must be finite")
    return values


def _scalar_or_array(values: np.ndarray) -> ArrayLike:
    return float(values) if values.ndim == 0 else values


def potential_value(p: ArrayLike, model: PotentialModel) -> ArrayLike:
    """Evaluate U(p) = (b_quad/2) p^2 + (b_nl/(gamma+1)) p^(gamma+1).

    Args:
        p: Displacement from the moving centre, scalar or array.
        model: Potential coefficients.

    Returns:
        The potential, with the same shape as ``p``.
    """
    values = _checked(p)
    exponent = model.gamma + 1
    u = 0.5 * model.b_quad * values ** 2 + (model.b_nl / exponent) * values ** exponent
    return _scalar_or_array(u)


def potential_force(p: ArrayLike, model: PotentialModel) -> ArrayLike:
    """Evaluate the drift -dU/dp = -(b_quad p + b_nl p^gamma).

    Args:
        p: Displacement from the moving centre, scalar or array.
        model: Potential coefficients.

    Returns:
        The force, with the same shape as ``p``.
    """
    values = _checked(p)
    force = -(model.b_quad * values + model.b_nl * values ** model.gamma)
    return _scalar_or_array(force)
