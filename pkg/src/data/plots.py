"""Plot-ready columnar text files."""

import os
from typing import Optional

import numpy as np

from src.utils.config import Config
from src.utils.errors import ArgumentError
from src.utils.logger import logger


def _prepare_path(path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def write_plot(path: str, x, y, precision: Optional[int] = None) -> None:
    """Write two whitespace-separated columns (x, y).

    Args:
        path: Output file.
        x: Abscissae.
        y: Ordinates, same length as ``x``.
        precision: Significant digits (default ``Config.PLOT_PRECISION``).
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ArgumentError(f"plot columns differ in length: {x.size} vs {y.size}")
    digits = precision or Config.PLOT_PRECISION
    _prepare_path(path)
    np.savetxt(path, np.column_stack([x, y]), fmt=f"%.{digits}g")
    logger.info(f"Wrote {x.size} plot points to {path}")


def write_surface(path: str, x, y, values, precision: Optional[int] = None) -> None:
    """Write a gridded surface as three columns (x, y, value).

    ``values[i, j]`` belongs to ``(x[i], y[j])``; rows are emitted with x
    varying slowest.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    values = np.asarray(values, dtype=float)
    if values.shape != (x.size, y.size):
        raise ArgumentError(
            f"surface of shape {values.shape} does not match axes ({x.size}, {y.size})"
        )
    xx, yy = np.meshgrid(x, y, indexing="ij")
    digits = precision or Config.PLOT_PRECISION
    _prepare_path(path)
    np.savetxt(path, np.column_stack([xx.ravel(), yy.ravel(), values.ravel()]),
               fmt=f"%.{digits}g")
    logger.info(f"Wrote {values.size}-point surface to {path}")
