"""Base noise-density interface for likelihood evaluation."""

from abc import ABC, abstractmethod

import numpy as np

from src.utils.errors import ArgumentError, DegenerateFitError


class NoiseDensity(ABC):
    """Abstract base class for the density w(f) of the noise term."""

    kind: str = ""

    @abstractmethod
    def log_pdf(self, residuals: np.ndarray, sigma: float) -> np.ndarray:
        """Evaluate ln w(f) for each residual.

        Args:
            residuals: Noise terms f(t).
            sigma: Standard deviation of the noise.

        Returns:
            np.ndarray: Log density of each residual.
        """
        pass

    @abstractmethod
    def fit_sigma(self, residuals: np.ndarray) -> float:
        """Maximum-likelihood standard deviation for the given residuals.

        Args:
            residuals: Noise terms f(t).

        Returns:
            float: The scale maximizing the summed log density.
        """
        pass

    def log_likelihood(self, residuals: np.ndarray, sigma: float) -> float:
        """Summed log density of the residuals.

        Args:
            residuals: Noise terms f(t).
            sigma: Standard deviation of the noise.

        Returns:
            float: Sum of ln w(f(t)).
        """
        if not sigma > 0:
            raise ArgumentError(f"noise sigma must be positive, got {sigma}")
        return float(np.sum(self.log_pdf(np.asarray(residuals, dtype=float), sigma)))

    @staticmethod
    def rms(residuals: np.ndarray) -> float:
        """Root mean square of the residuals; raises when all are zero."""
        values = np.asarray(residuals, dtype=float)
        if values.size == 0:
            raise ArgumentError("no residuals to fit")
        rms = float(np.sqrt(np.mean(values ** 2)))
        if rms == 0.0:
            raise DegenerateFitError("all residuals are exactly zero; likelihood is unbounded")
        return rms
