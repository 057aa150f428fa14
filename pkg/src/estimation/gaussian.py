"""Zero-mean Gaussian noise density."""

import numpy as np

from src.estimation.base import NoiseDensity

LOG_2PI = float(np.log(2.0 * np.pi))


class GaussianDensity(NoiseDensity):
    """Gaussian w(f) with zero mean; the scale is profiled analytically."""

    kind = "gaussian"

    def log_pdf(self, residuals: np.ndarray, sigma: float) -> np.ndarray:
        values = np.asarray(residuals, dtype=float)
        return -0.5 * (LOG_2PI + 2.0 * np.log(sigma)) - values ** 2 / (2.0 * sigma ** 2)

    def fit_sigma(self, residuals: np.ndarray) -> float:
        return self.rms(residuals)

    @staticmethod
    def profiled_log_likelihood(sum_squares, n_obs: int):
        """Log-likelihood at the analytic optimum sigma^2 = S / n.

        Args:
            sum_squares: Sum of squared residuals S (scalar or array).
            n_obs: Number of residuals n.

        Returns:
            -(n/2) (ln(2 pi S / n) + 1), elementwise.
        """
        return -0.5 * n_obs * (LOG_2PI + np.log(np.asarray(sum_squares) / n_obs) + 1.0)
