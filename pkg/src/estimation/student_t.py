"""Student-t noise density for the long-tail robustness check."""

import numpy as np
from scipy import stats
from scipy.optimize import minimize_scalar

from src.estimation.base import NoiseDensity
from src.utils.errors import ArgumentError
from src.utils.logger import logger

SIGMA_FLOOR = 1e-6
SIGMA_RTOL = 1e-8


class StudentTDensity(NoiseDensity):
    """Student-t w(f) with ``dof`` degrees of freedom.

    ``sigma`` is the standard deviation, so the scipy scale parameter is
    sigma * sqrt((dof - 2) / dof).
    """

    kind = "student_t"

    def __init__(self, dof: float = 4.0):
        """Initialize the density.

        Args:
            dof: Tail heaviness; must exceed 2 so the variance exists.
        """
        if not dof > 2:
            raise ArgumentError(f"student_t noise needs dof > 2, got {dof}")
        self.dof = float(dof)
        self._scale_factor = float(np.sqrt((self.dof - 2.0) / self.dof))

    def log_pdf(self, residuals: np.ndarray, sigma: float) -> np.ndarray:
        return stats.t.logpdf(
            np.asarray(residuals, dtype=float),
            df=self.dof,
            scale=sigma * self._scale_factor,
        )

    def fit_sigma(self, residuals: np.ndarray) -> float:
        """Bounded scalar search for sigma on [1e-6, 10 * RMS]."""
        values = np.asarray(residuals, dtype=float)
        rms = self.rms(values)
        upper = max(10.0 * rms, 2.0 * SIGMA_FLOOR)
        result = minimize_scalar(
            lambda sigma: -float(np.sum(self.log_pdf(values, sigma))),
            bounds=(SIGMA_FLOOR, upper),
            method="bounded",
            options={"xatol": SIGMA_RTOL * rms, "maxiter": 500},
        )
        if not result.success:
            logger.warning(f"Student-t sigma search did not converge: {result.message}")
        return float(result.x)
