"""Estimation module for the application."""

from src.core.types import NoiseModel
from src.estimation.base import NoiseDensity
from src.utils.errors import ArgumentError
from src.utils.logger import logger


def get_noise_density(noise: NoiseModel) -> NoiseDensity:
    """Get the density implementation for a noise model.

    Args:
        noise: Noise model naming the kind (and dof for student_t).

    Returns:
        NoiseDensity: Density used for likelihood evaluation.
    """
    if noise.kind == "gaussian":
        from src.estimation.gaussian import GaussianDensity
        return GaussianDensity()
    if noise.kind == "student_t":
        from src.estimation.student_t import StudentTDensity
        return StudentTDensity(noise.dof)

    logger.error(f"Unsupported noise kind: {noise.kind}")
    raise ArgumentError(f"Unsupported noise kind: {noise.kind}")
