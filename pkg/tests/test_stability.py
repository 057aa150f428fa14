"""Tests for the stability boundaries of the noise-free quadratic map."""

import numpy as np
import pytest

from src.analysis.stability import spectral_radius, stability_boundaries
from src.utils.errors import ArgumentError


def _transition_radius(b: np.ndarray, m: int) -> np.ndarray:
    """Largest eigenvalue magnitude of the full m-lag map, unit root removed."""
    matrices = np.zeros((b.size, m, m))
    matrices[:, 0, :] = (b / m)[:, None]
    matrices[:, 0, 0] += 1.0 - b
    matrices[:, np.arange(1, m), np.arange(m - 1)] = 1.0
    eigenvalues = np.linalg.eigvals(matrices)
    unit = np.argmin(np.abs(eigenvalues - 1.0), axis=1)
    magnitudes = np.abs(eigenvalues)
    magnitudes[np.arange(b.size), unit] = 0.0
    return magnitudes.max(axis=1)


def _brute_force_boundary(m: int, direction: float, limit: float = 5.0) -> float:
    b = direction * np.arange(1, int(limit / 1e-4) + 1) * 1e-4
    outside = np.flatnonzero(_transition_radius(b, m) >= 1.0)
    assert outside.size, f"no boundary found within {limit} for m={m}"
    return float(b[outside[0]])


def test_span_two_is_analytic():
    b_low, b_high = stability_boundaries(2)
    assert b_low == pytest.approx(-2.0, abs=1e-6)
    assert b_high == pytest.approx(2.0, abs=1e-6)


def test_span_three_is_analytic():
    b_low, b_high = stability_boundaries(3)
    assert b_low == pytest.approx(-1.0, abs=1e-6)
    assert b_high == pytest.approx(3.0, abs=1e-6)


@pytest.mark.parametrize("m", range(2, 11))
def test_zero_lies_inside(m):
    b_low, b_high = stability_boundaries(m)
    assert b_low < 0.0 < b_high
    assert b_low == pytest.approx(-2.0 / (m - 1), abs=1e-6)


@pytest.mark.parametrize("m", range(3, 11))
def test_boundaries_match_brute_force_scan(m):
    b_low, b_high = stability_boundaries(m)
    assert _brute_force_boundary(m, -1.0) == pytest.approx(b_low, abs=2e-4)
    assert _brute_force_boundary(m, 1.0) == pytest.approx(b_high, abs=2e-4)


def test_spectral_radius_agrees_with_full_map():
    b = np.linspace(-1.45, 2.45, 40)
    for m in (2, 4, 7):
        assert np.allclose(spectral_radius(b, m), _transition_radius(b, m), atol=1e-6)


def test_span_one_has_no_boundaries():
    with pytest.raises(ArgumentError):
        stability_boundaries(1)
