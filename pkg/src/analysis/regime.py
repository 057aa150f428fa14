"""Five-state market regime classification and the cubic precursor flag."""

import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

from src.estimation.grid import FAMILY_NONE, FAMILY_NONLINEAR, FAMILY_QUADRATIC, FitResult
from src.utils.errors import ArgumentError

PURE_RANDOM_WALK = "pure_random_walk"
STABLE = "stable"
UNSTABLE = "unstable"
OSCILLATORY_DIVERGENT = "oscillatory_divergent"
MONOTONIC_DIVERGENT = "monotonic_divergent"
STATES = (PURE_RANDOM_WALK, STABLE, UNSTABLE, OSCILLATORY_DIVERGENT, MONOTONIC_DIVERGENT)

DEFAULT_EPSILON = 0.05
DEFAULT_DELTA_THRESHOLD = 2.0


@dataclass(frozen=True)
class RegimeLabel:
    """Market state of one fit plus the cubic precursor flag.

    Attributes:
        state: One of ``STATES``.
        precursor_cubic: The selected model is cubic (gamma=2, b_nl != 0) and
            beats every b_nl=0 family by more than the threshold.
        delta_criterion: Criterion gap between the winning and runner-up family
            (NaN when the fit carries no family scores).
    """

    state: str
    precursor_cubic: bool = False
    delta_criterion: float = math.nan

    def to_dict(self) -> Dict[str, Any]:
        return {
            "state": self.state,
            "precursor_cubic": self.precursor_cubic,
            "delta_criterion": self.delta_criterion,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RegimeLabel":
        delta = data.get("delta_criterion")
        return cls(
            state=data["state"],
            precursor_cubic=bool(data.get("precursor_cubic", False)),
            delta_criterion=math.nan if delta is None else float(delta),
        )


def _state(b_quad: float, b_nl: float, gamma: int,
           boundaries: Tuple[float, float], epsilon: float) -> str:
    b_low, b_high = boundaries
    if abs(b_quad) <= epsilon and b_nl == 0.0:
        return PURE_RANDOM_WALK
    if b_quad >= b_high:
        return OSCILLATORY_DIVERGENT
    if b_quad <= b_low:
        return MONOTONIC_DIVERGENT
    if b_quad > epsilon:
        return STABLE
    if b_quad < -epsilon:
        return UNSTABLE
    # Negligible quadratic term: only an odd-gamma, positive b_nl term restores on both sides.
    return STABLE if gamma % 2 == 1 and b_nl > 0 else UNSTABLE


def classify_regime(fit: FitResult, boundaries: Tuple[float, float],
                    epsilon: float = DEFAULT_EPSILON,
                    delta_threshold: float = DEFAULT_DELTA_THRESHOLD) -> RegimeLabel:
    """Label a fitted model with one of the five market states.

    Args:
        fit: Selected model, ideally carrying ``family_scores`` from selection.
        boundaries: (b_low, b_high) from ``stability_boundaries(fit.model.m)``.
        epsilon: Half-width of the random-walk band around b_quad = 0.
        delta_threshold: Criterion margin a cubic fit needs to raise the precursor flag.

    Returns:
        RegimeLabel: State, precursor flag and the winner's criterion margin.
    """
    if not epsilon > 0 or not delta_threshold > 0:
        raise ArgumentError(
            f"epsilon and delta_threshold must be positive, got {epsilon}, {delta_threshold}"
        )
    b_low, b_high = boundaries
    if not b_low < b_high:
        raise ArgumentError(f"boundaries must satisfy b_low < b_high, got {boundaries}")

    model = fit.model
    state = _state(model.b_quad, model.b_nl, model.gamma, boundaries, epsilon)

    scores = fit.family_scores
    delta = math.nan
    precursor = False
    if scores:
        ranked = sorted(scores.values())
        if len(ranked) > 1:
            delta = ranked[1] - ranked[0]
        flat_families = [scores[f] for f in (FAMILY_NONE, FAMILY_QUADRATIC) if f in scores]
        if fit.family == FAMILY_NONLINEAR and flat_families and FAMILY_NONLINEAR in scores:
            gap = min(flat_families) - scores[FAMILY_NONLINEAR]
            precursor = model.gamma == 2 and model.b_nl != 0.0 and gap > delta_threshold

    return RegimeLabel(state=state, precursor_cubic=precursor, delta_criterion=delta)
