"""Search grid, potential families and fit results."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.core.types import PotentialModel
from src.estimation.likelihood import information_criteria
from src.utils.errors import ArgumentError

# Nested families and the number of fitted quantities each one carries:
# sigma; b_quad, M, sigma; b_quad, gamma, b_nl, M, sigma.
FAMILY_NONE = "none"
FAMILY_QUADRATIC = "quadratic"
FAMILY_NONLINEAR = "nonlinear"
FAMILIES = (FAMILY_NONE, FAMILY_QUADRATIC, FAMILY_NONLINEAR)
FAMILY_K = {FAMILY_NONE: 1, FAMILY_QUADRATIC: 3, FAMILY_NONLINEAR: 5}

CRITERIA = ("aic", "bic")

Range = Tuple[float, float, float]


def _check_range(name: str, values: Range) -> Range:
    if len(values) != 3:
        raise ArgumentError(f"{name} must be (low, high, step), got {values}")
    low, high, step = (float(v) for v in values)
    if not (math.isfinite(low) and math.isfinite(high) and math.isfinite(step)):
        raise ArgumentError(f"{name} must be finite, got {values}")
    if low > high or step <= 0:
        raise ArgumentError(f"{name} needs low <= high and step > 0, got {values}")
    return low, high, step


def range_values(values: Range) -> np.ndarray:
    """Grid points low, low+step, ..., <= high; points near zero snap to exactly 0."""
    low, high, step = values
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    points = np.round(low + step * np.arange(count), 10) + 0.0
    points[np.abs(points) < 1e-12] = 0.0
    return points


@dataclass(frozen=True)
class GridSpec:
    """Parameter grid for the maximum-likelihood search.

    Attributes:
        b_quad_range: (low, high, step) of the quadratic coefficient.
        b_nl_range: (low, high, step) of the nonlinear coefficient.
        gamma_set: Nonlinear exponents (integers >= 2).
        m_set: Moving-average spans (integers >= 1).
        refine: Coordinate-descent refinement around the best grid point.
        screen_top: Points per (family, M, gamma) re-scored exactly under
            Student-t noise.
    """

    b_quad_range: Range = (-2.0, 2.0, 0.05)
    b_nl_range: Range = (-1.0, 1.0, 0.02)
    gamma_set: Tuple[int, ...] = (2, 3)
    m_set: Tuple[int, ...] = tuple(range(2, 11))
    refine: bool = False
    screen_top: int = 5

    def __post_init__(self) -> None:
        object.__setattr__(self, "b_quad_range", _check_range("b_quad_range", self.b_quad_range))
        object.__setattr__(self, "b_nl_range", _check_range("b_nl_range", self.b_nl_range))
        gammas = tuple(sorted({int(g) for g in self.gamma_set}))
        ms = tuple(sorted({int(m) for m in self.m_set}))
        if not gammas or not ms:
            raise ArgumentError("gamma_set and m_set must be non-empty")
        if gammas[0] < 2:
            raise ArgumentError(f"every gamma must be >= 2, got {gammas}")
        if ms[0] < 1:
            raise ArgumentError(f"every m must be >= 1, got {ms}")
        if self.screen_top < 1:
            raise ArgumentError(f"screen_top must be >= 1, got {self.screen_top}")
        object.__setattr__(self, "gamma_set", gammas)
        object.__setattr__(self, "m_set", ms)

    @property
    def b_quad_values(self) -> np.ndarray:
        return range_values(self.b_quad_range)

    @property
    def b_nl_values(self) -> np.ndarray:
        return range_values(self.b_nl_range)

    @property
    def max_m(self) -> int:
        return self.m_set[-1]

    @property
    def size(self) -> int:
        """Number of (b_quad, gamma, b_nl, M) points."""
        return (len(self.b_quad_values) * len(self.b_nl_values)
                * len(self.gamma_set) * len(self.m_set))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "b_quad_range": list(self.b_quad_range),
            "b_nl_range": list(self.b_nl_range),
            "gamma_set": list(self.gamma_set),
            "m_set": list(self.m_set),
            "refine": self.refine,
            "screen_top": self.screen_top,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridSpec":
        defaults = cls()
        return cls(
            b_quad_range=tuple(data.get("b_quad_range", defaults.b_quad_range)),
            b_nl_range=tuple(data.get("b_nl_range", defaults.b_nl_range)),
            gamma_set=tuple(data.get("gamma_set", defaults.gamma_set)),
            m_set=tuple(data.get("m_set", defaults.m_set)),
            refine=bool(data.get("refine", defaults.refine)),
            screen_top=int(data.get("screen_top", defaults.screen_top)),
        )


@dataclass(frozen=True)
class FitResult:
    """One evaluated model with its likelihood and information criteria.

    ``window`` is the effective (start, length) sub-series: its first m-1
    ticks are warm-up, so ``n_obs == window[1] - model.m``.
    """

    model: PotentialModel
    log_likelihood: float
    aic: float
    bic: float
    k_params: int
    n_obs: int
    window: Tuple[int, int]
    selected: bool = False
    family: str = FAMILY_NONLINEAR
    criterion: str = "aic"
    family_scores: Dict[str, float] = field(default_factory=dict)
    noise_kind: str = "gaussian"

    @classmethod
    def build(cls, model: PotentialModel, log_likelihood: float, k_params: int,
              n_obs: int, window: Tuple[int, int], **extra: Any) -> "FitResult":
        """Create a result whose AIC/BIC follow from the stored likelihood."""
        aic, bic = information_criteria(log_likelihood, k_params, n_obs)
        return cls(
            model=model,
            log_likelihood=float(log_likelihood),
            aic=aic,
            bic=bic,
            k_params=int(k_params),
            n_obs=int(n_obs),
            window=(int(window[0]), int(window[1])),
            **extra,
        )

    @property
    def degenerate_m1(self) -> bool:
        """m=1 makes the displacement vanish: indistinguishable from no potential."""
        return self.model.m == 1

    def score(self, criterion: Optional[str] = None) -> float:
        """Value of the named criterion (default: the one used for selection)."""
        name = criterion or self.criterion
        if name not in CRITERIA:
            raise ArgumentError(f"Unknown criterion: {name}")
        return self.aic if name == "aic" else self.bic

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.to_dict(),
            "log_likelihood": self.log_likelihood,
            "aic": self.aic,
            "bic": self.bic,
            "k_params": self.k_params,
            "n_obs": self.n_obs,
            "window": list(self.window),
            "selected": self.selected,
            "family": self.family,
            "criterion": self.criterion,
            "family_scores": dict(self.family_scores),
            "noise_kind": self.noise_kind,
            "degenerate_m1": self.degenerate_m1,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FitResult":
        return cls(
            model=PotentialModel.from_dict(data["model"]),
            log_likelihood=data["log_likelihood"],
            aic=data["aic"],
            bic=data["bic"],
            k_params=data["k_params"],
            n_obs=data["n_obs"],
            window=tuple(data["window"]),
            selected=data.get("selected", False),
            family=data.get("family", FAMILY_NONLINEAR),
            criterion=data.get("criterion", "aic"),
            family_scores=dict(data.get("family_scores", {})),
            noise_kind=data.get("noise_kind", "gaussian"),
        )
