"""Domain types of the PUCK market model."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from src.utils.errors import ArgumentError

NOISE_KINDS = ("gaussian", "student_t")


def _frozen_array(values: Sequence[float]) -> np.ndarray:
    array = np.array(values, dtype=float).ravel()
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TickSeries:
    """Ordered price observations, the walker trace P(t).

    Attributes:
        prices: Prices in file order (price units).
        timestamps: Optional epoch seconds, same length as ``prices``.
        label: Free-form identifier.
    """

    prices: np.ndarray
    timestamps: Optional[np.ndarray] = None
    label: str = ""

    def __post_init__(self) -> None:
        prices = _frozen_array(self.prices)
        if prices.size < 1:
            raise ArgumentError("TickSeries needs at least one price")
        if not np.all(np.isfinite(prices)):
            raise ArgumentError("TickSeries prices must all be finite")
        object.__setattr__(self, "prices", prices)

        if self.timestamps is not None:
            timestamps = _frozen_array(self.timestamps)
            if timestamps.size != prices.size:
                raise ArgumentError(
                    f"timestamps length {timestamps.size} differs from prices length {prices.size}"
                )
            if np.any(np.diff(timestamps) < 0):
                raise ArgumentError("timestamps must be non-decreasing")
            object.__setattr__(self, "timestamps", timestamps)

    def __len__(self) -> int:
        return int(self.prices.size)

    def window(self, start: int, length: int) -> "TickSeries":
        """Return the sub-series ``[start, start + length)``.

        Args:
            start: First tick index.
            length: Number of ticks.

        Returns:
            TickSeries: The slice, labelled with its position.
        """
        if start < 0 or length < 1 or start + length > len(self):
            raise ArgumentError(
                f"window ({start}, {length}) does not fit a series of length {len(self)}"
            )
        stamps = None if self.timestamps is None else self.timestamps[start:start + length]
        return TickSeries(
            prices=self.prices[start:start + length],
            timestamps=stamps,
            label=f"{self.label}[{start}:{start + length}]",
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert the series to a JSON-compatible dictionary."""
        return {
            "label": self.label,
            "prices": self.prices.tolist(),
            "timestamps": None if self.timestamps is None else self.timestamps.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TickSeries":
        """Create a series from a dictionary produced by ``to_dict``."""
        return cls(
            prices=data["prices"],
            timestamps=data.get("timestamps"),
            label=data.get("label", ""),
        )


@dataclass(frozen=True)
class PotentialModel:
    """Quadratic plus one higher-order term potential and its noise scale.

    U(p) = (b_quad / 2) p^2 + (b_nl / (gamma + 1)) p^(gamma + 1), with the
    potential centred on the M-tick moving average.
    """

    b_quad: float = 0.0
    gamma: int = 2
    b_nl: float = 0.0
    m: int = 2
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if int(self.gamma) != self.gamma or self.gamma < 2:
            raise ArgumentError(f"gamma must be an integer >= 2, got {self.gamma}")
        if int(self.m) != self.m or self.m < 1:
            raise ArgumentError(f"m must be an integer >= 1, got {self.m}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ArgumentError(f"sigma must be positive and finite, got {self.sigma}")
        if not (math.isfinite(self.b_quad) and math.isfinite(self.b_nl)):
            raise ArgumentError("potential coefficients must be finite")
        object.__setattr__(self, "gamma", int(self.gamma))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "b_quad", float(self.b_quad))
        object.__setattr__(self, "b_nl", float(self.b_nl))
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def is_null(self) -> bool:
        """True for the no-potential model (b_quad = b_nl = 0)."""
        return self.b_quad == 0.0 and self.b_nl == 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "b_quad": self.b_quad,
            "gamma": self.gamma,
            "b_nl": self.b_nl,
            "m": self.m,
            "sigma": self.sigma,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PotentialModel":
        return cls(
            b_quad=data["b_quad"],
            gamma=data["gamma"],
            b_nl=data["b_nl"],
            m=data["m"],
            sigma=data["sigma"],
        )


@dataclass(frozen=True)
class NoiseModel:
    """Distribution of the noise term f(t).

    For ``student_t``, ``sigma`` is the standard deviation, so ``dof`` must
    exceed 2; ``dof`` is ignored for ``gaussian``.
    """

    kind: str = "gaussian"
    sigma: float = 1.0
    dof: float = 4.0

    def __post_init__(self) -> None:
        kind = self.kind.replace("-", "_")
        if kind not in NOISE_KINDS:
            raise ArgumentError(f"Unsupported noise kind: {self.kind}")
        object.__setattr__(self, "kind", kind)
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ArgumentError(f"noise sigma must be positive and finite, got {self.sigma}")
        if kind == "student_t" and not self.dof > 2:
            raise ArgumentError(f"student_t noise needs dof > 2, got {self.dof}")

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "sigma": self.sigma, "dof": self.dof}


@dataclass(frozen=True)
class SimulationConfig:
    """Inputs of one forward simulation.

    Attributes:
        model: Potential driving the walker.
        noise: Noise distribution of f(t).
        n_steps: Number of generated prices.
        initial_prices: Warm-up history, at least ``model.m`` prices.
        rng_seed: Seed of the random generator.
    """

    model: PotentialModel
    noise: NoiseModel
    n_steps: int
    initial_prices: Sequence[float] = field(default=(0.0,))
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ArgumentError(f"n_steps must be a positive integer, got {self.n_steps}")
        warmup = tuple(float(p) for p in self.initial_prices)
        if len(warmup) < self.model.m:
            raise ArgumentError(
                f"warm-up of {len(warmup)} prices is shorter than m={self.model.m}"
            )
        if not all(math.isfinite(p) for p in warmup):
            raise ArgumentError("warm-up prices must be finite")
        if self.rng_seed < 0:
            raise ArgumentError(f"rng_seed must be unsigned, got {self.rng_seed}")
        object.__setattr__(self, "initial_prices", warmup)
