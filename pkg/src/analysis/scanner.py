"""Sliding-window model selection and precursor alarms."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Tuple

from src.analysis.empirical import volatility
from src.analysis.regime import (
    DEFAULT_DELTA_THRESHOLD,
    DEFAULT_EPSILON,
    RegimeLabel,
    classify_regime,
)
from src.analysis.stability import stability_boundaries
from src.core.types import NoiseModel, TickSeries
from src.estimation.fitting import select_model
from src.estimation.grid import FitResult, GridSpec
from src.utils.errors import ArgumentError, DegenerateFitError
from src.utils.logger import logger

DEFAULT_WINDOW = 2000
MIN_WINDOW = 50


@dataclass(frozen=True)
class WindowRecord:
    """Outcome of one scan window.

    Degenerate windows (constant prices) keep their position with
    ``degenerate=True`` and no fit.
    """

    index: int
    start: int
    length: int
    fit: Optional[FitResult]
    regime: Optional[RegimeLabel]
    volatility: float
    degenerate: bool = False
    message: str = ""

    @property
    def end(self) -> int:
        """Index of the window's last tick, where an alarm is placed."""
        return self.start + self.length - 1

    @property
    def alarm(self) -> bool:
        return self.regime is not None and self.regime.precursor_cubic

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "start": self.start,
            "length": self.length,
            "volatility": self.volatility,
            "degenerate": self.degenerate,
            "message": self.message,
            "alarm": self.alarm,
            "fit": None if self.fit is None else self.fit.to_dict(),
            "regime": None if self.regime is None else self.regime.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WindowRecord":
        return cls(
            index=data["index"],
            start=data["start"],
            length=data["length"],
            fit=None if data.get("fit") is None else FitResult.from_dict(data["fit"]),
            regime=None if data.get("regime") is None else RegimeLabel.from_dict(data["regime"]),
            volatility=data["volatility"],
            degenerate=data.get("degenerate", False),
            message=data.get("message", ""),
        )


def boundaries_for(m: int) -> Tuple[float, float]:
    """Stability interval for span m; m=1 exerts no force so nothing diverges."""
    if m == 1:
        return -math.inf, math.inf
    return stability_boundaries(m)


def iter_windows(length: int, window: int, step: int) -> Iterator[Tuple[int, int]]:
    """Yield (index, start) of every full window."""
    for index, start in enumerate(range(0, length - window + 1, step)):
        yield index, start


def scan_windows(series: TickSeries, window: int = DEFAULT_WINDOW, step: int = 500,
                 grid: Optional[GridSpec] = None, criterion: str = "aic",
                 epsilon: float = DEFAULT_EPSILON,
                 delta_threshold: float = DEFAULT_DELTA_THRESHOLD,
                 noise: Optional[NoiseModel] = None,
                 max_workers: int = 1) -> List[WindowRecord]:
    """Select a model and classify the regime in every sliding window.

    Args:
        series: Full price trace.
        window: Ticks per window (>= 50).
        step: Offset between consecutive window starts (>= 1).
        grid: Parameter grid (default grid when omitted).
        criterion: ``aic`` or ``bic``.
        epsilon: Random-walk band half-width for classification.
        delta_threshold: Criterion margin for the cubic precursor alarm.
        noise: Noise kind for the likelihood (Gaussian when omitted).
        max_workers: Threads evaluating windows; output order is by window index.

    Returns:
        List[WindowRecord]: One record per window, in window order.
    """
    if window < MIN_WINDOW:
        raise ArgumentError(f"window must be >= {MIN_WINDOW} ticks, got {window}")
    if step < 1:
        raise ArgumentError(f"step must be >= 1, got {step}")
    if len(series) < window:
        raise ArgumentError(f"series of length {len(series)} is shorter than window {window}")
    if max_workers < 1:
        raise ArgumentError(f"max_workers must be >= 1, got {max_workers}")
    grid = grid or GridSpec()

    def evaluate(position: Tuple[int, int]) -> WindowRecord:
        index, start = position
        segment = series.window(start, window)
        vol = volatility(segment)
        try:
            fit = select_model(segment, grid, criterion, noise, offset=start)
        except DegenerateFitError as e:
            logger.warning(f"Window {index} at tick {start} is degenerate: {str(e)}")
            return WindowRecord(index, start, window, None, None, vol, True, str(e))
        regime = classify_regime(fit, boundaries_for(fit.model.m), epsilon, delta_threshold)
        return WindowRecord(index, start, window, fit, regime, vol)

    positions = list(iter_windows(len(series), window, step))
    logger.info(f"Scanning {len(positions)} windows of {window} ticks (step {step})")
    if max_workers == 1:
        records = [evaluate(position) for position in positions]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            records = list(executor.map(evaluate, positions))

    alarms = sum(record.alarm for record in records)
    logger.info(f"Scan finished: {alarms} precursor alarm(s) in {len(records)} windows")
    return records


def first_alarm(records: List[WindowRecord]) -> Optional[WindowRecord]:
    """Earliest window raising the cubic precursor alarm, if any."""
    return next((record for record in records if record.alarm), None)
