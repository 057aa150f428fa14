"""Run configuration: built-in defaults, YAML config files and flag overrides."""

import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, Optional

import yaml

from src.analysis.empirical import DEFAULT_BINS, MIN_OCCUPANCY
from src.analysis.regime import DEFAULT_DELTA_THRESHOLD, DEFAULT_EPSILON
from src.analysis.scanner import DEFAULT_WINDOW, MIN_WINDOW
from src.core.types import NOISE_KINDS, NoiseModel
from src.estimation.grid import CRITERIA, GridSpec
from src.utils.config import Config
from src.utils.errors import ArgumentError, IngestError
from src.utils.logger import logger


@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one CLI invocation.

    Attributes:
        grid: Parameter grid of the likelihood search.
        window: Ticks per scan window.
        step: Offset between scan windows.
        criterion: ``aic`` or ``bic``.
        noise_kind: ``gaussian`` or ``student_t``.
        dof: Student-t degrees of freedom.
        epsilon: Random-walk band half-width of the regime classifier.
        delta_threshold: Criterion margin of the cubic precursor alarm.
        bins: Bins of the empirical potential.
        min_count: Minimum ticks per surviving bin.
        smooth: Trailing smoothing span applied to ingested prices (1 = off).
        seed: Random seed.
        max_workers: Threads used by window scans.
    """

    grid: GridSpec = field(default_factory=GridSpec)
    window: int = DEFAULT_WINDOW
    step: int = 500
    criterion: str = "aic"
    noise_kind: str = "gaussian"
    dof: float = 4.0
    epsilon: float = DEFAULT_EPSILON
    delta_threshold: float = DEFAULT_DELTA_THRESHOLD
    bins: int = DEFAULT_BINS
    min_count: int = MIN_OCCUPANCY
    smooth: int = 1
    seed: int = 0
    max_workers: int = Config.MAX_WORKERS

    def __post_init__(self) -> None:
        object.__setattr__(self, "noise_kind", self.noise_kind.replace("-", "_"))
        object.__setattr__(self, "criterion", self.criterion.lower())
        if self.criterion not in CRITERIA:
            raise ArgumentError(f"Unknown criterion: {self.criterion}")
        if self.noise_kind not in NOISE_KINDS:
            raise ArgumentError(f"Unsupported noise kind: {self.noise_kind}")
        if self.noise_kind == "student_t" and not self.dof > 2:
            raise ArgumentError(f"student_t noise needs dof > 2, got {self.dof}")
        if self.window < MIN_WINDOW:
            raise ArgumentError(f"window must be >= {MIN_WINDOW} ticks, got {self.window}")
        if self.step < 1:
            raise ArgumentError(f"step must be >= 1, got {self.step}")
        for name in ("epsilon", "delta_threshold"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ArgumentError(f"{name} must be positive, got {value}")
        if self.bins < 3 or self.min_count < 1:
            raise ArgumentError(f"need bins >= 3 and min_count >= 1, got {self.bins}, {self.min_count}")
        if self.smooth < 1:
            raise ArgumentError(f"smooth span must be >= 1, got {self.smooth}")
        if self.seed < 0:
            raise ArgumentError(f"seed must be unsigned, got {self.seed}")
        if self.max_workers < 1:
            raise ArgumentError(f"max_workers must be >= 1, got {self.max_workers}")

    @property
    def noise(self) -> NoiseModel:
        """Noise kind used for likelihood evaluation; sigma is profiled."""
        return NoiseModel(kind=self.noise_kind, dof=self.dof)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["grid"] = self.grid.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ArgumentError(f"Unknown config key(s): {', '.join(unknown)}")
        values = dict(data)
        if "grid" in values:
            values["grid"] = GridSpec.from_dict(values["grid"] or {})
        return cls(**values)

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Copy with every non-None override applied."""
        values = {key: value for key, value in overrides.items() if value is not None}
        refine = values.pop("refine", None)
        config = replace(self, **values)
        if refine:
            config = replace(config, grid=replace(config.grid, refine=True))
        return config


def load_config(path: str) -> RunConfig:
    """Read a YAML config file; absent keys keep their defaults.

    Args:
        path: YAML file with top-level ``RunConfig`` keys.

    Returns:
        RunConfig: Defaults overridden by the file.
    """
    try:
        with open(path, "r", encoding="utf-8") as file:
            data = yaml.safe_load(file) or {}
    except OSError as e:
        raise IngestError(f"Cannot read config file {path}: {str(e)}")
    except yaml.YAMLError as e:
        raise ArgumentError(f"Config file {path} is not valid YAML: {str(e)}")
    if not isinstance(data, dict):
        raise ArgumentError(f"Config file {path} must contain a mapping")
    logger.debug(f"Loaded config file {path}")
    return RunConfig.from_dict(data)


def save_config(config: RunConfig, path: str) -> None:
    """Write a config file that ``load_config`` reads back unchanged."""
    with open(path, "w", encoding="utf-8") as file:
        yaml.safe_dump(config.to_dict(), file, sort_keys=False)


def resolve_config(path: Optional[str], overrides: Dict[str, Any]) -> RunConfig:
    """Flags override the config file, which overrides built-in defaults."""
    base = load_config(path) if path else RunConfig()
    return base.merged(overrides)
