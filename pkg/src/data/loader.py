"""Tick data loading and emission utilities."""

import os
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pandas as pd

from src.core.types import TickSeries
from src.utils.config import Config
from src.utils.errors import ArgumentError, EmptyInputError, IngestError
from src.utils.logger import logger

FORMATS = ("csv_time_price", "csv_price_only")
OVERFLOW_COLUMN = "_overflow"


@dataclass(frozen=True)
class IngestSpec:
    """Where and how to read a price file."""

    path: str
    format: str = "csv_price_only"
    delimiter: str = ","
    skip_header: bool = False

    def __post_init__(self) -> None:
        fmt = self.format.replace("-", "_")
        if fmt not in FORMATS:
            raise ArgumentError(f"Unsupported input format: {self.format}")
        object.__setattr__(self, "format", fmt)
        if len(self.delimiter) != 1:
            raise ArgumentError(f"delimiter must be a single character, got {self.delimiter!r}")


class TickLoader:
    """Tick file loader class."""

    def __init__(self):
        """Initialize the loader."""
        self.skipped_rows = 0
        self.timestamps_dropped = False
        self._bad_lines: List[List[str]] = []

    def _on_bad_line(self, fields: List[str]) -> None:
        self._bad_lines.append(fields)
        return None

    def load(self, spec: IngestSpec) -> TickSeries:
        """Load a price file.

        Args:
            spec: Path, column layout, delimiter and header flag.

        Returns:
            TickSeries: Valid prices in file order, with timestamps when present.
        """
        self.skipped_rows = 0
        self.timestamps_dropped = False
        self._bad_lines = []

        if not os.path.isfile(spec.path):
            raise IngestError(f"Cannot read input file: {spec.path}")

        columns = ["timestamp", "price"] if spec.format == "csv_time_price" else ["price"]
        # The layout, not the first line, fixes the width; one spare column
        # catches rows with a single extra field.
        try:
            frame = pd.read_csv(
                spec.path,
                sep=spec.delimiter,
                header=None,
                names=columns + [OVERFLOW_COLUMN],
                index_col=False,
                skiprows=1 if spec.skip_header else 0,
                dtype=str,
                engine="python",
                skip_blank_lines=True,
                on_bad_lines=self._on_bad_line,
            )
        except pd.errors.EmptyDataError:
            raise EmptyInputError(f"No rows in input file: {spec.path}")
        except (OSError, UnicodeDecodeError, pd.errors.ParserError) as e:
            logger.error(f"Error reading {spec.path}: {str(e)}")
            raise IngestError(f"Cannot read input file {spec.path}: {str(e)}")

        # Rows with fields beyond the expected layout are malformed.
        extra = frame[OVERFLOW_COLUMN].notna().to_numpy()
        frame = frame[columns]

        numeric = frame.apply(
            lambda column: pd.to_numeric(column.astype(str).str.strip(), errors="coerce")
        )
        valid = np.isfinite(numeric.to_numpy(dtype=float)).all(axis=1) & ~extra
        self.skipped_rows = len(self._bad_lines) + int((~valid).sum())
        rows = numeric[valid]
        if rows.empty:
            raise EmptyInputError(f"No valid rows in input file: {spec.path}")
        if self.skipped_rows:
            logger.warning(f"Skipped {self.skipped_rows} malformed row(s) in {spec.path}")

        timestamps: Optional[np.ndarray] = None
        if spec.format == "csv_time_price":
            timestamps = rows["timestamp"].to_numpy(dtype=float)
            if np.any(np.diff(timestamps) < 0):
                logger.warning(f"Timestamps in {spec.path} are not monotone; dropping them")
                timestamps = None
                self.timestamps_dropped = True

        series = TickSeries(
            prices=rows["price"].to_numpy(dtype=float),
            timestamps=timestamps,
            label=os.path.basename(spec.path),
        )
        logger.info(f"Loaded {len(series)} ticks from {spec.path}")
        return series


def ingest(spec: IngestSpec) -> TickSeries:
    """Read a tick file; malformed rows are skipped and logged.

    Args:
        spec: Path, column layout, delimiter and header flag.

    Returns:
        TickSeries: Prices in file order.
    """
    return TickLoader().load(spec)


def write_series(series: TickSeries, path: str, precision: Optional[int] = None,
                 delimiter: str = ",") -> None:
    """Write a series as a headerless price file readable by ``ingest``.

    Prices only when the series has no timestamps, otherwise
    ``timestamp<delimiter>price`` rows.

    Args:
        series: Series to write.
        path: Output file.
        precision: Significant digits (default ``Config.SERIES_PRECISION``).
        delimiter: Column separator.
    """
    digits = precision or Config.SERIES_PRECISION
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    if series.timestamps is None:
        np.savetxt(path, series.prices, fmt=f"%.{digits}g")
    else:
        np.savetxt(path, np.column_stack([series.timestamps, series.prices]),
                   fmt=["%.17g", f"%.{digits}g"], delimiter=delimiter)
    logger.info(f"Wrote {len(series)} ticks to {path}")
