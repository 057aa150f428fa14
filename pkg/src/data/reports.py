"""Line-delimited JSON run reports."""

import json
import os
import sys
from typing import Any, Dict, IO, List, Optional, Tuple

from src import __version__
from src.analysis.scanner import WindowRecord
from src.estimation.grid import FitResult
from src.utils.errors import IngestError
from src.utils.logger import logger

HEADER = "header"
FIT = "fit"
WINDOW = "window"


def _encode(record: Dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, default=str)


class ReportWriter:
    """Stream report records to a file or stdout, one JSON object per line.

    The first line is a header with the command, the effective run
    configuration and the package version. No wall-clock data is written,
    so identical invocations produce identical reports.
    """

    def __init__(self, path: Optional[str], command: str,
                 config: Optional[Dict[str, Any]] = None):
        """Open the report and write its header.

        Args:
            path: Output file; ``None`` or ``-`` writes to stdout.
            command: Subcommand that produced the report.
            config: Effective configuration echoed into the header.
        """
        self.path = None if path in (None, "-") else path
        self.count = 0
        if self.path:
            directory = os.path.dirname(self.path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            self._handle: IO[str] = open(self.path, "w", encoding="utf-8")
        else:
            self._handle = sys.stdout
        self._write({
            "record": HEADER,
            "command": command,
            "config": config or {},
            "version": __version__,
        })

    def _write(self, record: Dict[str, Any]) -> None:
        self._handle.write(_encode(record) + "\n")

    def write(self, kind: str, payload: Dict[str, Any]) -> None:
        """Append one record of the given kind."""
        self._write({"record": kind, **payload})
        self.count += 1

    def write_fit(self, fit: FitResult) -> None:
        self.write(FIT, fit.to_dict())

    def write_window(self, record: WindowRecord) -> None:
        self.write(WINDOW, record.to_dict())

    def close(self) -> None:
        if self.path:
            self._handle.close()
            logger.info(f"Wrote report with {self.count} record(s) to {self.path}")
        else:
            self._handle.flush()

    def __enter__(self) -> "ReportWriter":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


def _decode(record: Dict[str, Any]) -> Any:
    kind = record.get("record")
    payload = {key: value for key, value in record.items() if key != "record"}
    if kind == FIT:
        return FitResult.from_dict(payload)
    if kind == WINDOW:
        return WindowRecord.from_dict(payload)
    return record


def read_report(path: str) -> Tuple[Dict[str, Any], List[Any]]:
    """Parse a report written by ``ReportWriter``.

    Args:
        path: Report file.

    Returns:
        Tuple[Dict[str, Any], List[Any]]: The header and the records; fit and
        window records come back as ``FitResult`` and ``WindowRecord``, any
        other record as its dictionary.
    """
    try:
        with open(path, "r", encoding="utf-8") as file:
            lines = [line for line in file if line.strip()]
    except OSError as e:
        raise IngestError(f"Cannot read report {path}: {str(e)}")
    if not lines:
        raise IngestError(f"Report {path} is empty")

    try:
        header = json.loads(lines[0])
        records = [_decode(json.loads(line)) for line in lines[1:]]
    except (ValueError, KeyError) as e:
        raise IngestError(f"Malformed report {path}: {str(e)}")
    if header.get("record") != HEADER:
        raise IngestError(f"Report {path} does not start with a header record")
    return header, records
