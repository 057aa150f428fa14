"""Logging utilities for the application."""

import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, Optional

from src.utils.config import Config

# Configure logging
logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.StreamHandler()
    ]
)

logger = logging.getLogger("puck")


def log_run(command: str, details: Optional[Dict[str, Any]] = None,
            log_file: Optional[str] = None) -> None:
    """Record a CLI run in the run-history file.

    Args:
        command: Name of the subcommand that ran.
        details: Additional details about the run (arguments, outputs, status).
        log_file: History file; defaults to ``Config.RUN_LOG_PATH``. Nothing is
            written when neither is set.
    """
    log_entry = {
        "timestamp": datetime.now().isoformat(),
        "command": command,
        "details": details or {}
    }

    log_file = log_file or Config.RUN_LOG_PATH
    if log_file:
        try:
            existing_logs = []
            if os.path.exists(log_file):
                with open(log_file, 'r') as file:
                    existing_logs = json.load(file)

            existing_logs.append(log_entry)

            with open(log_file, 'w') as file:
                json.dump(existing_logs, file, indent=2, default=str)
        except Exception as e:
            logger.error(f"Error writing run history: {str(e)}")

    logger.info(f"Run: {command} - {details}")


def get_run_logs(limit: int = 100, log_file: Optional[str] = None) -> list:
    """Get run-history records.

    Args:
        limit: Maximum number of records to retrieve.
        log_file: History file; defaults to ``Config.RUN_LOG_PATH``.

    Returns:
        list: Records, newest first.
    """
    log_file = log_file or Config.RUN_LOG_PATH
    try:
        if log_file and os.path.exists(log_file):
            with open(log_file, 'r') as file:
                logs = json.load(file)

            # Sort by timestamp in descending order
            logs = sorted(reversed(logs), key=lambda x: x["timestamp"], reverse=True)

            return logs[:limit]
    except Exception as e:
        logger.error(f"Error reading run history: {str(e)}")

    return []
