"""Configuration utilities for the application."""

import os
from typing import Dict, Any, Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class Config:
    """Application configuration class."""

    # Logging settings
    LOG_LEVEL = os.getenv("PUCK_LOG_LEVEL", "INFO").upper()
    RUN_LOG_PATH = os.getenv("PUCK_RUN_LOG") or None

    # Execution settings
    MAX_WORKERS = int(os.getenv("PUCK_MAX_WORKERS", "1"))

    # Output settings
    PLOT_PRECISION = int(os.getenv("PUCK_PLOT_PRECISION", "12"))
    SERIES_PRECISION = int(os.getenv("PUCK_SERIES_PRECISION", "17"))

    @classmethod
    def validate(cls) -> Optional[str]:
        """Validate configuration.

        Returns:
            Optional[str]: Error message if validation fails, None otherwise.
        """
        if cls.LOG_LEVEL not in LOG_LEVELS:
            return f"Unsupported log level: {cls.LOG_LEVEL}"

        if cls.MAX_WORKERS < 1:
            return f"PUCK_MAX_WORKERS must be at least 1, got {cls.MAX_WORKERS}"

        if not 1 <= cls.PLOT_PRECISION <= 17 or not 1 <= cls.SERIES_PRECISION <= 17:
            return "Output precision must be between 1 and 17 significant digits."

        return None

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Convert configuration to dictionary.

        Returns:
            Dict[str, Any]: Configuration dictionary.
        """
        return {
            "log_level": cls.LOG_LEVEL,
            "run_log_path": cls.RUN_LOG_PATH,
            "max_workers": cls.MAX_WORKERS,
            "plot_precision": cls.PLOT_PRECISION,
            "series_precision": cls.SERIES_PRECISION,
        }
