import logging
import os
from typing import List, Optional


def _optional_int(value: Optional[str]) -> Optional[int]:
    if value is None or value.strip() == "" or value.strip().lower() == "unbounded":
        return None
    return int(value)


class CowsConfig:
    """Shared configuration for the library and the command-line driver"""

    class Explorer:
        """State-space exploration bounds"""
        MAX_STATES = 100_000

        # None means unbounded depth
        MAX_DEPTH: Optional[int] = None

        WORKERS = 1

        @staticmethod
        def max_states() -> int:
            """Default state bound, re-read from the environment at call time."""
            return int(os.getenv("COWS_ADAPT_MAX_STATES", CowsConfig.Explorer.MAX_STATES))

        @staticmethod
        def max_depth() -> Optional[int]:
            raw = os.getenv("COWS_ADAPT_MAX_DEPTH")
            if raw is None:
                return CowsConfig.Explorer.MAX_DEPTH
            return _optional_int(raw)

        @staticmethod
        def workers() -> int:
            return int(os.getenv("COWS_ADAPT_WORKERS", CowsConfig.Explorer.WORKERS))

    class Logging:
        """Logging configuration"""
        LEVEL = "WARNING"
        # Diagnostics stream; WARNING is rendered as WARN
        FORMAT = "%(levelname)s: %(message)s"
        FILE_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
        LOG_FILE: Optional[str] = None

        @staticmethod
        def level() -> str:
            return os.getenv("COWS_ADAPT_LOG_LEVEL", CowsConfig.Logging.LEVEL)

        @staticmethod
        def log_file() -> Optional[str]:
            return os.getenv("COWS_ADAPT_LOG_FILE") or CowsConfig.Logging.LOG_FILE

    class Report:
        """Structured run report"""
        SCHEMA_VERSION = 1

    @classmethod
    def config_errors(cls) -> List[str]:
        """Return every configuration problem found."""
        errors = []

        try:
            if cls.Explorer.max_states() <= 0:
                errors.append("COWS_ADAPT_MAX_STATES must be positive")
        except ValueError:
            errors.append("COWS_ADAPT_MAX_STATES must be an integer")

        try:
            depth = cls.Explorer.max_depth()
            if depth is not None and depth <= 0:
                errors.append("COWS_ADAPT_MAX_DEPTH must be positive or 'unbounded'")
        except ValueError:
            errors.append("COWS_ADAPT_MAX_DEPTH must be an integer or 'unbounded'")

        try:
            if cls.Explorer.workers() < 1:
                errors.append("COWS_ADAPT_WORKERS must be at least 1")
        except ValueError:
            errors.append("COWS_ADAPT_WORKERS must be an integer")

        if not isinstance(logging.getLevelName(cls.Logging.level().upper()), int):
            errors.append(f"COWS_ADAPT_LOG_LEVEL {cls.Logging.level()!r} is not a logging level")

        return errors

    @classmethod
    def validate_config(cls) -> bool:
        """Validate configuration and return True if valid"""
        errors = cls.config_errors()
        if errors:
            logging.getLogger(__name__).error("Configuration errors: %s", "; ".join(errors))
            return False
        return True
