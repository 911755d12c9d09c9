import logging
import sys
from typing import Optional

from ..config import CowsConfig

_HANDLER_NAME = "cows-adapt-diagnostics"


def configure_logging(level: Optional[str] = None) -> None:
    """
    Install the diagnostics handler on the package logger.

    Diagnostics go to standard error, one ``WARN: ...`` line each. When
    ``COWS_ADAPT_LOG_FILE`` is set, everything is also written to that file.
    Calling this twice does not duplicate handlers.

    Args:
        level: Overrides ``COWS_ADAPT_LOG_LEVEL``
    """
    logging.addLevelName(logging.WARNING, "WARN")

    root = logging.getLogger("cows_adapt")
    root.setLevel((level or CowsConfig.Logging.level()).upper())

    for handler in list(root.handlers):
        if handler.get_name() in (_HANDLER_NAME, _HANDLER_NAME + "-file"):
            root.removeHandler(handler)
            handler.close()

    stream = logging.StreamHandler(sys.stderr)
    stream.set_name(_HANDLER_NAME)
    stream.setFormatter(logging.Formatter(CowsConfig.Logging.FORMAT))
    root.addHandler(stream)

    log_file = CowsConfig.Logging.log_file()
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.set_name(_HANDLER_NAME + "-file")
        file_handler.setFormatter(logging.Formatter(CowsConfig.Logging.FILE_FORMAT))
        root.addHandler(file_handler)
