"""Logging configuration for byzgossip.

Records carry a ``run`` field; the sweep binds it to the run stem with
``logger.contextualize`` so interleaved worker output stays attributable.
"""

import sys
from pathlib import Path

from loguru import logger

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<magenta>{extra[run]}</magenta> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - "
    "<level>{message}</level>"
)
FILE_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {extra[run]} | {name}:{function} - {message}"
)

_level = "INFO"


def setup_logging(log_level: str = "INFO", log_file: str | None = None) -> None:
    """Configure loguru sinks.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional path to log file
    """
    global _level
    _level = log_level.upper()

    logger.remove()
    logger.configure(extra={"run": "-"})

    # stdout is reserved for reports
    logger.add(sys.stderr, format=CONSOLE_FORMAT, level=_level, colorize=True)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_path,
            format=FILE_FORMAT,
            level=_level,
            rotation="10 MB",
            retention="30 days",
            compression="zip",
            enqueue=True,
        )

    logger.debug(f"Logging initialized at {_level} level")


def current_level() -> str:
    """Level passed to the last ``setup_logging`` call."""
    return _level


def setup_worker_logging(log_level: str) -> None:
    """Process-pool initializer: spawned workers start with loguru's default sink."""
    setup_logging(log_level)
