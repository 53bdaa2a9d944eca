"""
Logging set-up shared by the command line and the tests.
"""

import sys

from loguru import logger

LOG_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
)


def configure_logging(level: str = "INFO", debug: bool = False) -> int:
    """Replace the default sink with a stderr sink; returns the sink id."""
    logger.remove()
    return logger.add(
        sys.stderr,
        level="DEBUG" if debug else level.upper(),
        format=LOG_FORMAT,
        backtrace=debug,
        diagnose=debug,
    )
