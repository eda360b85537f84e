"""
Standardized logging for the PSC toolkit.

Every module obtains its logger through get_logger() so that console output
from the codec, the samplers and the CLI shares one format. The level can be
set globally through the PSC_LOG_LEVEL environment variable or switched at
runtime with set_verbosity().
"""

import logging
import os
import sys
from typing import Optional


# ANSI color codes for terminal output
class Colors:
    HEADER = '\033[95m'
    OKBLUE = '\033[94m'
    OKCYAN = '\033[96m'
    OKGREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'


LOG_FORMAT = '%(asctime)s | %(levelname)s | %(name)s | %(message)s'
ROOT_LOGGER_NAME = 'psc'


class ColoredFormatter(logging.Formatter):
    """Formatter that colors the level name."""

    LEVEL_COLORS = {
        logging.DEBUG: Colors.OKCYAN,
        logging.INFO: Colors.OKGREEN,
        logging.WARNING: Colors.WARNING,
        logging.ERROR: Colors.FAIL,
        logging.CRITICAL: Colors.FAIL + Colors.BOLD,
    }

    def format(self, record: logging.LogRecord) -> str:
        color = self.LEVEL_COLORS.get(record.levelno, '')
        record = logging.makeLogRecord(record.__dict__)
        record.levelname = f"{color}{record.levelname}{Colors.ENDC}"
        return super().format(record)


def level_from_env(default: int = logging.INFO) -> int:
    """Resolve the log level from PSC_LOG_LEVEL, falling back to default."""
    name = os.environ.get('PSC_LOG_LEVEL', '').strip().upper()
    if not name:
        return default
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else default


def get_logger(
    name: str,
    level: Optional[int] = None,
    log_file: Optional[str] = None,
    use_colors: bool = True
) -> logging.Logger:
    """
    Get a configured logger instance.

    Args:
        name: The name of the logger (usually __name__).
        level: The logging level; defaults to PSC_LOG_LEVEL or INFO.
        log_file: Optional path to a log file (always written at DEBUG).
        use_colors: Whether to use colored output in the console.

    Returns:
        A configured logging.Logger instance.
    """
    logger = logging.getLogger(name)

    # Prevent adding handlers multiple times
    if logger.handlers:
        return logger

    level = level_from_env() if level is None else level
    logger.setLevel(level)
    logger.propagate = False

    # Diagnostics go to stderr so that command output on stdout stays parseable
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)

    if use_colors and sys.stderr.isatty():
        formatter = ColoredFormatter(fmt=LOG_FORMAT, datefmt='%H:%M:%S')
    else:
        formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt='%H:%M:%S')

    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(
            logging.Formatter(fmt=LOG_FORMAT, datefmt='%Y-%m-%d %H:%M:%S')
        )
        logger.addHandler(file_handler)

    return logger


def set_verbosity(verbose: bool) -> None:
    """Switch every logger created through get_logger() to DEBUG or back."""
    level = logging.DEBUG if verbose else level_from_env()
    for logger in logging.Logger.manager.loggerDict.values():
        if not isinstance(logger, logging.Logger) or not logger.handlers:
            continue
        logger.setLevel(level)
        for handler in logger.handlers:
            if not isinstance(handler, logging.FileHandler):
                handler.setLevel(level)


# Default application logger
app_logger = get_logger(ROOT_LOGGER_NAME)
