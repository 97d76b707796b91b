"""
Logging configuration for the Bell-diagonal separability lab
"""

import logging
import os
from typing import Optional

try:
    from .config import LOGGING_CONFIG, PATHS
except ImportError:
    from config import LOGGING_CONFIG, PATHS


def setup_logger(name: str = "BsaLab", log_file: str = PATHS["log_file"]) -> logging.Logger:
    """
    Setup and configure logger for the application

    Args:
        name: Logger name
        log_file: File receiving every record at the configured level

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, LOGGING_CONFIG["level"].upper(), logging.INFO))

    if logger.handlers:
        return logger

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    try:
        os.makedirs(os.path.dirname(log_file), exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logger.level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    except OSError as e:
        logger.warning(f"Log file {log_file} unavailable, logging to stderr only: {e}")

    return logger


logger = setup_logger()


def log_info(message: str) -> None:
    """Log info message"""
    logger.info(message)


def log_warning(message: str) -> None:
    """Log warning message"""
    logger.warning(message)


def log_error(message: str, exception: Optional[Exception] = None) -> None:
    """Log error message with optional exception details"""
    if exception:
        logger.error(f"{message} - Exception: {str(exception)}", exc_info=True)
    else:
        logger.error(message)


def log_debug(message: str) -> None:
    """Log debug message"""
    logger.debug(message)
