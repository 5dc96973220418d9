"""
Centralized Logging Configuration

Provides consistent logging configuration across the CLI, the harness and its workers.
"""
import logging
import logging.config
from pathlib import Path
from typing import Optional

from config.constants import LogConfig
from config.settings import get_settings


def build_logging_config(log_dir: str, log_level: str) -> dict:
    """
    Build the dictConfig mapping

    Args:
        log_dir: Directory for rotating log files
        log_level: Root log level

    Returns:
        dictConfig-compatible dictionary
    """
    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'default': {
                'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
                'datefmt': '%Y-%m-%d %H:%M:%S',
            },
            'detailed': {
                'format': '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s',
                'datefmt': '%Y-%m-%d %H:%M:%S',
            },
        },
        'handlers': {
            'console': {
                'class': 'logging.StreamHandler',
                'level': 'WARNING',
                'formatter': 'default',
                'stream': 'ext://sys.stderr',
            },
            'file': {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': 'INFO',
                'formatter': 'detailed',
                'filename': str(Path(log_dir) / 'app.log'),
                'maxBytes': LogConfig.MAX_LOG_SIZE_BYTES,
                'backupCount': LogConfig.LOG_BACKUP_COUNT,
                'encoding': 'utf-8',
            },
            'error_file': {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': 'ERROR',
                'formatter': 'detailed',
                'filename': str(Path(log_dir) / 'error.log'),
                'maxBytes': LogConfig.MAX_LOG_SIZE_BYTES,
                'backupCount': LogConfig.LOG_BACKUP_COUNT,
                'encoding': 'utf-8',
            },
        },
        'root': {
            'level': log_level,
            'handlers': ['console', 'file', 'error_file'],
        },
        'loggers': {
            'py.warnings': {
                'level': 'WARNING',
                'handlers': ['file'],
                'propagate': False,
            },
        },
    }


def setup_logging(log_dir: Optional[str] = None, log_level: Optional[str] = None):
    """
    Setup centralized logging configuration

    Call this function once at process startup in main.py

    Args:
        log_dir: Override for LOG_DIR
        log_level: Override for LOG_LEVEL
    """
    settings = get_settings()
    directory = Path(log_dir or settings.log_dir)
    directory.mkdir(parents=True, exist_ok=True)
    logging.config.dictConfig(build_logging_config(str(directory), log_level or settings.log_level))
    logging.captureWarnings(True)
    logger = logging.getLogger(__name__)
    logger.info(f"✅ Logging configured (dir={directory})")


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured logger instance
    """
    return logging.getLogger(name)
