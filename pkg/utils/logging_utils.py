"""
Logging Utilities

Error-id logging for failed realizations and stage-labelled loggers for the
solver pipeline, so a failure in a long sweep can be traced back to its seed.
"""
import uuid
import logging
import traceback
from typing import Any, Optional

logger = logging.getLogger(__name__)


def get_error_id() -> str:
    """
    Generate unique error ID for tracking

    Returns:
        8-character error ID
    """
    return str(uuid.uuid4())[:8]


def format_context(context: dict) -> str:
    """
    Render a context dict as `key=value` pairs in a stable order

    Args:
        context: Context dictionary

    Returns:
        Single-line string
    """
    return " ".join(f"{k}={context[k]!r}" for k in sorted(context))


def log_error_with_id(
    logger_instance: logging.Logger,
    message: str,
    exception: Optional[Exception] = None,
    context: Optional[dict] = None,
    include_trace: bool = False
) -> str:
    """
    Log error with a unique error ID

    Args:
        logger_instance: Logger to use
        message: Error message
        exception: Optional exception object
        context: Optional context dictionary
        include_trace: Whether to include full stack trace

    Returns:
        Error ID for tracking
    """
    error_id = get_error_id()

    if exception:
        exception_type = type(exception).__name__
        logger_instance.error(f"[{error_id}] {message}: {exception_type}: {exception}")
    else:
        logger_instance.error(f"[{error_id}] {message}")

    if context:
        logger_instance.debug(f"[{error_id}] Context: {format_context(context)}")

    if include_trace or logger_instance.isEnabledFor(logging.DEBUG):
        if exception:
            trace = "".join(
                traceback.format_exception(type(exception), exception, exception.__traceback__)
            )
            logger_instance.debug(f"[{error_id}] Full trace:\n{trace}")

    return error_id


def log_realization_error(
    logger_instance: logging.Logger,
    scheme: str,
    index: int,
    seed: int,
    exception: Exception
) -> str:
    """
    Log a failed realization with standardized format

    Args:
        logger_instance: Logger to use
        scheme: Scheme being evaluated
        index: Realization index
        seed: Realization seed
        exception: Exception that occurred

    Returns:
        Error ID for tracking
    """
    message = f"Realization {index} failed for scheme {scheme} (seed {seed})"
    context = {
        "scheme": scheme,
        "index": index,
        "seed": seed,
    }
    return log_error_with_id(logger_instance, message, exception=exception, context=context)


class StageLogger:
    """
    Wrapper around logging.Logger that prefixes every message with a stage label
    """

    def __init__(self, logger_instance: logging.Logger, stage: str):
        self._logger = logger_instance
        self._stage = stage

    @property
    def stage(self) -> str:
        return self._stage

    def _label(self, message: str) -> str:
        return f"[{self._stage}] {message}"

    def debug(self, message: str, *args: Any, **kwargs: Any):
        self._logger.debug(self._label(message), *args, **kwargs)

    def info(self, message: str, *args: Any, **kwargs: Any):
        self._logger.info(self._label(message), *args, **kwargs)

    def warning(self, message: str, *args: Any, **kwargs: Any):
        self._logger.warning(self._label(message), *args, **kwargs)

    def error(self, message: str, *args: Any, **kwargs: Any):
        self._logger.error(self._label(message), *args, **kwargs)

    def isEnabledFor(self, level: int) -> bool:
        return self._logger.isEnabledFor(level)


def get_stage_logger(name: str, stage: str) -> StageLogger:
    """
    Get a stage-labelled logger instance

    Args:
        name: Logger name (usually __name__)
        stage: Stage label, e.g. "association"

    Returns:
        StageLogger instance
    """
    return StageLogger(logging.getLogger(name), stage)
