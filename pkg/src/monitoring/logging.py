"""
Logging configuration for mamppi.
Implements structured JSON logging stamped with experiment and trial ids.
"""
import json
import logging
import sys
from contextvars import ContextVar
from datetime import datetime, timezone
from functools import wraps
from typing import Any, Dict, Optional

# Context variables for run tracking
experiment_id_ctx: ContextVar[Optional[str]] = ContextVar("experiment_id", default=None)
trial_id_ctx: ContextVar[Optional[int]] = ContextVar("trial_id", default=None)

# Attributes every LogRecord carries; anything else came in through ``extra``
_RESERVED = set(vars(logging.LogRecord("", 0, "", 0, "", None, None))) | {"message", "asctime"}


class JsonFormatter(logging.Formatter):
    """Formatter that outputs one JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        """Format the log record as JSON."""
        log_data: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "message": record.getMessage(),
            "logger": record.name,
        }
        experiment_id = experiment_id_ctx.get()
        if experiment_id is not None:
            log_data["experiment_id"] = experiment_id
        trial_id = trial_id_ctx.get()
        if trial_id is not None:
            log_data["trial_id"] = trial_id

        for key, value in vars(record).items():
            if key not in _RESERVED and not key.startswith("_"):
                log_data[key] = value

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


class StructuredLogger:
    """Logger that outputs structured JSON logs with keyword fields."""

    def __init__(self, name: str, level: Optional[int] = None):
        self.logger = logging.getLogger(name)
        if level is not None:
            self.logger.setLevel(level)

    def _log(self, level: int, message: str, **kwargs):
        """Internal logging method."""
        self.logger.log(level, message, extra=kwargs)

    def info(self, message: str, **kwargs):
        """Log at INFO level."""
        self._log(logging.INFO, message, **kwargs)

    def error(self, message: str, **kwargs):
        """Log at ERROR level."""
        self._log(logging.ERROR, message, **kwargs)

    def warning(self, message: str, **kwargs):
        """Log at WARNING level."""
        self._log(logging.WARNING, message, **kwargs)

    def debug(self, message: str, **kwargs):
        """Log at DEBUG level."""
        self._log(logging.DEBUG, message, **kwargs)


def configure_logging(level: str = "INFO", json_output: bool = True) -> None:
    """Install a single stderr handler on the root logger."""
    root = logging.getLogger()
    for handler in root.handlers[:]:
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    if json_output:
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level.upper())


def with_logging(func):
    """Decorator logging entry, completion and failure of a function."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        log = StructuredLogger(func.__module__)
        log.debug(f"Calling {func.__name__}", function=func.__name__)
        try:
            result = func(*args, **kwargs)
            log.debug(f"Completed {func.__name__}", function=func.__name__, status="success")
            return result
        except Exception as e:
            log.error(
                f"Error in {func.__name__}",
                function=func.__name__,
                error=str(e),
                status="error",
            )
            raise

    return wrapper

