"""Tests for structured logging."""
import json
import logging

import pytest

from src.monitoring.logging import JsonFormatter, StructuredLogger, experiment_id_ctx, trial_id_ctx, with_logging


def make_record(message="hello", **extra):
    record = logging.LogRecord("mamppi.test", logging.INFO, __file__, 1, message, None, None)
    for key, value in extra.items():
        setattr(record, key, value)
    return record


def test_json_formatter_fields():
    """Test the fixed fields and pass-through of extras."""
    payload = json.loads(JsonFormatter().format(make_record(step=4)))
    assert payload["message"] == "hello"
    assert payload["level"] == "INFO"
    assert payload["logger"] == "mamppi.test"
    assert payload["step"] == 4
    assert "experiment_id" not in payload


def test_json_formatter_run_context():
    """Test that experiment and trial ids from context are stamped on records."""
    token_e = experiment_id_ctx.set("abc123")
    token_t = trial_id_ctx.set(2)
    try:
        payload = json.loads(JsonFormatter().format(make_record()))
    finally:
        experiment_id_ctx.reset(token_e)
        trial_id_ctx.reset(token_t)
    assert payload["experiment_id"] == "abc123"
    assert payload["trial_id"] == 2


def test_structured_logger_extras(caplog):
    """Test that keyword fields reach the log record."""
    with caplog.at_level(logging.INFO, logger="mamppi.test"):
        StructuredLogger("mamppi.test").info("memory updated", size=3)
    assert caplog.records[0].size == 3


def test_with_logging_reraises(caplog):
    """Test that failures are logged and propagated."""
    @with_logging
    def broken():
        raise RuntimeError("boom")

    with caplog.at_level(logging.ERROR):
        with pytest.raises(RuntimeError):
            broken()
    assert caplog.records[-1].error == "boom"
    assert caplog.records[-1].status == "error"


def test_with_logging_uses_caller_module_logger(caplog):
    """Test that decorated functions log under their own module, not a package-wide logger."""
    @with_logging
    def compute():
        return 5

    with caplog.at_level(logging.DEBUG, logger=__name__):
        assert compute() == 5
    assert [r.name for r in caplog.records] == [__name__, __name__]
    assert caplog.records[-1].status == "success"
