"""Tests for tracing helpers."""
import pytest

from src.monitoring.tracing import configure_tracing, with_tracing


def test_with_tracing_passes_results_and_errors():
    """Test that the span wrapper is transparent."""
    @with_tracing("double")
    def double(x):
        return 2 * x

    @with_tracing()
    def broken():
        raise ValueError("bad")

    assert double(4) == 8
    assert double.__name__ == "double"
    with pytest.raises(ValueError):
        broken()


def test_configure_tracing_disabled_is_noop(mocker):
    """Test that disabled tracing leaves the global provider alone."""
    setter = mocker.patch("src.monitoring.tracing.trace.set_tracer_provider")
    configure_tracing(False)
    setter.assert_not_called()
