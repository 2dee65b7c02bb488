"""
Tracing for mamppi.
Wraps OpenTelemetry so episodes, trials and experiments appear as spans.
"""
import logging
from functools import wraps
from typing import Optional

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor

logger = logging.getLogger(__name__)

_configured = False


def configure_tracing(enabled: bool, service_name: str = "mamppi") -> None:
    """Install an SDK tracer provider exporting to the console.

    Without this call the OpenTelemetry no-op provider is in effect and spans
    cost next to nothing.
    """
    global _configured
    if not enabled or _configured:
        return
    provider = TracerProvider(resource=Resource.create({"service.name": service_name}))
    provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter()))
    trace.set_tracer_provider(provider)
    _configured = True
    logger.info("Tracing enabled", extra={"service": service_name})


def with_tracing(name: Optional[str] = None):
    """Decorator to run a function inside a span."""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            span_name = name or func.__name__
            tracer = trace.get_tracer(func.__module__)

            with tracer.start_as_current_span(span_name) as span:
                span.set_attribute("function.name", func.__name__)
                try:
                    result = func(*args, **kwargs)
                    span.set_attribute("function.status", "success")
                    return result
                except Exception as e:
                    span.set_attribute("function.status", "error")
                    span.set_attribute("error.message", str(e))
                    raise

        return wrapper
    return decorator
