"""Logging, metrics and tracing for mamppi."""
