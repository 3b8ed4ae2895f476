"""Logging, configuration and output helpers."""
