"""Offshore wind farm maintenance scheduling and benchmarking toolkit."""

__version__ = "0.1.0"
