"""Exact symbolic engine for cluster varieties on surfaces and the symplectic double."""

__version__ = "0.1.0"
