"""Exact computations for ideals generated by three binary forms."""

__version__ = "0.1.0"
