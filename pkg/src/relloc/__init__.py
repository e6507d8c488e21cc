"""Relativistic localisation of classical elementary systems."""

__version__ = "0.1.0"
