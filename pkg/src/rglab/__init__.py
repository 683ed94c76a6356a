"""Exact and numerical checks of time-derivative identities for Schrodinger dynamics."""

__version__ = "0.1.0"
