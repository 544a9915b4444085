"""Mordell-Weil ranks of elliptic curves over function fields via their elliptic surfaces."""

__version__ = "0.1.0"
