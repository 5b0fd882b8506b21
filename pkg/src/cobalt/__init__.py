"""Exact toolkit for two-dimensional cobordism theories with rational generating functions."""

__version__ = "0.1.0"
