"""Exact combinatorics of order preserving limit algebra presentations."""

__version__ = "0.1.0"
