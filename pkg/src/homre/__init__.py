"""Matching and membership for homogeneous regular patterns."""

__version__ = "0.1.0"
