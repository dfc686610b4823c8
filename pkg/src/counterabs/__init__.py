"""Compile parameterized-protocol specifications into counter abstractions."""

__version__ = "0.1.0"
