"""Corrugated all-metal Vivaldi phased-array toolkit."""

__version__ = "0.1.0"
