"""Threshold networks of stock markets: threshold estimation by dynamic consistence."""

__version__ = "0.1.0"
