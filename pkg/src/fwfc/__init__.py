"""Camouflaged moving-foreground detection by likelihood fusion over
stationary wavelet bands."""

__version__ = "0.1.0"
