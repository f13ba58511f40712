"""Exact 1-Wasserstein distances between univariate location-scale distributions."""

__version__ = "0.1.0"
