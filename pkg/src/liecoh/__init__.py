"""Exact Lie algebra cohomology, higher-order brackets and Poisson structures."""

__version__ = "0.1.0"
