"""Spectral convolution on the dyad orbifold T^2 / S_2."""

__version__ = "0.1.0"
