"""Computational tools for the classical Lagrange and Markov spectra."""

__version__ = "0.1.0"
