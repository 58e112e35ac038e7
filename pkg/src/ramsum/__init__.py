"""Generalized Ramanujan sums, explicit formulas over zeta zeros, and Bartz functions."""

__version__ = "0.1.0"
