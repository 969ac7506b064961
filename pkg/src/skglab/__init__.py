"""Stochastic Kronecker graph generation, closed-form predictions and analysis."""

__version__ = "0.1.0"
