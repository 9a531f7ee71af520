"""Regularized extreme learning machines with l2 + l_{1/2} hybrid penalties."""

__version__ = "0.1.0"
