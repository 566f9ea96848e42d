"""Verification toolkit for third-order Hankel determinant bounds."""

__version__ = "0.1.0"
