"""Computational core for capillary minimal surfaces given by Weierstrass data."""

__version__ = "0.1.0"
