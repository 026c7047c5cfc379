"""Simulation and verification tools for the skew Brownian flow and its lenses."""

__version__ = "0.1.0"
