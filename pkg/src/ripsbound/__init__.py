"""Sphere complexes, boundary projections and connectivity audits for hyperbolic groups."""

__version__ = "0.1.0"
