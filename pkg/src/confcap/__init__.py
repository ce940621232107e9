"""Conformal capacities of planar condensers, quadrilateral moduli and
hyperbolic perimeters."""

__version__ = "0.1.0"
