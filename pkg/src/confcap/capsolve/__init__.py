"""Finite-difference capacity oracle for planar condensers."""

from ._backend import NAME as BACKEND
from .grid import (
    DIRICHLET_0,
    DIRICHLET_1,
    INTERIOR,
    OUTSIDE,
    UNIT_DISK,
    Condenser,
    GridField,
    build_grid,
)
from .solver import estimate_capacity, solve_potential

__all__ = [
    "BACKEND",
    "Condenser",
    "DIRICHLET_0",
    "DIRICHLET_1",
    "GridField",
    "INTERIOR",
    "OUTSIDE",
    "UNIT_DISK",
    "build_grid",
    "estimate_capacity",
    "solve_potential",
]
