"""Finite-difference solver for the steady conduction problem on 3D grids."""

from .domain import (
    BOUNDARY,
    EXTERIOR,
    INTERIOR,
    MIN_RESOLUTION,
    Box,
    CustomMask,
    Ellipsoid,
    FiniteCylinder,
    GridDomain,
    Slab,
    Sphere,
    build_domain,
)
from .export import write_field_csv, write_profile_csv
from .solver import BOUNDARY_SCHEMES, TemperatureField, center_profile, laplacian_system, solve
from .study import ConvergenceStudy, convergence_study, fitted_order

__all__ = [
    "BOUNDARY",
    "BOUNDARY_SCHEMES",
    "Box",
    "ConvergenceStudy",
    "CustomMask",
    "EXTERIOR",
    "Ellipsoid",
    "FiniteCylinder",
    "GridDomain",
    "INTERIOR",
    "MIN_RESOLUTION",
    "Slab",
    "Sphere",
    "TemperatureField",
    "build_domain",
    "center_profile",
    "convergence_study",
    "fitted_order",
    "laplacian_system",
    "solve",
    "write_field_csv",
    "write_profile_csv",
]
