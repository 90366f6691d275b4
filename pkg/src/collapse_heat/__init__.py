"""Temperature floors of solid bodies heated by collapse-model noise.

Collapse models predict a small, steady heating of all matter. In a body whose
surface is held cold, that heat has to be conducted out, and because thermal
conductivity vanishes as T -> 0 the interior cannot cool below a floor that
grows with the body size. This package computes that floor in closed form
for spheres, infinite cylinders, slabs and a cube estimate, solves the same
problem on 3D grids for other shapes, and compares it with measured
cryogenic temperatures.
"""

from .analytic import AnalyticCase, ProfileResult, central_temperature, lower_bound
from .constraints import ExperimentRecord, bundled_experiments, evaluate, radiogenic_budget
from .exceptions import ConvergenceError, UnsupportedCaseError, ValidityWarning
from .materials import COPPER_RRR30, TORLON_4203, Material, conductivity, default_registry
from .noise import NoiseParams, heating_per_mass, total_power, volumetric_heating
from .units import PRECISE, ROUNDED, PhysicalConstants, convert

__version__ = "0.1.0"

__all__ = [
    "AnalyticCase",
    "COPPER_RRR30",
    "ConvergenceError",
    "ExperimentRecord",
    "Material",
    "NoiseParams",
    "PRECISE",
    "PhysicalConstants",
    "ProfileResult",
    "ROUNDED",
    "TORLON_4203",
    "UnsupportedCaseError",
    "ValidityWarning",
    "bundled_experiments",
    "central_temperature",
    "conductivity",
    "convert",
    "default_registry",
    "evaluate",
    "heating_per_mass",
    "lower_bound",
    "radiogenic_budget",
    "total_power",
    "volumetric_heating",
]
