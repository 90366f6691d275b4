"""Collapse-noise heating rates.

All three rates share the prefactor ``(3/4) * lambda * hbar**2 / (r_C**2 * m_N**2)``,
which is the power deposited per unit mass. Total power and power density
follow by multiplying with mass or mass density.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .units import ROUNDED, PhysicalConstants

__all__ = [
    "NoiseParams",
    "DEFAULT_LAMBDA",
    "DEFAULT_R_C",
    "heating_per_mass",
    "total_power",
    "volumetric_heating",
]

DEFAULT_LAMBDA = 1e-8  # s^-1
DEFAULT_R_C = 1e-7  # m (1e-5 cm)


@dataclass(frozen=True)
class NoiseParams:
    """Collapse coupling ``lam`` (1/s) and correlation length ``r_C`` (m)."""

    lam: float = DEFAULT_LAMBDA
    r_C: float = DEFAULT_R_C

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"collapse rate must be >= 0, got {self.lam}")
        if not self.r_C > 0:
            raise ValueError(f"correlation length must be > 0, got {self.r_C}")

    def with_lambda(self, lam: float) -> "NoiseParams":
        return replace(self, lam=lam)

    def with_r_C(self, r_C: float) -> "NoiseParams":
        return replace(self, r_C=r_C)


def heating_per_mass(params: NoiseParams, constants: PhysicalConstants = ROUNDED) -> float:
    """Power deposited per unit mass, in W/kg.

    With the default parameters and the rounded constants this is about
    3.2e-9 W/kg, i.e. roughly 20 MeV per gram per second.
    """
    return 0.75 * params.lam * constants.hbar**2 / (params.r_C**2 * constants.m_N**2)


def total_power(
    params: NoiseParams, total_mass: float, constants: PhysicalConstants = ROUNDED
) -> float:
    """Secular energy gain rate (W) of a body of mass ``total_mass`` (kg)."""
    if total_mass < 0:
        raise ValueError(f"mass must be >= 0, got {total_mass}")
    return heating_per_mass(params, constants) * total_mass


def volumetric_heating(
    params: NoiseParams, density: float, constants: PhysicalConstants = ROUNDED
) -> float:
    """Heating power density Q (W/m^3) for a uniform body of ``density`` kg/m^3."""
    if not density > 0:
        raise ValueError(f"density must be > 0, got {density}")
    return heating_per_mass(params, constants) * density
