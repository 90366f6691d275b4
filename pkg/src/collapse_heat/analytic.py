"""Closed-form steady temperatures for bodies heated uniformly by collapse noise.

For ``k(T) = k0_hat * T**beta`` and uniform heating ``Q`` the one-dimensional
symmetric problems (sphere, infinite cylinder, slab) all integrate to

    T(r)**(1+beta) = T_s**(1+beta) + (1+beta) * Q * (L**2 - r**2) / (g * k0_hat)

with a shape factor ``g`` of 6 for the sphere, 4 for the infinite cylinder
(the sphere result with ``Q -> 3Q/2``) and 2 for the slab. The cube
estimate balances ``Q L^3`` against ``3 L k0 T_c^2`` and lands on the same
expression as the ``g = 6`` sphere with ``beta = 1``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import UnsupportedCaseError, ValidityWarning
from .materials import Material, check_validity
from .noise import NoiseParams, volumetric_heating
from .units import ROUNDED, PhysicalConstants

__all__ = [
    "AnalyticCase",
    "KINDS",
    "ProfileResult",
    "bound_coefficient",
    "central_temperature",
    "cube_central_temperature",
    "cube_theta",
    "cylinder_central_temperature",
    "cylinder_profile",
    "lower_bound",
    "profile",
    "sphere_central_temperature",
    "sphere_profile",
    "slab_profile",
    "temperature_at",
]

SHAPE_FACTOR = {
    "cube-estimate": 6.0,
    "sphere": 6.0,
    "infinite-cylinder": 4.0,
    "slab": 2.0,
}
KINDS = tuple(SHAPE_FACTOR)

# bodies smaller than this many correlation lengths are flagged
_SIZE_WARN_RATIO = 10.0


@dataclass(frozen=True)
class AnalyticCase:
    """Geometry for a closed-form solution.

    ``L`` is the cube side, the sphere or cylinder radius, or the slab
    half-thickness (m). ``T_s`` is the surface temperature (K).
    """

    kind: str
    L: float
    T_s: float = 0.0

    def __post_init__(self):
        if self.kind not in SHAPE_FACTOR:
            raise ValueError(f"unknown analytic geometry {self.kind!r}; expected one of {KINDS}")
        if not self.L > 0:
            raise ValueError(f"L must be > 0, got {self.L}")
        if not self.T_s >= 0:
            raise ValueError(f"T_s must be >= 0, got {self.T_s}")

    def scaled(self, factor: float) -> "AnalyticCase":
        return AnalyticCase(self.kind, self.L * factor, self.T_s)


@dataclass
class ProfileResult:
    """Temperatures sampled from the center outward."""

    radii: np.ndarray
    temperatures: np.ndarray
    T_c: float

    def __len__(self):
        return len(self.radii)


def _warn_size(L: float, params: NoiseParams) -> None:
    if L < _SIZE_WARN_RATIO * params.r_C:
        warnings.warn(
            f"body size {L:.3g} m is not much larger than r_C = {params.r_C:.3g} m; "
            "the thermalized-heating picture does not hold here",
            ValidityWarning,
            stacklevel=3,
        )


def _delta_u(case: AnalyticCase, material: Material, Q: float, r=0.0):
    """``T(r)**(1+beta) - T_s**(1+beta)``."""
    g = SHAPE_FACTOR[case.kind]
    r = np.asarray(r, dtype=float)
    return material.exponent * Q * (case.L**2 - r**2) / (g * material.k0_hat)


def _check_cube(case: AnalyticCase, material: Material) -> None:
    if material.beta != 1.0:
        raise UnsupportedCaseError(
            f"cube estimate needs a linear-law (beta = 1) material, {material.name} has beta = {material.beta}"
        )
    if case.T_s != 0.0:
        raise UnsupportedCaseError("cube estimate assumes T_s = 0; use the grid solver instead")


def cube_theta(
    material: Material, params: NoiseParams, constants: PhysicalConstants = ROUNDED
) -> float:
    """Dimensionless cube coefficient ``theta`` with ``T_c = theta * (L / r_C)`` K.

    ``theta = sqrt(lam * hbar**2 * rho / (4 * k0 * m_N**2))`` where ``k0`` is
    taken in W/(m K^2), i.e. multiplied by 1 K^2.
    """
    if material.beta != 1.0:
        raise UnsupportedCaseError("theta is only defined for beta = 1 materials")
    k0_K2 = material.k0_hat * constants.kelvin**2
    return float(np.sqrt(params.lam * constants.hbar**2 * material.rho / (4.0 * k0_K2 * constants.m_N**2)))


def cube_central_temperature(
    case: AnalyticCase, material: Material, params: NoiseParams, constants: PhysicalConstants = ROUNDED
) -> float:
    """Rough central temperature of a metal cube of side ``case.L`` with a 0 K surface."""
    _check_cube(case, material)
    _warn_size(case.L, params)
    T_c = cube_theta(material, params, constants) * case.L / params.r_C * constants.kelvin
    check_validity(material, T_c, "central temperature")
    return T_c


def central_temperature(
    case: AnalyticCase, material: Material, params: NoiseParams, constants: PhysicalConstants = ROUNDED
) -> float:
    """Central temperature for any analytic geometry (K)."""
    if case.kind == "cube-estimate":
        return cube_central_temperature(case, material, params, constants)
    _warn_size(case.L, params)
    Q = volumetric_heating(params, material.rho, constants)
    n = material.exponent
    T_c = float((case.T_s**n + _delta_u(case, material, Q)) ** (1.0 / n))
    check_validity(material, T_c, "central temperature")
    return T_c


def lower_bound(
    case: AnalyticCase, material: Material, params: NoiseParams, constants: PhysicalConstants = ROUNDED
) -> float:
    """Central temperature with the surface held at 0 K: the floor any real body sits above."""
    return central_temperature(AnalyticCase(case.kind, case.L, 0.0), material, params, constants)


def bound_coefficient(
    material: Material,
    params: NoiseParams,
    kind: str = "sphere",
    constants: PhysicalConstants = ROUNDED,
) -> tuple[float, float]:
    """Return ``(coefficient, exponent)`` with ``T_c >= coefficient * (L / r_C)**exponent`` K.

    For the sphere the coefficient is
    ``[(1+beta) / k0_hat * lam * hbar**2 * rho / (8 * m_N**2)]**(1/(1+beta))``
    and the exponent ``2 / (1+beta)``; ``r_C`` cancels from the coefficient.
    """
    if kind == "cube-estimate" and material.beta != 1.0:
        raise UnsupportedCaseError("cube estimate needs beta = 1")
    n = material.exponent
    g = SHAPE_FACTOR[kind]
    Q_rc2 = volumetric_heating(params, material.rho, constants) * params.r_C**2
    k_ref = material.k0_hat * constants.kelvin**n
    return float((n * Q_rc2 / (g * k_ref)) ** (1.0 / n)) * constants.kelvin, 2.0 / n


def temperature_at(
    case: AnalyticCase,
    material: Material,
    params: NoiseParams,
    r,
    constants: PhysicalConstants = ROUNDED,
):
    """Exact temperature at distance ``r`` from the center (or mid-plane), ``|r| <= L``."""
    if case.kind == "cube-estimate":
        raise UnsupportedCaseError("the cube estimate gives no profile")
    r = np.asarray(r, dtype=float)
    if np.any(np.abs(r) > case.L * (1 + 1e-12)):
        raise ValueError("r outside the body")
    r = np.clip(r, -case.L, case.L)
    Q = volumetric_heating(params, material.rho, constants)
    n = material.exponent
    T = (case.T_s**n + _delta_u(case, material, Q, r)) ** (1.0 / n)
    return float(T) if T.ndim == 0 else T


def profile(
    case: AnalyticCase,
    material: Material,
    params: NoiseParams,
    n_points: int = 101,
    constants: PhysicalConstants = ROUNDED,
) -> ProfileResult:
    """Sample the exact profile at ``n_points`` uniformly spaced radii in ``[0, L]``."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    T_c = central_temperature(case, material, params, constants)
    radii = np.linspace(0.0, case.L, n_points)
    T = temperature_at(case, material, params, radii, constants)
    T[-1] = case.T_s
    T[0] = T_c
    return ProfileResult(radii, T, T_c)


def _require(case: AnalyticCase, kind: str) -> None:
    if case.kind != kind:
        raise ValueError(f"expected a {kind} case, got {case.kind}")


def sphere_central_temperature(case, material, params, constants=ROUNDED) -> float:
    _require(case, "sphere")
    return central_temperature(case, material, params, constants)


def sphere_profile(case, material, params, n_points=101, constants=ROUNDED) -> ProfileResult:
    _require(case, "sphere")
    return profile(case, material, params, n_points, constants)


def cylinder_central_temperature(case, material, params, constants=ROUNDED) -> float:
    _require(case, "infinite-cylinder")
    return central_temperature(case, material, params, constants)


def cylinder_profile(case, material, params, n_points=101, constants=ROUNDED) -> ProfileResult:
    _require(case, "infinite-cylinder")
    return profile(case, material, params, n_points, constants)


def slab_profile(case, material, params, n_points=101, constants=ROUNDED) -> ProfileResult:
    """Half-profile of a slab of half-thickness ``L`` from the mid-plane to one face."""
    _require(case, "slab")
    return profile(case, material, params, n_points, constants)
