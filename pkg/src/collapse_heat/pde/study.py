"""Grid-refinement studies against the closed-form oracles."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..analytic import AnalyticCase, central_temperature, temperature_at
from ..materials import Material
from ..noise import NoiseParams
from ..units import ROUNDED, PhysicalConstants
from .domain import Slab, Sphere, build_domain
from .solver import center_profile, solve

__all__ = ["ConvergenceStudy", "convergence_study", "fitted_order", "oracle_case"]

# errors below this are round-off and carry no order information
_ROUNDOFF = 1e-12


def oracle_case(descriptor, T_s: float = 0.0) -> AnalyticCase | None:
    """Closed-form counterpart of a grid geometry, or None if there is none."""
    if isinstance(descriptor, Sphere):
        return AnalyticCase("sphere", descriptor.radius, T_s)
    if isinstance(descriptor, Slab):
        return AnalyticCase("slab", descriptor.half_thickness, T_s)
    return None


def fitted_order(spacings, errors) -> float:
    """Least-squares slope of ``log(error)`` against ``log(h)``; NaN if any error is round-off."""
    h = np.asarray(spacings, dtype=float)
    e = np.abs(np.asarray(errors, dtype=float))
    if len(h) < 2 or np.any(e <= _ROUNDOFF) or not np.all(np.isfinite(e)):
        return float("nan")
    slope, _ = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope)


@dataclass
class ConvergenceStudy:
    """Per-resolution results of :func:`convergence_study`.

    ``profile_errors`` is the primary error: the max-norm error of the
    Kirchhoff variable ``u = T**(1+beta)`` along the x center line, divided
    by the exact central rise ``u_c - u_s``. ``order`` is fitted to it.
    ``profile_errors_T`` is the same in temperature, relative to the exact
    ``T_c``. Without an oracle, errors are successive ``T_c`` differences.
    """

    resolutions: list
    spacings: list
    T_c: list
    T_c_exact: float | None
    T_c_errors: list
    profile_errors: list
    profile_errors_T: list
    order: float
    order_T_c: float
    iterations: list = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        e = np.abs(self.profile_errors)
        return bool(np.all(np.diff(e) < 0))

    def rows(self):
        for i, N in enumerate(self.resolutions):
            yield {
                "resolution": N,
                "h_m": self.spacings[i],
                "T_c_K": self.T_c[i],
                "T_c_rel_error": self.T_c_errors[i] if i < len(self.T_c_errors) else float("nan"),
                "profile_error_u": self.profile_errors[i] if i < len(self.profile_errors) else float("nan"),
                "profile_error_T": self.profile_errors_T[i] if i < len(self.profile_errors_T) else float("nan"),
            }


def convergence_study(
    descriptor,
    material: Material,
    params: NoiseParams,
    T_s: float = 0.0,
    resolutions=(16, 32, 64),
    *,
    boundary: str = "face",
    tol: float = 1e-10,
    constants: PhysicalConstants = ROUNDED,
) -> ConvergenceStudy:
    """Solve ``descriptor`` at each resolution and measure the error decay."""
    resolutions = [int(r) for r in resolutions]
    if len(resolutions) < 3:
        raise ValueError("a convergence study needs at least 3 resolutions")
    if any(b <= a for a, b in zip(resolutions, resolutions[1:])):
        raise ValueError("resolutions must be strictly increasing")

    case = oracle_case(descriptor, T_s)
    n = material.exponent
    T_c_exact = central_temperature(case, material, params, constants) if case else None

    spacings, T_cs, iterations = [], [], []
    T_c_err, prof_u, prof_T = [], [], []
    for N in resolutions:
        domain = build_domain(descriptor, N)
        fld = solve(domain, material, params, T_s, tol=tol, boundary=boundary, constants=constants)
        spacings.append(domain.spacing)
        T_cs.append(fld.T_c)
        iterations.append(fld.iterations)
        if case is None:
            continue
        T_c_err.append((fld.T_c - T_c_exact) / T_c_exact)
        prof = center_profile(fld, 0)
        r = np.clip(np.abs(prof.radii), 0.0, case.L)
        T_exact = temperature_at(case, material, params, r, constants)
        rise = T_c_exact**n - T_s**n
        prof_u.append(float(np.max(np.abs(prof.temperatures**n - T_exact**n)) / rise))
        prof_T.append(float(np.max(np.abs(prof.temperatures - T_exact)) / T_c_exact))

    if case is None:
        # Richardson-style: successive differences shrink at the convergence rate
        diffs = list(np.abs(np.diff(T_cs)) / T_cs[-1])
        order = fitted_order(spacings[:-1], diffs)
        return ConvergenceStudy(
            resolutions, spacings, T_cs, None, [], diffs, [], order, order, iterations
        )

    return ConvergenceStudy(
        resolutions,
        spacings,
        T_cs,
        T_c_exact,
        T_c_err,
        prof_u,
        prof_T,
        fitted_order(spacings, prof_u),
        fitted_order(spacings, T_c_err),
        iterations,
    )
