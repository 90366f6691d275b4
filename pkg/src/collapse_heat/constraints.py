"""Turn measured cryogenic temperatures into statements about the collapse rate.

A body with its surface at 0 K still sits at the noise-heating floor
``T_c(lambda)``. If a measured temperature is below that floor, the assumed
``lambda`` is excluded. Since ``T_c**(1+beta)`` is proportional to ``lambda`` at
fixed ``r_C``, the largest compatible rate is

    lambda_max = lambda * (T_measured / T_c)**(1+beta)
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import analytic, pde
from .materials import MaterialRegistry, default_registry
from .noise import DEFAULT_LAMBDA, NoiseParams, heating_per_mass
from .units import ROUNDED, PhysicalConstants, convert

__all__ = [
    "BudgetReport",
    "ExclusionResult",
    "ExperimentRecord",
    "TEMPERATURE_KINDS",
    "bundled_experiments",
    "evaluate",
    "load_experiments",
    "load_experiments_file",
    "radiogenic_budget",
]

TEMPERATURE_KINDS = ("lattice", "spin", "mode")
# spin temperatures need not reflect the phonon bath the noise heats
DEFAULT_ALLOWED_KINDS = ("lattice", "mode")

_GRID_GEOMETRIES = {
    "box": (pde.Box, ("Lx_m", "Ly_m", "Lz_m")),
    "grid-sphere": (pde.Sphere, ("radius_m",)),
    "finite-cylinder": (pde.FiniteCylinder, ("radius_m", "height_m")),
    "ellipsoid": (pde.Ellipsoid, ("a_m", "b_m", "c_m")),
}


@dataclass(frozen=True)
class ExperimentRecord:
    """One measured temperature.

    ``geometry`` is an :class:`~collapse_heat.analytic.AnalyticCase` or a grid
    descriptor from :mod:`collapse_heat.pde`; grid geometries are solved at
    ``resolution``.
    """

    name: str
    material_name: str
    geometry: object
    measured_T: float
    temperature_kind: str = "lattice"
    notes: str = ""
    resolution: int = 32

    def __post_init__(self):
        if not self.measured_T > 0:
            raise ValueError(f"{self.name}: measured temperature must be > 0")
        if self.temperature_kind not in TEMPERATURE_KINDS:
            raise ValueError(
                f"{self.name}: temperature_kind must be one of {TEMPERATURE_KINDS}, "
                f"got {self.temperature_kind!r}"
            )

    @property
    def size(self) -> float:
        g = self.geometry
        return g.L if isinstance(g, analytic.AnalyticCase) else g.min_dimension


@dataclass
class ExclusionResult:
    name: str
    predicted_Tc: float
    measured_T: float
    lambda_max: float
    margin: float
    constrains: bool
    lam: float
    r_C: float
    gated: bool = False
    notes: list = field(default_factory=list)


def predicted_floor(record: ExperimentRecord, material, params: NoiseParams, constants=ROUNDED) -> float:
    """Central temperature of the record's body with its surface at 0 K."""
    g = record.geometry
    if isinstance(g, analytic.AnalyticCase):
        return analytic.lower_bound(g, material, params, constants)
    if hasattr(g, "min_dimension"):
        domain = pde.build_domain(g, record.resolution)
        return pde.solve(domain, material, params, 0.0, constants=constants).T_c
    raise ValueError(f"{record.name}: unsupported geometry {g!r}")


def evaluate(
    record: ExperimentRecord,
    params: NoiseParams = NoiseParams(),
    registry: MaterialRegistry | None = None,
    *,
    allowed_kinds=DEFAULT_ALLOWED_KINDS,
    constants: PhysicalConstants = ROUNDED,
) -> ExclusionResult:
    """Compare the record's measured temperature with the predicted floor.

    A record whose ``temperature_kind`` is not in ``allowed_kinds`` is
    evaluated but never reported as constraining (``gated=True``).
    """
    registry = registry if registry is not None else default_registry()
    material = registry[record.material_name]

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        predicted = predicted_floor(record, material, params, constants)
        # invert at a nonzero rate so lambda = 0 still yields a finite bound
        lam_ref = params.lam if params.lam > 0 else DEFAULT_LAMBDA
        T_ref = predicted if params.lam > 0 else predicted_floor(
            record, material, params.with_lambda(lam_ref), constants
        )
    notes = [str(w.message) for w in caught]
    for w in caught:
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)

    lambda_max = lam_ref * (record.measured_T / T_ref) ** material.exponent
    margin = predicted / record.measured_T
    gated = record.temperature_kind not in allowed_kinds
    if gated:
        notes.append(f"{record.temperature_kind} temperature excluded from constraint logic")
    return ExclusionResult(
        name=record.name,
        predicted_Tc=predicted,
        measured_T=record.measured_T,
        lambda_max=lambda_max,
        margin=margin,
        constrains=(margin > 1.0) and not gated,
        lam=params.lam,
        r_C=params.r_C,
        gated=gated,
        notes=notes,
    )


def _geometry_from_entry(entry: dict, where: str):
    kind = entry.get("geometry")
    if kind in analytic.KINDS:
        if "L_m" not in entry:
            raise ValueError(f"{where}: geometry {kind!r} needs L_m")
        return analytic.AnalyticCase(kind, float(entry["L_m"]), 0.0)
    if kind in _GRID_GEOMETRIES:
        cls, keys = _GRID_GEOMETRIES[kind]
        missing = [k for k in keys if k not in entry]
        if missing:
            raise ValueError(f"{where}: geometry {kind!r} needs {', '.join(missing)}")
        return cls(*(float(entry[k]) for k in keys))
    known = ", ".join(list(analytic.KINDS) + list(_GRID_GEOMETRIES))
    raise ValueError(f"{where}: unknown geometry {kind!r} (known: {known})")


def load_experiments(source: str) -> list[ExperimentRecord]:
    """Parse ``[[experiment]]`` tables from a TOML document."""
    doc = tomllib.loads(source)
    records = []
    for i, entry in enumerate(doc.get("experiment", [])):
        where = f"experiment #{i + 1} ({entry.get('name', '?')})"
        for key in ("name", "material", "geometry", "measured_T_K"):
            if key not in entry:
                raise ValueError(f"{where}: missing field {key!r}")
        records.append(
            ExperimentRecord(
                name=entry["name"],
                material_name=entry["material"],
                geometry=_geometry_from_entry(entry, where),
                measured_T=float(entry["measured_T_K"]),
                temperature_kind=entry.get("temperature_kind", "lattice"),
                notes=entry.get("notes", ""),
                resolution=int(entry.get("resolution", 32)),
            )
        )
    return records


def load_experiments_file(path) -> list[ExperimentRecord]:
    return load_experiments(Path(path).read_text(encoding="utf-8"))


def bundled_experiments() -> list[ExperimentRecord]:
    """The copper, rhodium and aluminum-membrane records shipped with the package."""
    text = resources.files("collapse_heat").joinpath("data/experiments.toml").read_text(encoding="utf-8")
    return load_experiments(text)


@dataclass(frozen=True)
class BudgetReport:
    background: float  # W/kg
    noise_heating: float  # W/kg
    ratio: float
    threshold: float
    passed: bool

    def in_MeV_per_g_s(self, constants: PhysicalConstants = ROUNDED) -> tuple[float, float]:
        f = lambda v: convert(v, "W/kg", "MeV/(g s)", constants)  # noqa: E731
        return f(self.background), f(self.noise_heating)


def radiogenic_budget(
    background: float,
    params: NoiseParams = NoiseParams(),
    threshold: float = 0.1,
    constants: PhysicalConstants = ROUNDED,
) -> BudgetReport:
    """Check that ordinary heating (radioactivity, penetrating particles) is small.

    ``background`` is in W/kg. Passes when it is at most ``threshold`` times
    the collapse-noise heating per unit mass.
    """
    if not background >= 0:
        raise ValueError(f"background heating must be >= 0, got {background}")
    noise = heating_per_mass(params, constants)
    ratio = background / noise if noise > 0 else math.inf if background > 0 else 0.0
    return BudgetReport(background, noise, ratio, threshold, ratio <= threshold)
