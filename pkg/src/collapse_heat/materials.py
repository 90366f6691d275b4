"""Materials with power-law low-temperature conductivity ``k(T) = k0_hat * T**beta``.

Registry files are TOML, one table per material::

    [rhodium]
    rho_kg_m3 = 12410.0
    k0_hat_SI = 30.0
    beta = 1.0
    valid_below_K = 10.0
    # override = true   # required to replace a built-in

``k0_hat_SI`` is in W m^-1 K^-(1+beta).
"""

from __future__ import annotations

import re
import warnings
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .exceptions import ValidityWarning

__all__ = [
    "COPPER_RRR30",
    "TORLON_4203",
    "DuplicateMaterialError",
    "InvalidMaterialError",
    "Material",
    "MaterialError",
    "MaterialParseError",
    "MaterialRegistry",
    "MissingFieldError",
    "conductivity",
    "default_registry",
    "load_registry",
    "load_registry_file",
]

REQUIRED_FIELDS = ("rho_kg_m3", "k0_hat_SI", "beta", "valid_below_K")


@dataclass(frozen=True)
class Material:
    name: str
    rho: float
    k0_hat: float
    beta: float
    valid_below: float = 10.0

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"{self.name}: density must be > 0")
        if not self.k0_hat > 0:
            raise ValueError(f"{self.name}: k0_hat must be > 0")
        if not self.beta >= 0:
            raise ValueError(f"{self.name}: beta must be >= 0")
        if not self.valid_below > 0:
            raise ValueError(f"{self.name}: valid_below must be > 0")

    @property
    def exponent(self) -> float:
        """``1 + beta``, the power in the Kirchhoff variable ``u = T**(1+beta)``."""
        return 1.0 + self.beta


COPPER_RRR30 = Material("copper-rrr30", rho=9000.0, k0_hat=45.0, beta=1.0, valid_below=10.0)
TORLON_4203 = Material("torlon-4203", rho=1420.0, k0_hat=6.13e-3, beta=2.18, valid_below=5.0)

BUILTINS = (COPPER_RRR30, TORLON_4203)


def check_validity(material: Material, T, what: str = "temperature") -> None:
    """Warn if any of ``T`` is above the material's fitted range."""
    T_max = float(np.max(T))
    if T_max > material.valid_below:
        warnings.warn(
            f"{material.name}: {what} {T_max:.3g} K exceeds the power-law "
            f"validity bound {material.valid_below:g} K",
            ValidityWarning,
            stacklevel=3,
        )


def conductivity(material: Material, T):
    """Thermal conductivity in W/(m K) at temperature ``T`` (K, scalar or array)."""
    T_arr = np.asarray(T, dtype=float)
    if np.any(T_arr <= 0):
        raise ValueError("conductivity requires T > 0")
    check_validity(material, T_arr)
    k = material.k0_hat * T_arr**material.beta
    return float(k) if k.ndim == 0 else k


class MaterialError(ValueError):
    """Base class for registry problems. ``entry`` and ``line`` locate the fault."""

    def __init__(self, message, entry=None, line=None):
        where = []
        if entry is not None:
            where.append(f"entry {entry!r}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
        self.entry = entry
        self.line = line


class MaterialParseError(MaterialError):
    pass


class MissingFieldError(MaterialError):
    pass


class InvalidMaterialError(MaterialError):
    pass


class DuplicateMaterialError(MaterialError):
    pass


class UnknownMaterialError(MaterialError, KeyError):
    def __str__(self):
        return self.args[0]


class MaterialRegistry(Mapping):
    """Read-only name -> Material mapping."""

    def __init__(self, materials=()):
        self._entries: dict[str, Material] = {}
        for m in materials:
            if m.name in self._entries:
                raise DuplicateMaterialError("duplicate material name", entry=m.name)
            self._entries[m.name] = m

    def __getitem__(self, name: str) -> Material:
        try:
            return self._entries[name]
        except KeyError:
            known = ", ".join(sorted(self._entries))
            raise UnknownMaterialError(
                f"unknown material {name!r} (known: {known})", entry=name
            ) from None

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f"MaterialRegistry({sorted(self._entries)})"


def default_registry() -> MaterialRegistry:
    return MaterialRegistry(BUILTINS)


def _header_lines(text: str) -> dict[str, int]:
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        m = re.match(r"\s*\[\s*\"?([^\]\"]+)\"?\s*\]", line)
        if m:
            lines.setdefault(m.group(1).strip(), lineno)
    return lines


def load_registry(source: str) -> MaterialRegistry:
    """Parse a TOML materials document and merge it with the built-ins."""
    try:
        doc = tomllib.loads(source)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise MaterialParseError(str(exc), line=int(m.group(1)) if m else None) from exc

    where = _header_lines(source)
    entries = {m.name: m for m in BUILTINS}
    builtin_names = set(entries)
    for name, table in doc.items():
        line = where.get(name)
        if not isinstance(table, dict):
            raise MaterialParseError("expected a table of material fields", entry=name, line=line)
        missing = [f for f in REQUIRED_FIELDS if f not in table]
        if missing:
            raise MissingFieldError(f"missing field(s): {', '.join(missing)}", entry=name, line=line)
        unknown = set(table) - set(REQUIRED_FIELDS) - {"override"}
        if unknown:
            raise MaterialParseError(f"unknown field(s): {', '.join(sorted(unknown))}", entry=name, line=line)
        values = {}
        for field in REQUIRED_FIELDS:
            value = table[field]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidMaterialError(f"{field} must be a number", entry=name, line=line)
            values[field] = float(value)
        for field in ("rho_kg_m3", "k0_hat_SI", "valid_below_K"):
            if not values[field] > 0:
                raise InvalidMaterialError(f"{field} must be > 0, got {values[field]}", entry=name, line=line)
        if not values["beta"] >= 0:
            raise InvalidMaterialError(f"beta must be >= 0, got {values['beta']}", entry=name, line=line)
        if name in entries and not table.get("override", False):
            kind = "built-in" if name in builtin_names else "earlier"
            raise DuplicateMaterialError(
                f"redefines {kind} material without 'override = true'", entry=name, line=line
            )
        entries[name] = Material(
            name,
            rho=values["rho_kg_m3"],
            k0_hat=values["k0_hat_SI"],
            beta=values["beta"],
            valid_below=values["valid_below_K"],
        )
    return MaterialRegistry(entries.values())


def load_registry_file(path) -> MaterialRegistry:
    return load_registry(Path(path).read_text(encoding="utf-8"))

