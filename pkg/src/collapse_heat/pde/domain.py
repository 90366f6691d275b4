"""Rasterize simple solids onto a uniform, cell-centered 3D grid.

Node ``i`` along an axis of ``n`` nodes sits at ``(i - (n - 1) / 2) * h``, so
the grid is centered on the origin and each node is the center of an
``h``-sized cell. Nodes whose centers fall inside the shape are interior; the
non-interior nodes 6-adjacent to them are the boundary layer; the rest are
exterior. One padding layer always surrounds the shape on non-periodic axes.

For a box whose sides are integer multiples of ``h`` the cell faces of the
outermost interior nodes coincide with the box faces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BOUNDARY",
    "Box",
    "CustomMask",
    "Ellipsoid",
    "EXTERIOR",
    "FiniteCylinder",
    "GridDomain",
    "INTERIOR",
    "MIN_RESOLUTION",
    "Slab",
    "Sphere",
    "build_domain",
]

EXTERIOR, BOUNDARY, INTERIOR = 0, 1, 2
MIN_RESOLUTION = 8
# node count along periodic (translation-invariant) slab axes
SLAB_PERIODIC_NODES = 4


def _positive(**dims):
    for name, value in dims.items():
        if not value > 0:
            raise ValueError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class Box:
    """Rectangular parallelepiped with side lengths ``Lx, Ly, Lz`` (m)."""

    Lx: float
    Ly: float
    Lz: float

    def __post_init__(self):
        _positive(Lx=self.Lx, Ly=self.Ly, Lz=self.Lz)

    @property
    def extents(self):
        return (self.Lx, self.Ly, self.Lz)

    @property
    def min_dimension(self):
        return min(self.extents)

    def contains(self, x, y, z):
        return (np.abs(x) < self.Lx / 2) & (np.abs(y) < self.Ly / 2) & (np.abs(z) < self.Lz / 2)

    def scaled(self, a):
        return Box(self.Lx * a, self.Ly * a, self.Lz * a)


@dataclass(frozen=True)
class Sphere:
    radius: float

    def __post_init__(self):
        _positive(radius=self.radius)

    @property
    def extents(self):
        return (2 * self.radius,) * 3

    @property
    def min_dimension(self):
        return 2 * self.radius

    def contains(self, x, y, z):
        return x**2 + y**2 + z**2 < self.radius**2

    def scaled(self, a):
        return Sphere(self.radius * a)


@dataclass(frozen=True)
class FiniteCylinder:
    """Cylinder along z with the given radius and full height."""

    radius: float
    height: float

    def __post_init__(self):
        _positive(radius=self.radius, height=self.height)

    @property
    def extents(self):
        return (2 * self.radius, 2 * self.radius, self.height)

    @property
    def min_dimension(self):
        return min(2 * self.radius, self.height)

    def contains(self, x, y, z):
        return (x**2 + y**2 < self.radius**2) & (np.abs(z) < self.height / 2)

    def scaled(self, a):
        return FiniteCylinder(self.radius * a, self.height * a)


@dataclass(frozen=True)
class Ellipsoid:
    """Ellipsoid with semi-axes ``a, b, c`` along x, y, z."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        _positive(a=self.a, b=self.b, c=self.c)

    @property
    def extents(self):
        return (2 * self.a, 2 * self.b, 2 * self.c)

    @property
    def min_dimension(self):
        return 2 * min(self.a, self.b, self.c)

    def contains(self, x, y, z):
        return (x / self.a) ** 2 + (y / self.b) ** 2 + (z / self.c) ** 2 < 1.0

    def scaled(self, s):
        return Ellipsoid(self.a * s, self.b * s, self.c * s)


@dataclass(frozen=True)
class Slab:
    """Infinite plate of the given half-thickness, normal to x.

    Rasterized as a thin periodic block in y and z, which makes the 3D solve
    exactly one-dimensional.
    """

    half_thickness: float

    def __post_init__(self):
        _positive(half_thickness=self.half_thickness)

    @property
    def extents(self):
        return (2 * self.half_thickness, math.inf, math.inf)

    @property
    def min_dimension(self):
        return 2 * self.half_thickness

    def contains(self, x, y, z):
        return np.abs(x) < self.half_thickness

    def scaled(self, a):
        return Slab(self.half_thickness * a)


@dataclass(frozen=True, eq=False)
class CustomMask:
    """User-supplied boolean occupancy array with node spacing ``spacing`` (m).

    ``resolution`` is ignored for custom masks; the array is used as given.
    """

    mask: np.ndarray
    spacing: float

    def __post_init__(self):
        _positive(spacing=self.spacing)
        m = np.asarray(self.mask, dtype=bool)
        if m.ndim != 3:
            raise ValueError("custom mask must be 3D")
        if not m.any():
            raise ValueError("custom mask has no interior nodes")
        object.__setattr__(self, "mask", m)

    @property
    def extents(self):
        return tuple(n * self.spacing for n in self.mask.shape)

    @property
    def min_dimension(self):
        return min(self.extents)

    def scaled(self, a):
        return CustomMask(self.mask, self.spacing * a)


@dataclass(eq=False)
class GridDomain:
    """Uniform grid with per-node labels ``EXTERIOR``, ``BOUNDARY``, ``INTERIOR``."""

    descriptor: object
    spacing: float
    labels: np.ndarray
    periodic: tuple = (False, False, False)
    resolution: int | None = None
    coords: tuple = field(init=False)

    def __post_init__(self):
        self.coords = tuple(
            (np.arange(n) - (n - 1) / 2.0) * self.spacing for n in self.labels.shape
        )

    @property
    def shape(self):
        return self.labels.shape

    @property
    def interior(self) -> np.ndarray:
        return self.labels == INTERIOR

    @property
    def boundary(self) -> np.ndarray:
        return self.labels == BOUNDARY

    @property
    def n_interior(self) -> int:
        return int(np.count_nonzero(self.interior))

    def meshgrid(self):
        return np.meshgrid(*self.coords, indexing="ij")

    def interior_counts(self) -> tuple[int, ...]:
        """Extent of the interior along each axis, in nodes."""
        counts = []
        for axis in range(3):
            other = tuple(a for a in range(3) if a != axis)
            occupied = np.flatnonzero(self.interior.any(axis=other))
            counts.append(int(occupied[-1] - occupied[0] + 1))
        return tuple(counts)

    def centroid(self) -> np.ndarray:
        X, Y, Z = self.meshgrid()
        inside = self.interior
        return np.array([X[inside].mean(), Y[inside].mean(), Z[inside].mean()])


def _label(inside: np.ndarray, periodic) -> np.ndarray:
    labels = np.where(inside, INTERIOR, EXTERIOR).astype(np.int8)
    touches = np.zeros_like(inside)
    for axis in range(3):
        for shift in (1, -1):
            rolled = np.roll(inside, shift, axis=axis)
            if not periodic[axis]:
                # np.roll wraps; kill the wrapped slice
                idx = [slice(None)] * 3
                idx[axis] = 0 if shift == 1 else -1
                rolled[tuple(idx)] = False
            touches |= rolled
    labels[touches & ~inside] = BOUNDARY
    return labels


def _rasterize(descriptor, resolution: int) -> GridDomain:
    h = descriptor.min_dimension / resolution
    periodic = tuple(math.isinf(e) for e in descriptor.extents)
    counts = []
    for extent, wrap in zip(descriptor.extents, periodic):
        if wrap:
            counts.append(SLAB_PERIODIC_NODES)
        else:
            # guard against 16.000000001 from floating division
            cells = math.ceil(extent / h - 1e-9)
            counts.append(cells + 2)
    coords = [(np.arange(n) - (n - 1) / 2.0) * h for n in counts]
    X, Y, Z = np.meshgrid(*coords, indexing="ij")
    inside = np.asarray(descriptor.contains(X, Y, Z), dtype=bool)
    if not inside.any():
        raise ValueError(f"{descriptor!r} covers no grid nodes at resolution {resolution}")
    return GridDomain(descriptor, h, _label(inside, periodic), periodic, resolution)


def _meets_floor(domain: GridDomain) -> bool:
    return all(
        wrap or n >= MIN_RESOLUTION for n, wrap in zip(domain.interior_counts(), domain.periodic)
    )


def build_domain(descriptor, resolution: int = 32) -> GridDomain:
    """Rasterize ``descriptor`` with ``resolution`` cells across its smallest dimension.

    Curved shapes near the floor can rasterize to fewer than ``MIN_RESOLUTION``
    interior nodes along an axis; the resolution is then raised one step at a
    time until every axis meets the floor. ``domain.resolution`` reports the
    value actually used.
    """
    if isinstance(descriptor, CustomMask):
        inside = np.pad(descriptor.mask, 1)
        return GridDomain(descriptor, descriptor.spacing, _label(inside, (False,) * 3))

    if int(resolution) != resolution or resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be an integer >= {MIN_RESOLUTION}, got {resolution}")
    resolution = int(resolution)
    for r in range(resolution, 2 * resolution + 1):
        domain = _rasterize(descriptor, r)
        if _meets_floor(domain):
            return domain
    raise ValueError(f"{descriptor!r} does not reach {MIN_RESOLUTION} interior nodes per axis")
