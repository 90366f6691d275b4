"""Steady nonlinear conduction by Kirchhoff substitution.

With ``k(T) = k0_hat * T**beta`` the variable ``u = T**(1+beta)`` turns
``-div(k(T) grad T) = Q`` into ``-lap(u) = (1+beta) * Q / k0_hat``, a linear
Poisson problem. We solve for ``w = u - u_s`` with homogeneous Dirichlet data,
so ``w`` is exactly linear in ``Q`` and a constant surface temperature adds
nothing to the right-hand side.

The 7-point operator acts on interior nodes. A link from an interior node to
a non-interior neighbor of length ``h`` carries the boundary value at a
fraction ``theta`` of the link, which adds ``1 / theta`` to the diagonal:

* ``boundary="face"`` (default): ``theta = 1/2``, the shared cell face of the
  staircase surface.
* ``boundary="node"``: ``theta = 1``, the neighboring boundary node itself.
* ``boundary="cut"``: ``theta`` is where the link actually crosses the shape
  surface (symmetric cut-link scheme, second order on curved shapes).

All three keep the matrix symmetric positive definite and an M-matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..analytic import ProfileResult, _warn_size
from ..exceptions import ConvergenceError
from ..materials import Material, check_validity
from ..noise import NoiseParams, volumetric_heating
from ..units import ROUNDED, PhysicalConstants
from .domain import GridDomain

__all__ = ["BOUNDARY_SCHEMES", "TemperatureField", "center_profile", "laplacian_system", "solve"]

logger = logging.getLogger(__name__)

_FIXED_THETA = {"face": 0.5, "node": 1.0}
BOUNDARY_SCHEMES = ("face", "node", "cut")
# shortest cut fraction kept; shorter links are clipped to bound the diagonal
_THETA_MIN = 1e-3


def surface_fraction(descriptor, points: np.ndarray, step: np.ndarray, iterations: int = 48) -> np.ndarray:
    """Fraction ``t`` in (0, 1] where ``points + t * step`` leaves ``descriptor``.

    ``points`` are inside and ``points + step`` outside; found by bisection.
    """
    lo = np.zeros(len(points))
    hi = np.ones(len(points))
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        q = points + mid[:, None] * step
        inside = np.asarray(descriptor.contains(q[:, 0], q[:, 1], q[:, 2]), dtype=bool)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi)


@dataclass(eq=False)
class TemperatureField:
    """Solution on a :class:`GridDomain`.

    ``u`` and ``T`` are full-grid arrays: interior nodes hold the solution,
    boundary nodes hold the surface value, exterior nodes are NaN.
    """

    domain: GridDomain
    u: np.ndarray
    T: np.ndarray
    T_c: float
    residual: float
    iterations: int
    residual_history: list = field(repr=False)
    T_s: float = 0.0
    material: Material | None = None
    params: NoiseParams | None = None
    boundary: str = "face"

    @property
    def beta(self) -> float:
        return self.material.beta

    @property
    def u_s(self) -> float:
        return self.T_s ** (1.0 + self.beta)

    @property
    def argmax(self) -> tuple[int, int, int]:
        T = np.where(self.domain.interior, self.T, -np.inf)
        return np.unravel_index(int(np.argmax(T)), T.shape)


def laplacian_system(domain: GridDomain, boundary: str = "face"):
    """Return ``(A, index)`` for the scaled operator ``h**2 * (-lap)`` on interior nodes.

    ``index`` maps each grid node to its row in ``A`` (-1 for non-interior).
    """
    if boundary not in BOUNDARY_SCHEMES:
        raise ValueError(f"boundary must be one of {BOUNDARY_SCHEMES}, got {boundary!r}")
    cut = boundary == "cut"
    if cut and not hasattr(domain.descriptor, "contains"):
        raise ValueError("cut boundaries need a descriptor with an analytic shape")
    interior = domain.interior
    n = domain.n_interior
    index = np.full(domain.shape, -1, dtype=np.int64)
    index[interior] = np.arange(n)
    if cut:
        points = np.stack([c[interior] for c in domain.meshgrid()], axis=1)

    diag = np.zeros(n)
    rows, cols = [], []
    for axis in range(3):
        for shift in (1, -1):
            nb = np.roll(index, -shift, axis=axis)
            if not domain.periodic[axis]:
                # padding layer guarantees no interior node sits on the grid edge
                edge = [slice(None)] * 3
                edge[axis] = -1 if shift == 1 else 0
                nb[tuple(edge)] = -1
            nb_of_interior = nb[interior]
            inside = nb_of_interior >= 0
            if cut:
                theta = np.ones(n)
                step = np.zeros(3)
                step[axis] = shift * domain.spacing
                outside = ~inside
                theta[outside] = surface_fraction(domain.descriptor, points[outside], step)
                theta = np.maximum(theta, _THETA_MIN)
            else:
                theta = _FIXED_THETA[boundary]
            diag += np.where(inside, 1.0, 1.0 / theta)
            rows.append(np.flatnonzero(inside))
            cols.append(nb_of_interior[inside])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    # duplicates (periodic axes of length <= 2) are summed by the COO -> CSR conversion
    off = sp.csr_matrix((-np.ones(rows.size), (rows, cols)), shape=(n, n))
    A = (sp.diags(diag) + off).tocsr()
    return A, index


def _cg(A, b, tol, max_iter):
    """Jacobi-preconditioned conjugate gradients from a zero start."""
    x = np.zeros_like(b)
    history = []
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return x, 0, [0.0]
    inv_diag = 1.0 / A.diagonal()
    r = b.copy()
    z = inv_diag * r
    p = z.copy()
    rz = r @ z
    history.append(1.0)
    for it in range(1, max_iter + 1):
        Ap = A @ p
        alpha = rz / (p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        rel = np.linalg.norm(r) / b_norm
        history.append(rel)
        if rel <= tol:
            # confirm against the true residual before stopping
            rel_true = np.linalg.norm(b - A @ x) / b_norm
            history[-1] = rel_true
            if rel_true <= tol:
                return x, it, history
            r = b - A @ x
        z = inv_diag * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise ConvergenceError(
        f"CG did not reach relative residual {tol:g} in {max_iter} iterations "
        f"(last {history[-1]:.3e})",
        history,
        max_iter,
    )


def _red_black_sor(A, b, domain: GridDomain, index, tol, max_iter, omega=None):
    """Red-black successive over-relaxation, a fallback to CG."""
    n_max = max(domain.shape)
    if omega is None:
        omega = 2.0 / (1.0 + np.sin(np.pi / n_max))
    I, J, K = np.indices(domain.shape)
    parity = ((I + J + K) % 2)[domain.interior]
    order = np.argsort(index[domain.interior])
    parity = parity[order]
    diag = A.diagonal()
    colors = [np.flatnonzero(parity == c) for c in (0, 1)]
    blocks = [A[c] for c in colors]
    x = np.zeros_like(b)
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return x, 0, [0.0]
    history = [1.0]
    for it in range(1, max_iter + 1):
        for c, block in zip(colors, blocks):
            # same-color entries of ``block`` only hit the diagonal
            gs = x[c] + (b[c] - block @ x) / diag[c]
            x[c] = (1.0 - omega) * x[c] + omega * gs
        rel = np.linalg.norm(b - A @ x) / b_norm
        history.append(rel)
        if rel <= tol:
            return x, it, history
    raise ConvergenceError(
        f"SOR did not reach relative residual {tol:g} in {max_iter} iterations "
        f"(last {history[-1]:.3e})",
        history,
        max_iter,
    )


def solve(
    domain: GridDomain,
    material: Material,
    params: NoiseParams,
    T_s: float = 0.0,
    *,
    tol: float = 1e-10,
    max_iter: int | None = None,
    method: str = "cg",
    boundary: str = "face",
    constants: PhysicalConstants = ROUNDED,
) -> TemperatureField:
    """Steady temperature of ``domain`` heated by collapse noise, surface held at ``T_s``.

    Parameters
    ----------
    tol : relative residual ``||b - A w|| / ||b||`` at which iteration stops.
    max_iter : defaults to ``50 * max(domain.shape)``.
    method : ``"cg"`` or ``"sor"`` (red-black over-relaxation).
    boundary : where the Dirichlet value sits: ``"face"``, ``"node"`` or ``"cut"``.

    Raises
    ------
    ConvergenceError
        With the residual history attached, if ``max_iter`` is exhausted.
    """
    if not T_s >= 0:
        raise ValueError(f"T_s must be >= 0, got {T_s}")
    if max_iter is None:
        max_iter = 50 * max(domain.shape)
    _warn_size(domain.descriptor.min_dimension, params)

    n = material.exponent
    Q = volumetric_heating(params, material.rho, constants)
    h = domain.spacing
    A, index = laplacian_system(domain, boundary)
    b = np.full(A.shape[0], h**2 * n * Q / material.k0_hat)

    if method == "cg":
        w, iterations, history = _cg(A, b, tol, max_iter)
    elif method == "sor":
        w, iterations, history = _red_black_sor(A, b, domain, index, tol, max_iter)
    else:
        raise ValueError(f"unknown method {method!r}")
    logger.debug("%s converged in %d iterations, residual %.3e", method, iterations, history[-1])

    u_s = T_s**n
    u = np.full(domain.shape, np.nan)
    u[domain.boundary] = u_s
    # clip round-off below the surface value so the real power stays defined
    u[domain.interior] = u_s + np.maximum(w[index[domain.interior]], 0.0)
    T = u ** (1.0 / n)
    T_c = float(np.nanmax(np.where(domain.interior, T, np.nan)))
    check_validity(material, T_c, "central temperature")
    return TemperatureField(
        domain=domain,
        u=u,
        T=T,
        T_c=T_c,
        residual=history[-1],
        iterations=iterations,
        residual_history=history,
        T_s=T_s,
        material=material,
        params=params,
        boundary=boundary,
    )


def center_profile(field: TemperatureField, axis: int | str = 0) -> ProfileResult:
    """Temperature along ``axis`` through the interior centroid.

    When the centroid falls between grid lines the neighboring lines are
    blended bilinearly. Positions are signed distances from the centroid;
    the two end points are the surface locations where ``T_s`` is imposed.
    """
    if field is None or not isinstance(field, TemperatureField):
        raise ValueError("center_profile needs a solved TemperatureField")
    if isinstance(axis, str):
        axis = "xyz".index(axis.lower())
    domain = field.domain
    centroid = domain.centroid()
    others = [a for a in range(3) if a != axis]

    stencil = []  # (weight, index along first other axis, index along second)
    per_axis = []
    for a in others:
        coords = domain.coords[a]
        pos = (centroid[a] - coords[0]) / domain.spacing
        lo = int(np.floor(pos + 1e-9))
        frac = pos - lo
        if frac < 1e-9 or lo + 1 >= len(coords):
            per_axis.append([(1.0, lo)])
        else:
            per_axis.append([(1.0 - frac, lo), (frac, lo + 1)])
    for w1, i1 in per_axis[0]:
        for w2, i2 in per_axis[1]:
            stencil.append((w1 * w2, i1, i2))

    T_lines, inside_lines = [], []
    for _, i1, i2 in stencil:
        idx = [slice(None)] * 3
        idx[others[0]] = i1
        idx[others[1]] = i2
        T_lines.append(field.T[tuple(idx)])
        inside_lines.append(domain.interior[tuple(idx)])
    common = np.logical_and.reduce(inside_lines)
    if not common.any():
        raise ValueError("no interior nodes on the center line")
    T_line = sum(w * T_l for (w, _, _), T_l in zip(stencil, T_lines))

    x = domain.coords[axis] - centroid[axis]
    keep = np.flatnonzero(common)
    if field.boundary == "cut":
        base = np.tile(centroid, (2, 1))
        base[0, axis] = domain.coords[axis][keep[0]]
        base[1, axis] = domain.coords[axis][keep[-1]]
        ends = []
        for row, sign in ((0, -1.0), (1, 1.0)):
            step = np.zeros(3)
            step[axis] = sign * domain.spacing
            ends.append(float(surface_fraction(domain.descriptor, base[row:row + 1], step)[0]) * domain.spacing)
        lo_off, hi_off = ends
    else:
        lo_off = hi_off = _FIXED_THETA[field.boundary] * domain.spacing
    positions = np.concatenate([[x[keep[0]] - lo_off], x[keep], [x[keep[-1]] + hi_off]])
    temps = np.concatenate([[field.T_s], T_line[keep], [field.T_s]])
    return ProfileResult(positions, temps, float(temps.max()))
