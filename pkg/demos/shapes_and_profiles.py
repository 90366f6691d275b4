"""
Bodies without a closed form
============================

Cubes, finite cylinders and ellipsoids have no exact solution; the grid
solver fills the gap. The cube result also checks the rough cube estimate.
"""

import tempfile
from pathlib import Path

from collapse_heat import COPPER_RRR30, TORLON_4203, NoiseParams, analytic
from collapse_heat.analytic import AnalyticCase
from collapse_heat.pde import (
    Box,
    Ellipsoid,
    FiniteCylinder,
    Slab,
    build_domain,
    center_profile,
    solve,
    write_field_csv,
)

params = NoiseParams()

cube = solve(build_domain(Box(1.0, 1.0, 1.0), 48), COPPER_RRR30, params)
estimate = analytic.central_temperature(AnalyticCase("cube-estimate", 1.0), COPPER_RRR30, params)
print(f"copper cube, 1 m: grid {cube.T_c:.4e} K, estimate {estimate:.4e} K, ratio {cube.T_c / estimate:.2f}")

# A cube is a sphere with corners, so it sits between the inscribed sphere
# and the slab of the same half-width.
for kind in ("sphere", "slab"):
    T = analytic.central_temperature(AnalyticCase(kind, 0.5), COPPER_RRR30, params)
    print(f"  {kind:6s} of half-width 0.5 m: {T:.4e} K")

# %%
# Other shapes, Torlon, surface at 10 mK
# --------------------------------------
shapes = {
    "rod 10 cm x 1 m": FiniteCylinder(0.05, 1.0),
    "disk 20 cm x 1 cm": FiniteCylinder(0.10, 0.01),
    "ellipsoid": Ellipsoid(0.3, 0.2, 0.1),
    "slab 2 cm thick": Slab(0.01),
}
for label, desc in shapes.items():
    fld = solve(build_domain(desc, 24), TORLON_4203, params, T_s=0.01)
    print(f"{label:20s} T_c = {fld.T_c:.5e} K  ({fld.iterations} iterations)")

# %%
# Profiles and export
# -------------------
fld = solve(build_domain(Ellipsoid(0.3, 0.2, 0.1), 24), TORLON_4203, params, T_s=0.01)
for axis in "xyz":
    prof = center_profile(fld, axis)
    print(f"{axis}: surface at {prof.radii[0]:+.3f} / {prof.radii[-1]:+.3f} m, peak {prof.T_c:.5e} K")

out = Path(tempfile.mkdtemp()) / "ellipsoid.csv"
sidecar = write_field_csv(fld, out)
print(f"wrote {out} and {sidecar.name}")
