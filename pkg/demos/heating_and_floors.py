"""
Noise heating and closed-form temperature floors
=================================================

How much heat the collapse noise deposits, and how cold a body can get
when its surface is held at absolute zero.
"""

from collapse_heat import COPPER_RRR30, TORLON_4203, NoiseParams, analytic, convert
from collapse_heat.analytic import AnalyticCase
from collapse_heat.noise import heating_per_mass, total_power, volumetric_heating

params = NoiseParams()  # lambda = 1e-8 1/s, r_C = 1e-7 m

# Heating per unit mass is independent of the material.
rate = heating_per_mass(params)
print(f"heating per mass: {rate:.4e} W/kg = {convert(rate, 'W/kg', 'MeV/(g s)'):.2f} MeV/(g s)")
print(f"one gram:         {total_power(params, 1e-3):.4e} W")

# Per unit volume it scales with density.
for mat in (COPPER_RRR30, TORLON_4203):
    print(f"Q({mat.name}) = {volumetric_heating(params, mat.rho):.4e} W/m^3")

# %%
# A linear-law metal cube
# -----------------------
# The crude cube estimate is linear in size: T_c = theta * L / r_C.

theta = analytic.cube_theta(COPPER_RRR30, params)
print(f"\ntheta = {theta:.4e}")
for L in (1.0, 0.1, 4e-4):
    T = analytic.central_temperature(AnalyticCase("cube-estimate", L), COPPER_RRR30, params)
    print(f"  copper cube L = {L:<7g} m: T_c = {T:.3e} K")

# %%
# A polymer sphere
# ----------------
# Torlon conducts as T^2.18, so the floor grows more slowly with size.

coef, expo = analytic.bound_coefficient(TORLON_4203, params)
print(f"\nTorlon sphere floor: T_c >= {coef:.3e} (L/r_C)^{expo:.3f} K")
for lam in (1e-8, 10**-7.7):
    case = AnalyticCase("sphere", 0.5)
    T = analytic.central_temperature(case, TORLON_4203, params.with_lambda(lam))
    print(f"  L = 0.5 m, lambda = {lam:.3e}: T_c = {T:.4e} K")

# The profile inside the sphere follows T^(1+beta) falling off as 1 - (r/L)^2.
prof = analytic.sphere_profile(AnalyticCase("sphere", 0.5), TORLON_4203, params, n_points=6)
for r, T in zip(prof.radii, prof.temperatures):
    print(f"  r = {r:.2f} m  T = {T:.4e} K")

# A warmer surface lifts the whole profile, but the rise in T^(1+beta) is unchanged.
warm = analytic.central_temperature(AnalyticCase("sphere", 0.5, 0.05), TORLON_4203, params)
print(f"  with T_s = 50 mK: T_c = {warm:.4e} K")
