"""
What cold experiments say about the collapse rate
=================================================

Compare measured temperatures with the predicted floor and turn each into
the largest compatible collapse rate.
"""

import warnings

import numpy as np

from collapse_heat import NoiseParams, TORLON_4203, analytic, bundled_experiments, evaluate, radiogenic_budget
from collapse_heat.analytic import AnalyticCase
from collapse_heat.constraints import ExperimentRecord
from collapse_heat.exceptions import ValidityWarning

params = NoiseParams()

with warnings.catch_warnings():
    warnings.simplefilter("ignore", ValidityWarning)
    results = [evaluate(r, params) for r in bundled_experiments()]

for res in results:
    print(f"{res.name}")
    print(f"  predicted floor {res.predicted_Tc:.3e} K, measured {res.measured_T:.1e} K")
    print(f"  margin {res.margin:.2e} -> {'excludes' if res.constrains else 'allows'} lambda = {res.lam:g}")
    print(f"  largest compatible lambda {res.lambda_max:.2e} 1/s")
    for note in res.notes:
        print(f"  note: {note}")

# %%
# A hypothetical polymer experiment
# ---------------------------------
# How cold would a 50 cm Torlon sphere have to be to probe lambda = 1e-8?

floor = analytic.lower_bound(AnalyticCase("sphere", 0.5), TORLON_4203, params)
print(f"\nTorlon sphere floor at lambda = 1e-8: {floor:.3e} K")
for T_meas in (0.1, 0.05, 0.02):
    rec = ExperimentRecord("torlon", "torlon-4203", AnalyticCase("sphere", 0.5), T_meas)
    res = evaluate(rec, params)
    print(f"  measured {T_meas:.2f} K -> lambda_max {res.lambda_max:.2e} 1/s, constrains: {res.constrains}")

# Sweep the correlation length: the bound moves because Q scales as 1/r_C^2.
for r_C in np.logspace(-8, -6, 3):
    rec = ExperimentRecord("torlon", "torlon-4203", AnalyticCase("sphere", 0.5), 0.02)
    print(f"  r_C = {r_C:.0e} m: lambda_max {evaluate(rec, NoiseParams(1e-8, r_C)).lambda_max:.2e} 1/s")

# %%
# Ordinary heat sources
# ---------------------
# The argument needs other heating (radioactivity, cosmic rays) to be small
# next to the noise heating.
report = radiogenic_budget(1e-10, params)
bg, nz = report.in_MeV_per_g_s()
print(f"\nbackground {bg:.2f} vs noise {nz:.2f} MeV/(g s): ratio {report.ratio:.3f}, passed {report.passed}")
