"""Command-line front end.

Subcommands::

    estimate   closed-form central temperature (cube, sphere, cylinder, slab)
    solve      finite-difference solve on a 3D grid
    scan       sweep lambda, r_C and/or L and tabulate T_c
    constrain  compare experiment records with the predicted floor
    materials  list or validate the materials registry

Lengths take unit suffixes (``0.5m``, ``50cm``, ``0.4mm``, ``20um``); the
collapse rate accepts ``1e-8`` or ``10^-7.7``. Any flag may also come from a
TOML file given with ``--config``; flags on the command line win.
"""

from __future__ import annotations

import argparse
import itertools
import os
import re
import sys
import warnings
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import analytic, constraints, pde
from .exceptions import ConvergenceError, UnsupportedCaseError, ValidityWarning
from .materials import MaterialError, default_registry, load_registry_file
from .noise import DEFAULT_LAMBDA, DEFAULT_R_C, NoiseParams, volumetric_heating
from .units import ROUNDED, PRECISE, UnitParseError, convert

MATERIALS_ENV = "COLLAPSE_HEAT_MATERIALS"

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_MATERIAL, EXIT_SOLVER, EXIT_OUTPUT = 0, 1, 2, 3, 4, 5

ANALYTIC_GEOMETRIES = {
    "cube": "cube-estimate",
    "sphere": "sphere",
    "cylinder": "infinite-cylinder",
    "slab": "slab",
}
GRID_GEOMETRIES = ("cube", "box", "sphere", "finite-cylinder", "ellipsoid", "slab")
ALL_GEOMETRIES = ("cube", "sphere", "cylinder", "box", "finite-cylinder", "ellipsoid", "slab")

SCAN_PARAMS = {"lambda": "lambda_per_s", "rc": "r_C_m", "r_C": "r_C_m", "L": "L_m"}


class UsageError(ValueError):
    pass


def fmt(value: float) -> str:
    """Scientific notation, 9 significant digits."""
    return f"{value:.8e}"


def parse_length(text) -> float:
    """``"50cm"`` -> 0.5. Bare numbers are metres."""
    return _parse_with_unit(text, "m")


def parse_temperature(text) -> float:
    return _parse_with_unit(text, "K")


def _parse_with_unit(text, si_unit: str) -> float:
    if isinstance(text, (int, float)):
        return float(text)
    m = re.fullmatch(r"\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-zµ]*)\s*", str(text))
    if not m:
        raise UsageError(f"cannot read {text!r} as a number with a unit")
    value, unit = float(m.group(1)), m.group(2) or si_unit
    try:
        return convert(value, unit, si_unit)
    except (UnitParseError, ValueError) as exc:
        raise UsageError(f"{text!r}: {exc}") from None


def parse_rate(text) -> float:
    """Collapse rate in 1/s: ``1e-8``, ``10^-7.7`` or ``10**-7.7``."""
    if isinstance(text, (int, float)):
        return float(text)
    m = re.fullmatch(r"\s*10\s*(?:\^|\*\*)\s*([-+]?\d+(?:\.\d*)?)\s*", str(text))
    if m:
        return 10.0 ** float(m.group(1))
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot read collapse rate {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file supplying defaults for any flag")
    common.add_argument("--material", help="material name (default copper-rrr30)")
    common.add_argument("--materials", help=f"materials registry file (fallback: ${MATERIALS_ENV})")
    common.add_argument("--lambda", dest="lam", help="collapse rate in 1/s, e.g. 1e-8 or 10^-7.7")
    common.add_argument("--rc", help="correlation length, e.g. 1e-5cm (default 1e-7 m)")
    common.add_argument("--precise-constants", action="store_true", default=None,
                        help="use CODATA constants instead of the rounded default set")
    common.add_argument("--out", help="output CSV path")

    geometry = argparse.ArgumentParser(add_help=False)
    geometry.add_argument("--geometry", choices=ALL_GEOMETRIES)
    for flag in ("--L", "--Lx", "--Ly", "--Lz", "--radius", "--height"):
        geometry.add_argument(flag, dest=flag.lstrip("-"))
    geometry.add_argument("--Ts", help="surface temperature in K (default 0)")
    geometry.add_argument("--resolution", type=int, help="grid cells across the smallest dimension")
    geometry.add_argument("--tol", type=float, help="relative residual tolerance (default 1e-10)")
    geometry.add_argument("--boundary", choices=pde.BOUNDARY_SCHEMES, help="grid boundary scheme")

    parser = argparse.ArgumentParser(
        prog="collapse-heat",
        description="Temperature floors of solids heated by collapse-model noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("estimate", parents=[common, geometry], help="closed-form estimate")
    sub.add_parser("solve", parents=[common, geometry], help="3D finite-difference solve")
    scan = sub.add_parser("scan", parents=[common, geometry], help="parameter sweep to CSV")
    scan.add_argument("--scan", action="append", metavar="PARAM:START:STOP:COUNT:lin|log",
                      help="sweep axis over lambda, rc or L; give once or twice")
    scan.add_argument("--grid", action="store_true", default=None,
                      help="evaluate each point with the grid solver instead of the closed form")
    con = sub.add_parser("constrain", parents=[common], help="evaluate experiment records")
    con.add_argument("--experiments", help="experiment records file (default: bundled records)")
    con.add_argument("--include-spin", action="store_true", default=None,
                     help="let spin temperatures constrain lambda")
    sub.add_parser("materials", parents=[common], help="list or validate materials")
    return parser


def _apply_config(args):
    if not args.config:
        return
    try:
        cfg = tomllib.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"config {args.config}: {exc}") from None
    aliases = {"lambda": "lam", "precise-constants": "precise_constants", "include-spin": "include_spin"}
    for key, value in cfg.items():
        dest = aliases.get(key, key.replace("-", "_"))
        if not hasattr(args, dest) or dest in ("command", "config"):
            raise UsageError(f"config {args.config}: unknown key {key!r} for {args.command}")
        if getattr(args, dest) is None:
            setattr(args, dest, value)


def _registry(args):
    path = args.materials or os.environ.get(MATERIALS_ENV)
    if not path:
        return default_registry()
    try:
        return load_registry_file(path)
    except OSError as exc:
        raise MaterialError(f"cannot read materials file: {exc}") from None


def _noise(args) -> NoiseParams:
    lam = parse_rate(args.lam) if args.lam is not None else DEFAULT_LAMBDA
    r_C = parse_length(args.rc) if args.rc is not None else DEFAULT_R_C
    return NoiseParams(lam, r_C)


def _constants(args):
    return PRECISE if args.precise_constants else ROUNDED


def _length(args, *names, required=True):
    for name in names:
        value = getattr(args, name, None)
        if value is not None:
            return parse_length(value)
    if required:
        raise UsageError(f"--{names[0]} is required for geometry {args.geometry!r}")
    return None


def analytic_case(args, L=None) -> analytic.AnalyticCase:
    geometry = args.geometry or "sphere"
    if geometry not in ANALYTIC_GEOMETRIES:
        raise UsageError(f"geometry {geometry!r} has no closed form; use the solve command")
    T_s = parse_temperature(args.Ts) if args.Ts is not None else 0.0
    L = L if L is not None else _length(args, "L", "radius")
    return analytic.AnalyticCase(ANALYTIC_GEOMETRIES[geometry], L, T_s)


def _axes(args, L=None):
    """Per-axis lengths from --Lx/--Ly/--Lz, each falling back to --L."""
    if L is not None:
        return (L, L, L)
    base = _length(args, "L", required=False)
    axes = []
    for name in ("Lx", "Ly", "Lz"):
        value = _length(args, name, required=False)
        value = base if value is None else value
        if value is None:
            raise UsageError(f"--{name} (or --L) is required for geometry {args.geometry!r}")
        axes.append(value)
    return axes


def grid_descriptor(args, L=None):
    """Grid geometry from flags; ``L`` overrides the primary length (used by scans)."""
    geometry = args.geometry or "sphere"
    if geometry not in GRID_GEOMETRIES:
        raise UsageError(f"geometry {geometry!r} is not a grid geometry; use finite-cylinder")

    def length(*names):
        return L if L is not None else _length(args, *names)

    if geometry == "cube":
        side = length("L")
        return pde.Box(side, side, side)
    if geometry == "box":
        return pde.Box(*_axes(args, L))
    if geometry == "sphere":
        return pde.Sphere(length("L", "radius"))
    if geometry == "finite-cylinder":
        radius = length("radius", "L")
        height = _length(args, "height")
        return pde.FiniteCylinder(radius, height)
    if geometry == "ellipsoid":
        return pde.Ellipsoid(*_axes(args, L))
    return pde.Slab(length("L"))


def _header(params: NoiseParams, constants, material) -> str:
    return (
        f"# noise: lambda = {params.lam:.4g} 1/s, r_C = {params.r_C:.4g} m "
        f"({constants.name} constants); material: {material.name} "
        f"(rho = {material.rho:g} kg/m^3, k = {material.k0_hat:g} T^{material.beta:g} W/(m K))"
    )


def _write_lines(path, lines):
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_estimate(args) -> int:
    registry = _registry(args)
    material = registry[args.material or "copper-rrr30"]
    params, constants = _noise(args), _constants(args)
    case = analytic_case(args)
    T_c = analytic.central_temperature(case, material, params, constants)
    print(_header(params, constants, material))
    print(f"{args.geometry or 'sphere'} L = {case.L:.6g} m, T_s = {case.T_s:g} K: T_c = {T_c:.4e} K")
    if case.kind != "cube-estimate":
        coef, power = analytic.bound_coefficient(material, params, case.kind, constants)
        print(f"floor (T_s = 0): T_c >= {coef:.4e} (L/r_C)^{power:.4f} K")
    if args.out:
        if case.kind == "cube-estimate":
            raise UsageError("the cube estimate has no profile to write")
        prof = analytic.profile(case, material, params, 101, constants)
        pde.write_profile_csv(prof, args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    registry = _registry(args)
    material = registry[args.material or "copper-rrr30"]
    params, constants = _noise(args), _constants(args)
    descriptor = grid_descriptor(args)
    T_s = parse_temperature(args.Ts) if args.Ts is not None else 0.0
    domain = pde.build_domain(descriptor, args.resolution or 32)
    fld = pde.solve(
        domain, material, params, T_s,
        tol=args.tol or 1e-10, boundary=args.boundary or "face", constants=constants,
    )
    print(_header(params, constants, material))
    print(
        f"{descriptor}: grid {domain.shape}, h = {domain.spacing:.4g} m, "
        f"{fld.iterations} iterations, residual {fld.residual:.2e}"
    )
    print(f"T_c = {fld.T_c:.4e} K")
    if args.out:
        pde.write_field_csv(fld, args.out)
    return EXIT_OK


def parse_scan_axis(axis_spec: str):
    """``"lambda:1e-8:10^-7.7:2:log"`` -> (column name, values)."""
    parts = axis_spec.split(":")
    if len(parts) != 5:
        raise UsageError(f"scan axis {axis_spec!r}: expected PARAM:START:STOP:COUNT:lin|log")
    name, start, stop, count, spacing = parts
    if name not in SCAN_PARAMS:
        raise UsageError(f"scan axis {axis_spec!r}: parameter must be one of lambda, rc, L")
    parse = parse_rate if name == "lambda" else parse_length
    start, stop = parse(start), parse(stop)
    try:
        count = int(count)
    except ValueError:
        raise UsageError(f"scan axis {axis_spec!r}: count must be an integer") from None
    if count < 1:
        raise UsageError(f"scan axis {axis_spec!r}: count must be >= 1")
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise UsageError(f"scan axis {axis_spec!r}: log spacing needs positive endpoints")
        values = np.logspace(np.log10(start), np.log10(stop), count) if count > 1 else np.array([start])
        # pin the endpoints against logspace round-off
        values[0] = start
        if count > 1:
            values[-1] = stop
    elif spacing == "lin":
        values = np.linspace(start, stop, count) if count > 1 else np.array([start])
    else:
        raise UsageError(f"scan axis {axis_spec!r}: spacing must be lin or log")
    return SCAN_PARAMS[name], values


def scan_rows(args):
    """Yield ``(header, rows)`` for the configured sweep; rows are in axis order."""
    axes = [parse_scan_axis(s) for s in (args.scan or [])]
    if not 1 <= len(axes) <= 2:
        raise UsageError("give one or two --scan axes")
    if len({name for name, _ in axes}) != len(axes):
        raise UsageError("scan axes must be distinct parameters")
    registry = _registry(args)
    material = registry[args.material or "copper-rrr30"]
    base, constants = _noise(args), _constants(args)
    T_s = parse_temperature(args.Ts) if args.Ts is not None else 0.0

    header = [name for name, _ in axes] + ["Q_W_m3", "T_c_K"]
    rows = []
    for point in itertools.product(*(values for _, values in axes)):
        values = dict(zip((name for name, _ in axes), point))
        params = NoiseParams(values.get("lambda_per_s", base.lam), values.get("r_C_m", base.r_C))
        L = values.get("L_m")
        if args.grid:
            domain = pde.build_domain(grid_descriptor(args, L), args.resolution or 32)
            T_c = pde.solve(domain, material, params, T_s, tol=args.tol or 1e-10,
                            boundary=args.boundary or "face", constants=constants).T_c
        else:
            case = analytic_case(args, L)
            T_c = analytic.central_temperature(case, material, params, constants)
        Q = volumetric_heating(params, material.rho, constants)
        rows.append(list(point) + [Q, T_c])
    return header, rows, (base, constants, material)


def cmd_scan(args) -> int:
    header, rows, (params, constants, material) = scan_rows(args)
    lines = [",".join(header)] + [",".join(fmt(v) for v in row) for row in rows]
    if args.out:
        _write_lines(args.out, lines)
        print(_header(params, constants, material))
        print(f"{len(rows)} points written to {args.out}; T_c from {rows[0][-1]:.4e} to {rows[-1][-1]:.4e} K")
    else:
        _write_lines(None, lines)
    return EXIT_OK


def cmd_constrain(args) -> int:
    registry = _registry(args)
    params, constants = _noise(args), _constants(args)
    records = (
        constraints.load_experiments_file(args.experiments)
        if args.experiments
        else constraints.bundled_experiments()
    )
    kinds = constraints.TEMPERATURE_KINDS if args.include_spin else constraints.DEFAULT_ALLOWED_KINDS
    results = [
        constraints.evaluate(r, params, registry, allowed_kinds=kinds, constants=constants)
        for r in records
    ]
    print(f"# noise: lambda = {params.lam:.4g} 1/s, r_C = {params.r_C:.4g} m ({constants.name} constants)")
    for res in results:
        verdict = "CONSTRAINS" if res.constrains else "no constraint"
        print(
            f"{res.name}: predicted T_c = {res.predicted_Tc:.3e} K, measured {res.measured_T:.3e} K, "
            f"margin {res.margin:.3g}, {verdict}; lambda_max = {res.lambda_max:.3e} 1/s"
        )
        for note in res.notes:
            print(f"    note: {note}")
    if args.out:
        lines = ["name,predicted_Tc_K,measured_T_K,margin,constrains,lambda_max_per_s"]
        for res in results:
            lines.append(
                ",".join([res.name, fmt(res.predicted_Tc), fmt(res.measured_T), fmt(res.margin),
                          str(res.constrains).lower(), fmt(res.lambda_max)])
            )
        _write_lines(args.out, lines)
    return EXIT_OK


def cmd_materials(args) -> int:
    registry = _registry(args)
    lines = ["name,rho_kg_m3,k0_hat_SI,beta,valid_below_K"]
    for m in registry.values():
        lines.append(f"{m.name},{fmt(m.rho)},{fmt(m.k0_hat)},{fmt(m.beta)},{fmt(m.valid_below)}")
    _write_lines(args.out, lines)
    return EXIT_OK


COMMANDS = {
    "estimate": cmd_estimate,
    "solve": cmd_solve,
    "scan": cmd_scan,
    "constrain": cmd_constrain,
    "materials": cmd_materials,
}


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        with warnings.catch_warnings():
            warnings.showwarning = _show_warning
            if args.command == "constrain":
                # reported per record as notes
                warnings.simplefilter("ignore", ValidityWarning)
            return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MaterialError as exc:
        print(f"material error: {exc}", file=sys.stderr)
        return EXIT_MATERIAL
    except ConvergenceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except (UnsupportedCaseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
