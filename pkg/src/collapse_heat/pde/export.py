"""CSV export of solved fields and profiles.

Numbers are written in scientific notation with 9 significant digits so
identical runs produce identical bytes.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .domain import CustomMask
from .solver import TemperatureField

__all__ = ["descriptor_record", "write_field_csv", "write_profile_csv"]

FLOAT_FMT = "%.8e"


def descriptor_record(descriptor) -> dict:
    record = {"kind": type(descriptor).__name__}
    if isinstance(descriptor, CustomMask):
        record.update(shape=list(descriptor.mask.shape), spacing=descriptor.spacing)
    else:
        record.update(dataclasses.asdict(descriptor))
    return record


def write_field_csv(fld: TemperatureField, path) -> Path:
    """Write interior nodes as ``x_m,y_m,z_m,T_K`` plus a ``.json`` metadata sidecar.

    Returns the sidecar path.
    """
    path = Path(path)
    domain = fld.domain
    inside = domain.interior
    X, Y, Z = domain.meshgrid()
    table = np.column_stack([X[inside], Y[inside], Z[inside], fld.T[inside]])
    np.savetxt(path, table, fmt=FLOAT_FMT, delimiter=",", header="x_m,y_m,z_m,T_K", comments="")

    meta = {
        "geometry": descriptor_record(domain.descriptor),
        "material": dataclasses.asdict(fld.material) if fld.material else None,
        "params": dataclasses.asdict(fld.params) if fld.params else None,
        "resolution": domain.resolution,
        "spacing_m": domain.spacing,
        "shape": list(domain.shape),
        "boundary_scheme": fld.boundary,
        "T_s_K": fld.T_s,
        "T_c_K": fld.T_c,
        "residual": fld.residual,
        "iterations": fld.iterations,
    }
    sidecar = path.with_name(path.name + ".json")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return sidecar


def write_profile_csv(profile, path) -> None:
    table = np.column_stack([profile.radii, profile.temperatures])
    np.savetxt(Path(path), table, fmt=FLOAT_FMT, delimiter=",", header="position_m,T_K", comments="")
