"""JSON/CSV serialization of fields, diffeomorphisms and run artifacts.

Floating-point CSV output is fixed to 17 significant digits so identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from .diffeo import CircleDiffeo
from .spectral import GridSpec, PeriodicField

FLOAT_FMT = "%.17g"


def _fmt(x):
    return FLOAT_FMT % float(x)


def field_to_dict(u):
    return {"n_points": u.grid.n_points, "values": [float(v) for v in u.values]}


def field_from_dict(d, max_mode=0):
    grid = GridSpec(int(d["n_points"]), max_mode)
    return PeriodicField(grid, np.asarray(d["values"], dtype=float))


def diffeo_to_dict(phi):
    d = field_to_dict(phi.displacement)
    d["type"] = "diffeo"
    return d


def diffeo_from_dict(d, max_mode=0):
    return CircleDiffeo(field_from_dict(d, max_mode))


def save_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def trajectory_to_dict(traj):
    return {
        "k": traj.k,
        "times": [float(s.t) for s in traj.states],
        "energy": [float(e) for e in traj.energy],
        "momentum_dev": [float(m) for m in traj.momentum_deviation],
        "states": [
            {
                "t": float(s.t),
                "phi": diffeo_to_dict(s.phi),
                "u": field_to_dict(s.u),
            }
            for s in traj.states
        ],
    }


def write_csv(path, header, rows):
    """Write rows of numbers/strings with deterministic float formatting."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [
                cell if isinstance(cell, str) else _fmt(cell) for cell in row
            ]
            fh.write(",".join(cells) + "\n")


def trajectory_to_csv(path, traj):
    write_csv(
        path,
        ["t", "energy", "momentum_dev"],
        [
            (s.t, e, m)
            for s, e, m in zip(traj.states, traj.energy, traj.momentum_deviation)
        ],
    )


def minimization_report_to_csv(path, report):
    write_csv(
        path,
        ["sample_id", "length", "r", "excess", "in_chart"],
        [
            (str(s.sample_id), s.length, report.r, s.excess, str(int(s.in_chart)))
            for s in report.samples
        ],
    )


def probe_rows_to_csv(path, rows):
    write_csv(
        path,
        ["direction_id", "h", "fd_norm", "ratio"],
        [(str(r.direction_id), r.h, r.fd_norm, r.ratio) for r in rows],
    )
