"""Command-line front end: configured experiments with machine-readable outputs.

Usage: geoflow <command> --config <file> --out <dir> [--seed <int>]
Commands: geodesic exp log transport minimize burgers selftest.
Exit codes: 0 success, 2 configuration error, 3 numerical error (recorded in
the manifest).  GEOFLOW_THREADS caps parallelism where commands fan out.
"""

from __future__ import annotations

import argparse
import importlib.metadata
import json
import os
import sys
import time
from pathlib import Path

import jsonschema
import numpy as np

from . import burgers as bg
from . import io as gio
from . import transport as tp
from .diffeo import rotation
from .errors import ConfigError, GeoflowError
from .explog import ExpConfig, riemann_exp, riemann_log
from .geodesic import SolverConfig, integrate_geodesic
from .spectral import GridSpec, PeriodicField, inner_k, random_band_limited

NAMED_FIELDS = {
    "sin1": lambda x: np.sin(2 * np.pi * x),
    "cos2": lambda x: np.cos(4 * np.pi * x),
    "mix": lambda x: np.sin(2 * np.pi * x) + 0.5 * np.cos(4 * np.pi * x),
}

FIELD_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["named", "fourier", "random", "file"]},
        "name": {"enum": sorted(NAMED_FIELDS)},
        "scale": {"type": "number"},
        "constant": {"type": "number"},
        "cos": {"type": "array", "items": {"type": "number"}},
        "sin": {"type": "array", "items": {"type": "number"}},
        "seed": {"type": "integer"},
        "max_mode": {"type": "integer", "minimum": 0},
        "amplitude": {"type": "number", "minimum": 0},
        "path": {"type": "string"},
    },
}

PSI_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["rotation", "file", "exp_of"]},
        "angle": {"type": "number"},
        "path": {"type": "string"},
        "u0": FIELD_SCHEMA,
    },
}

_BASE = {
    "k": {"type": "integer", "minimum": 0, "maximum": 4},
    "n_points": {"type": "integer", "minimum": 8},
    "dt": {"type": "number", "exclusiveMinimum": 0},
    "t_end": {"type": "number", "exclusiveMinimum": 0},
}

SCHEMAS = {
    "geodesic": {
        "type": "object",
        "required": ["k", "n_points", "dt", "t_end", "u0"],
        "additionalProperties": False,
        "properties": {
            **_BASE,
            "integrator": {"enum": ["rk4", "rk4_mform"]},
            "record_every": {"type": "integer", "minimum": 1},
            "u0": FIELD_SCHEMA,
        },
    },
    "exp": {
        "type": "object",
        "required": ["k", "n_points", "dt", "u0"],
        "additionalProperties": False,
        "properties": {**_BASE, "u0": FIELD_SCHEMA},
    },
    "log": {
        "type": "object",
        "required": ["k", "n_points", "dt", "psi"],
        "additionalProperties": False,
        "properties": {
            **_BASE,
            "psi": PSI_SCHEMA,
            "shooting_modes": {"type": "integer", "minimum": 1},
            "fd_step": {"type": "number"},
            "newton_tol": {"type": "number"},
            "newton_max_iter": {"type": "integer", "minimum": 1},
        },
    },
    "transport": {
        "type": "object",
        "required": ["k", "n_points", "dt", "t_end", "u0", "v0"],
        "additionalProperties": False,
        "properties": {**_BASE, "u0": FIELD_SCHEMA, "v0": FIELD_SCHEMA},
    },
    "minimize": {
        "type": "object",
        "required": ["k", "n_points", "dt", "u0"],
        "additionalProperties": False,
        "properties": {
            **_BASE,
            "u0": FIELD_SCHEMA,
            "n_perturbations": {"type": "integer", "minimum": 1},
            "amplitude": {"type": "number", "exclusiveMinimum": 0},
            "n_time_samples": {"type": "integer", "minimum": 8},
            "seed": {"type": "integer"},
        },
    },
    "burgers": {
        "type": "object",
        "required": ["n_points", "u0"],
        "additionalProperties": False,
        "properties": {
            "n_points": _BASE["n_points"],
            "u0": FIELD_SCHEMA,
            "t_fraction": {"type": "number", "exclusiveMinimum": 0,
                           "exclusiveMaximum": 1},
            "dt_spectral": {"type": "number", "exclusiveMinimum": 0},
        },
    },
    "selftest": {
        "type": "object",
        "additionalProperties": False,
        "properties": {"n_points": _BASE["n_points"], "seed": {"type": "integer"}},
    },
}


def _validate(command, config):
    try:
        jsonschema.validate(config, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config field {loc}: {exc.message}") from exc


def build_field(spec, grid, seed_override=None):
    kind = spec["kind"]
    scale = float(spec.get("scale", 1.0))
    if kind == "named":
        if "name" not in spec:
            raise ConfigError("named field spec needs a 'name'")
        u = PeriodicField.from_function(grid, NAMED_FIELDS[spec["name"]])
    elif kind == "fourier":
        x = grid.nodes
        vals = np.full(grid.n_points, float(spec.get("constant", 0.0)))
        for m, a in enumerate(spec.get("cos", []), start=1):
            vals += a * np.cos(2 * np.pi * m * x)
        for m, b in enumerate(spec.get("sin", []), start=1):
            vals += b * np.sin(2 * np.pi * m * x)
        u = PeriodicField(grid, vals)
    elif kind == "random":
        seed = seed_override if seed_override is not None else spec.get("seed", 0)
        u = random_band_limited(
            grid,
            seed,
            spec.get("max_mode", grid.max_mode),
            spec.get("amplitude", 1.0),
        )
    elif kind == "file":
        data = gio.load_json(spec["path"])
        u = gio.field_from_dict(data)
        if u.grid != grid:
            raise ConfigError(
                f"field file {spec['path']} has n_points={u.grid.n_points}, "
                f"expected {grid.n_points}"
            )
    else:  # pragma: no cover - schema rejects this
        raise ConfigError(f"unknown field kind {kind!r}")
    return u if scale == 1.0 else scale * u


def _solver(config, grid, default_t_end=1.0):
    return SolverConfig(
        k=config.get("k", 0),
        grid=grid,
        dt=config["dt"],
        t_end=config.get("t_end", default_t_end),
        integrator=config.get("integrator", "rk4_mform"),
        record_every=config.get("record_every", 1),
    )


def run_geodesic(config, out, seed):
    grid = GridSpec(config["n_points"])
    u0 = build_field(config["u0"], grid, seed)
    traj = integrate_geodesic(u0, _solver(config, grid))
    gio.save_json(out / "trajectory.json", gio.trajectory_to_dict(traj))
    gio.trajectory_to_csv(out / "trajectory.csv", traj)
    e = traj.energy
    return {
        "final_time": float(traj.final.t),
        "energy_drift": float(np.max(np.abs(e - e[0])) / max(e[0], 1e-300)),
        "final_momentum_dev": float(traj.momentum_deviation[-1]),
        "max_momentum_dev": float(np.max(traj.momentum_deviation)),
    }


def run_exp(config, out, seed):
    grid = GridSpec(config["n_points"])
    u0 = build_field(config["u0"], grid, seed)
    cfg = ExpConfig(solver=_solver(config, grid))
    phi = riemann_exp(config["k"], u0, cfg)
    gio.save_json(out / "exp.json", gio.diffeo_to_dict(phi))
    return {"displacement_sup": float(np.max(np.abs(phi.displacement.values)))}


def _build_psi(spec, grid, k, cfg, seed):
    kind = spec["kind"]
    if kind == "rotation":
        return rotation(grid, float(spec.get("angle", 0.0)))
    if kind == "file":
        data = gio.load_json(spec["path"])
        return gio.diffeo_from_dict(data)
    u0 = build_field(spec["u0"], grid, seed)
    return riemann_exp(k, u0, cfg)


def run_log(config, out, seed):
    grid = GridSpec(config["n_points"])
    cfg = ExpConfig(
        solver=_solver(config, grid),
        fd_step=config.get("fd_step", 1e-4),
        newton_tol=config.get("newton_tol", 1e-10),
        newton_max_iter=config.get("newton_max_iter", 30),
        shooting_modes=config.get("shooting_modes", 0),
    )
    psi = _build_psi(config["psi"], grid, config["k"], cfg, seed)
    result = riemann_log(config["k"], psi, cfg, full_output=True)
    gio.save_json(out / "log_u0.json", gio.field_to_dict(result.u0))
    gio.write_csv(
        out / "convergence.csv",
        ["iter", "residual"],
        [(str(i), r) for i, r in enumerate(result.residuals)],
    )
    return {
        "iterations": result.iterations,
        "final_residual": float(result.residuals[-1]),
    }


def run_transport(config, out, seed):
    grid = GridSpec(config["n_points"])
    k = config["k"]
    u0 = build_field(config["u0"], grid, seed)
    v0 = build_field(config["v0"], grid, None if seed is None else seed + 1)
    traj = integrate_geodesic(u0, _solver(config, grid))
    path = tp.PathOnGroup.from_trajectory(traj)
    vs = tp.parallel_transport(k, path, v0)
    n0 = inner_k(k, v0, v0)
    rows = []
    for t, v in zip(path.times, vs):
        n = inner_k(k, v, v)
        rows.append((t, n, abs(n - n0) / max(n0, 1e-300)))
    gio.write_csv(out / "transport.csv", ["t", "norm_sq", "drift"], rows)
    gio.save_json(out / "transported_final.json", gio.field_to_dict(vs[-1]))
    return {"max_norm_drift": float(max(r[2] for r in rows))}


def run_minimize(config, out, seed):
    grid = GridSpec(config["n_points"])
    u0 = build_field(config["u0"], grid, None)
    cfg = ExpConfig(solver=_solver(config, grid))
    report = tp.minimization_experiment(
        config["k"],
        u0,
        cfg,
        n_perturbations=config.get("n_perturbations", 20),
        seed=seed if seed is not None else config.get("seed", 0),
        amplitude=config.get("amplitude", 0.02),
        n_time_samples=config.get("n_time_samples", 64),
        max_workers=_max_workers(),
    )
    gio.minimization_report_to_csv(out / "minimize.csv", report)
    return {
        "r": report.r,
        "geodesic_length": report.geodesic_length,
        "all_above_bound": bool(report.all_above_bound),
        "excluded": sum(1 for s in report.samples if not s.in_chart),
    }


def run_burgers(config, out, seed):
    grid = GridSpec(config["n_points"])
    u0 = build_field(config["u0"], grid, seed)
    tstar = bg.blowup_time(u0)
    detected = bg.detect_blowup_time(u0)
    results = {"analytic_blowup_time": tstar, "detected_blowup_time": detected}
    if np.isfinite(tstar):
        t = config.get("t_fraction", 0.5) * tstar
        sol = bg.characteristics_solve(u0, t)
        cfg = SolverConfig(
            k=0,
            grid=grid,
            dt=config.get("dt_spectral", 1e-5),
            t_end=t,
            record_every=10 ** 9,
        )
        traj = integrate_geodesic(u0, cfg)
        sup = float(np.max(np.abs(traj.final.u.values - sol.u_values)))
        results["cross_validation_time"] = t
        results["char_vs_spectral_sup"] = sup
        gio.write_csv(
            out / "solution.csv",
            ["x", "u_characteristics", "u_spectral"],
            list(zip(grid.nodes, sol.u_values, traj.final.u.values)),
        )
    return results


def _selftest_checks(n_points, seed):
    """Compact versions of the module invariants; yields (name, ok, detail)."""
    from .diffeo import compose, invert
    from .operators import bilinear_B, lie_bracket

    grid = GridSpec(n_points)
    rng = range(3)

    errs = []
    for s in rng:
        u = random_band_limited(grid, seed + s, 12)
        v = random_band_limited(grid, seed + 50 + s, 12)
        w = random_band_limited(grid, seed + 100 + s, 12)
        for k in (1, 2):
            lhs = inner_k(k, bilinear_B(k, u, v), w)
            rhs = inner_k(k, u, lie_bracket(v, w))
            errs.append(abs(lhs - rhs) / (1 + abs(rhs)))
    yield "adjoint identity", max(errs) <= 1e-10, f"max rel err {max(errs):.2e}"

    from .spectral import apply_inertia, invert_inertia

    errs = []
    for k in range(5):
        u = random_band_limited(grid, seed + 7, grid.max_mode)
        rt = invert_inertia(k, apply_inertia(k, u))
        errs.append(float(np.max(np.abs(rt.values - u.values))))
    yield "inertia round trip", max(errs) <= 1e-12, f"max sup err {max(errs):.2e}"

    from .diffeo import CircleDiffeo

    phi = CircleDiffeo(random_band_limited(grid, seed + 13, 6, 0.05))
    err = float(
        np.max(np.abs(compose(phi, invert(phi)).displacement.values))
    )
    yield "diffeo inversion", err <= 1e-10, f"sup err {err:.2e}"

    u0 = random_band_limited(grid, seed + 21, 4, 0.05)
    cfg = SolverConfig(k=1, grid=grid, dt=2e-3, t_end=0.5, record_every=25)
    traj = integrate_geodesic(u0, cfg)
    e = traj.energy
    edrift = float(np.max(np.abs(e - e[0])) / e[0])
    yield "energy conservation", edrift <= 1e-8, f"rel drift {edrift:.2e}"
    mdev = float(np.max(traj.momentum_deviation))
    yield "momentum conservation", mdev <= 1e-6, f"rel dev {mdev:.2e}"

    x = grid.nodes
    ub = PeriodicField(grid, np.sin(2 * np.pi * x))
    det = bg.detect_blowup_time(ub)
    rel = abs(det - 1.0 / (6 * np.pi)) * 6 * np.pi
    yield "k=0 blow-up detection", rel <= 0.02, f"rel err {rel:.2e}"


def run_selftest(config, out, seed):
    n_points = config.get("n_points", 128)
    seed = seed if seed is not None else config.get("seed", 0)
    rows = []
    ok_all = True
    for name, ok, detail in _selftest_checks(n_points, seed):
        rows.append((name, "PASS" if ok else "FAIL", detail))
        ok_all &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name:28s} {detail}")
    gio.write_csv(out / "selftest.csv", ["check", "status", "detail"], rows)
    if not ok_all:
        raise GeoflowError("selftest failed; see selftest.csv")
    return {"checks": len(rows), "all_passed": True}


RUNNERS = {
    "geodesic": run_geodesic,
    "exp": run_exp,
    "log": run_log,
    "transport": run_transport,
    "minimize": run_minimize,
    "burgers": run_burgers,
    "selftest": run_selftest,
}


def _max_workers():
    try:
        return max(1, int(os.environ.get("GEOFLOW_THREADS", "1")))
    except ValueError:
        return 1


def _version():
    try:
        return importlib.metadata.version("geoflow")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"


def run(command, config, output_dir, seed=None):
    """Execute one command; returns the process exit status (0, 2 or 3)."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "command": command,
        "config": config,
        "seed": seed,
        "version": _version(),
        "status": "ok",
    }
    start = time.perf_counter()
    try:
        _validate(command, config)
        manifest["results"] = RUNNERS[command](config, out, seed)
        status = 0
    except ConfigError as exc:
        manifest["status"] = "config-error"
        manifest["error"] = str(exc)
        print(f"error: {exc}", file=sys.stderr)
        status = 2
    except GeoflowError as exc:
        manifest["status"] = "numerical-error"
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        print(f"error: {exc}", file=sys.stderr)
        status = 3
    manifest["wall_time_s"] = time.perf_counter() - start
    gio.save_json(out / "manifest.json", manifest)
    return status


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="geoflow",
        description="Geodesic experiments on the circle diffeomorphism group.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument(
            "--config",
            required=(name != "selftest"),
            help="JSON experiment configuration",
        )
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="seed override")
    args = parser.parse_args(argv)
    if args.config is None:
        config = {}
    else:
        try:
            config = gio.load_json(args.config)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config {args.config}: {exc}",
                  file=sys.stderr)
            return 2
    return run(args.command, config, args.out, args.seed)


if __name__ == "__main__":
    sys.exit(main())
