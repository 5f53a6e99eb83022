"""Configuration-driven driver: single solves, sweeps, convergence and
singular-value studies.

Config files are JSON; keys mirror the usual grating notation (j, h, N_per,
N_ev, n_i, gamma, c, tau_wa) so published parameter tables transcribe
directly.  Every result file embeds the fully resolved configuration,
including the values substituted for "auto" entries (h, gamma).

Exit codes: 0 success, 2 malformed configuration, 3 numerical failure.
"""

import argparse
import concurrent.futures
import json
import os
import sys
import time

import numpy as np

from .config import SPACING_OVER_EXTENT, ShiftConfig, WaveConfig
from .exceptions import ConfigurationError, WoodscatError
from .geometry import build_mesh, make_circle, make_star
from .lalg import svd_extremes
from .operator import combine_operator, layer_matrices
from .rayleigh import build_modes
from .woodsolve import solve

THREADS_ENV_VAR = "WOODSCAT_THREADS"
DELTA_GRID_POINTS = 41
DELTA_GRID_MAX = 0.1


def _require(cond, message):
    if not cond:
        raise ConfigurationError(message)


def _build_geometry(spec):
    _require(isinstance(spec, dict) and "kind" in spec, "geometry.kind is required")
    kind = spec["kind"]
    if kind == "circle":
        _require("radius" in spec, "geometry.radius is required for circles")
        return make_circle(spec["radius"], tuple(spec.get("center", (0.0, 0.0))))
    if kind == "star":
        return make_star(spec.get("base", 1.0))
    raise ConfigurationError(f"unknown geometry kind {kind!r}")


def _resolve_alpha(incidence, L):
    _require(isinstance(incidence, dict), "incidence must be an object")
    given = [key for key in ("theta", "alpha", "littrow") if key in incidence]
    _require(len(given) == 1, "incidence needs exactly one of theta/alpha/littrow")
    if "littrow" in incidence:
        _require(incidence["littrow"] is True, "incidence.littrow must be true")
        return np.pi / L
    if "alpha" in incidence:
        return float(incidence["alpha"])
    return None  # theta: resolved per-k through WaveConfig.from_theta


def _wave_config(config, k):
    L = float(config["L"])
    incidence = config["incidence"]
    alpha = _resolve_alpha(incidence, L)
    if alpha is None:
        return WaveConfig.from_theta(k, float(incidence["theta"]), L)
    return WaveConfig(k=k, L=L, alpha=alpha)


def _wood_anchor(config, p):
    """Anchor Wood frequency k0 = 2 pi p / L - alpha for the configured mount."""
    L = float(config["L"])
    alpha = _resolve_alpha(config["incidence"], L)
    _require(alpha is not None,
             "delta grids require a k-independent mount (alpha or littrow incidence)")
    k0 = 2.0 * np.pi * p / L - alpha
    _require(k0 > abs(alpha), "Wood anchor is below the incidence cone; increase p")
    return k0


def _frequency_points(config):
    """List of (delta-or-None, k) solve points."""
    spec = config.get("frequency")
    _require(isinstance(spec, dict), "frequency must be an object")
    given = [key for key in ("k", "k_list", "delta_grid") if key in spec]
    _require(len(given) == 1, "frequency needs exactly one of k/k_list/delta_grid")
    if "k" in spec:
        return [(None, float(spec["k"]))]
    if "k_list" in spec:
        ks = [float(k) for k in spec["k_list"]]
        _require(len(ks) > 0, "frequency.k_list must be non-empty")
        return [(None, k) for k in ks]
    grid = spec["delta_grid"]
    _require("p" in grid, "delta_grid.p is required")
    k0 = _wood_anchor(config, int(grid["p"]))
    count = int(grid.get("count", DELTA_GRID_POINTS))
    dmax = float(grid.get("delta_max", DELTA_GRID_MAX))
    deltas = grid.get("deltas")
    if deltas is None:
        deltas = np.linspace(-dmax, dmax, count)
    else:
        deltas = np.asarray([float(d) for d in deltas])
    return [(float(d), k0 + np.sign(d) * abs(d) ** 8) for d in deltas]


def _shift_config(config, cfg, mesh):
    spec = dict(config.get("shift", {}))
    _require("j" in spec, "shift.j is required")
    _require("N_per" in spec, "shift.N_per is required")
    h = spec.get("h")
    if h is None or h == "auto":
        h = SPACING_OVER_EXTENT * mesh.extent
    gamma = spec.get("gamma")
    if gamma is None or gamma == "auto":
        gamma = cfg.k
    return ShiftConfig(n_shifts=int(spec["j"]), spacing=float(h),
                       window_halfwidth=float(spec["N_per"]) * cfg.L,
                       gamma=float(gamma), window_flat=float(spec.get("c", 0.5)),
                       n_evanescent=int(spec.get("N_ev", 20)),
                       wood_threshold=float(spec.get("tau_wa", 1e-2)))


def _resolved_echo(config, cfg, shift, mesh):
    return {
        "geometry": config["geometry"],
        "L": cfg.L,
        "alpha": cfg.alpha,
        "theta": cfg.theta,
        "k": cfg.k,
        "n_i": mesh.n,
        "shift": {
            "j": shift.n_shifts,
            "h": shift.spacing,
            "A": shift.window_halfwidth,
            "N_per": shift.window_halfwidth / cfg.L,
            "c": shift.window_flat,
            "gamma": shift.gamma,
            "N_ev": shift.n_evanescent,
            "tau_wa": shift.wood_threshold,
        },
    }


def _solution_record(config, solution):
    cfg, mesh, modes = solution.cfg, solution.mesh, solution.modes
    return {
        "resolved_config": _resolved_echo(config, cfg, solution.shift, mesh),
        "path": solution.path,
        "wood_indices": [int(n) for n in modes.wood],
        "d": [[z.real, z.imag] for z in solution.d],
        "coefficients": [
            {"order": int(n),
             "c_plus": [solution.c_plus[i].real, solution.c_plus[i].imag],
             "c_minus": [solution.c_minus[i].real, solution.c_minus[i].imag]}
            for i, n in enumerate(modes.indices)
        ],
        "efficiencies": [
            {"order": int(n),
             "eff_plus": float(solution.eff_plus[i]),
             "eff_minus": float(solution.eff_minus[i])}
            for i, n in enumerate(modes.propagating)
        ],
        "energy_balance_error": solution.energy_balance_error,
        "residual": solution.residual,
    }


def _solve_point(config, k):
    cfg = _wave_config(config, k)
    mesh = build_mesh(_build_geometry(config["geometry"]), int(config["n_i"]))
    shift = _shift_config(config, cfg, mesh)
    return solve(mesh, cfg, shift)


def _thread_count(args):
    env = os.environ.get(THREADS_ENV_VAR)
    if env is not None:
        return max(1, int(env))
    return max(1, int(args.threads))


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header, rows):
    import csv
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def run_solve(config, out_dir):
    t0 = time.perf_counter()
    (_, k), = _frequency_points(config)
    solution = _solve_point(config, k)
    record = _solution_record(config, solution)
    record["wall_time_s"] = time.perf_counter() - t0
    _write_json(os.path.join(out_dir, "result.json"), record)
    from .fields import write_efficiency_csv
    write_efficiency_csv(os.path.join(out_dir, "efficiencies.csv"), solution)
    return record


def run_sweep(config, out_dir, threads=1):
    points = _frequency_points(config)
    t0 = time.perf_counter()

    def work(point):
        delta, k = point
        t = time.perf_counter()
        solution = _solve_point(config, k)
        return delta, k, solution, time.perf_counter() - t

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, points))
    else:
        results = [work(p) for p in points]

    rows = []
    records = []
    for delta, k, solution, dt in results:
        rows.append(["" if delta is None else repr(delta), repr(k), solution.path,
                     repr(solution.energy_balance_error),
                     repr(float(solution.eff_plus.sum() + solution.eff_minus.sum())),
                     repr(dt)])
        rec = _solution_record(config, solution)
        rec["delta"] = delta
        records.append(rec)
    _write_csv(os.path.join(out_dir, "sweep.csv"),
               ["delta", "k", "path", "energy_balance_error", "total_efficiency",
                "wall_time_s"], rows)
    _write_json(os.path.join(out_dir, "result.json"),
                {"points": records, "wall_time_s": time.perf_counter() - t0})
    return rows


CONVERGENCE_AXES = ("N_per", "n_i", "N_ev", "j")


def run_convergence(config, out_dir, threads=1):
    spec = config.get("convergence")
    _require(isinstance(spec, dict), "convergence study requires a 'convergence' object")
    axis = spec.get("axis")
    _require(axis in CONVERGENCE_AXES, f"convergence.axis must be one of {CONVERGENCE_AXES}")
    values = spec.get("values")
    _require(isinstance(values, list) and values, "convergence.values must be non-empty")
    points = _frequency_points(config)

    def work(value):
        mutated = json.loads(json.dumps(config))
        if axis == "n_i":
            mutated["n_i"] = int(value)
        else:
            mutated.setdefault("shift", {})[axis] = value
        errs = [_solve_point(mutated, k).energy_balance_error for _, k in points]
        return value, max(errs)

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, values))
    else:
        results = [work(v) for v in values]

    rows = [[repr(v), repr(e)] for v, e in results]
    _write_csv(os.path.join(out_dir, "convergence.csv"), ["parameter", "error"], rows)
    _write_json(os.path.join(out_dir, "result.json"),
                {"axis": axis, "points": [{"parameter": v, "error": e}
                                          for v, e in results]})
    return rows


def run_svd(config, out_dir, threads=1):
    """Extreme singular values of the grazing-excluded operator over a
    delta grid; a gamma list shares the expensive layer assembly per k."""
    points = _frequency_points(config)
    _require(all(d is not None for d, _ in points),
             "svd study requires frequency.delta_grid")
    gamma_list = config.get("gamma_list")
    mesh = build_mesh(_build_geometry(config["geometry"]), int(config["n_i"]))

    rows = []
    for delta, k in points:
        cfg = _wave_config(config, k)
        shift = _shift_config(config, cfg, mesh)
        modes = build_modes(cfg, shift)
        D, S = layer_matrices(mesh, cfg, shift)
        gammas = [shift.gamma] if gamma_list is None else [float(g) for g in gamma_list]
        for gamma in gammas:
            shift_g = ShiftConfig(n_shifts=shift.n_shifts, spacing=shift.spacing,
                                  window_halfwidth=shift.window_halfwidth,
                                  gamma=gamma, window_flat=shift.window_flat,
                                  n_evanescent=shift.n_evanescent,
                                  wood_threshold=shift.wood_threshold)
            M = combine_operator(D, S, mesh, cfg, shift_g, modes,
                                 include_wood_tail=False)
            smin, smax = svd_extremes(M)
            rows.append([repr(delta), repr(k), repr(gamma), repr(smin), repr(smax)])
    _write_csv(os.path.join(out_dir, "svd.csv"),
               ["delta", "k", "gamma", "sigma_min", "sigma_max"], rows)
    _write_json(os.path.join(out_dir, "result.json"),
                {"rows": [{"delta": float(r[0]), "k": float(r[1]),
                           "gamma": float(r[2]), "sigma_min": float(r[3]),
                           "sigma_max": float(r[4])} for r in rows]})
    return rows


def _load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc


def main(argv=None):
    parser = argparse.ArgumentParser(prog="woodscat",
                                     description="Periodic cylinder-array scattering solver")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "sweep", "convergence", "svd"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help=f"worker threads (env {THREADS_ENV_VAR} overrides)")
    args = parser.parse_args(argv)

    try:
        config = _load_config(args.config)
        _require(isinstance(config, dict), "config root must be an object")
        for key in ("geometry", "L", "incidence", "frequency", "n_i"):
            _require(key in config, f"config key {key!r} is required")
        threads = _thread_count(args)
        os.makedirs(args.out, exist_ok=True)
        if args.command == "solve":
            run_solve(config, args.out)
        elif args.command == "sweep":
            run_sweep(config, args.out, threads)
        elif args.command == "convergence":
            run_convergence(config, args.out, threads)
        else:
            run_svd(config, args.out, threads)
    except (ConfigurationError, KeyError, TypeError, ValueError) as exc:
        print(f"woodscat: configuration error: {exc}", file=sys.stderr)
        return 2
    except WoodscatError as exc:
        print(f"woodscat: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
