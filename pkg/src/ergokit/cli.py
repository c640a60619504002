"""Command-line front end binding the toolkit into reproducible
experiments with machine-readable outputs.

Every run prints a JSON report to stdout carrying a schema version, the
tool version, and the fully resolved configuration (defaults included).
Data artifacts go to ``--out`` as CSV and plots to ``--plot`` as vector
files.  Runs with the same configuration and seed produce byte-identical
CSV and JSON; wall-clock time is therefore only embedded when requested
with ``--timing``.

Exit codes: 0 success (or certificate established), 2 runtime failure,
3 inconclusive certification, 4 precondition failed.
"""

import argparse
import os
import sys
import time

import numpy as np

from . import __version__
from .certify import certify_exactness
from .errors import (
    CalibrationError,
    ConvergenceError,
    DomainError,
    ExtinctionError,
    FactorizationError,
    InstabilityError,
    InvalidParameterError,
    KinkError,
    PreconditionError,
)
from .maps import make_catalog_map
from .sampling import (
    invariant_state_ensemble,
    ou_ensemble,
    sample_invariant_state,
    sample_wiener,
)
from .semiflow import (
    grid_mass,
    linear_semiflow,
    stationarity_test,
    turbulence_report,
)
from .serialize import (
    density_to_csv,
    density_from_csv,
    ensemble_to_csv,
    read_text,
    report_json,
    trajectory_to_csv,
    write_text,
)
from .transfer import (
    arcsine_density,
    birkhoff_average,
    invariant_density,
    iterate_density,
    log_slope_observable,
    ulam_matrix,
    uniform_density,
)

MAP_KINDS = ("tent", "logistic", "cubic", "beverton-holt", "ricker")

EXIT_OK = 0
EXIT_RUNTIME = 2
EXIT_INCONCLUSIVE = 3
EXIT_PRECONDITION = 4


def _resolve_threads():
    raw = os.environ.get("ERGOKIT_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise InvalidParameterError(f"ERGOKIT_THREADS must be a positive integer, got {raw!r}")
    # best-effort cap on BLAS pools; harmless when already initialized
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(n))
    return n


def _parse_params(pairs):
    params = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise InvalidParameterError(f"--param expects name=value, got {item!r}")
        try:
            params[name] = float(value)
        except ValueError:
            raise InvalidParameterError(f"--param value for {name!r} is not a number: {value!r}")
    return params


def _build_map(args):
    return make_catalog_map(args.map, **_parse_params(args.param))


def _seed_flag(p, required=False):
    p.add_argument("--seed", type=int, required=required, default=None,
                   help="64-bit unsigned seed for reproducible sampling")


def _common_flags(p):
    p.add_argument("--out", default=None, help="path for the CSV data artifact")
    p.add_argument("--plot", default=None, help="path for a vector-graphic plot (.svg/.pdf)")
    p.add_argument("--timing", action="store_true",
                   help="embed wall-clock seconds in the report (breaks byte-identity)")


def _map_flags(p):
    p.add_argument("--map", required=True, choices=MAP_KINDS, help="catalog map kind")
    p.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="map parameter, repeatable (e.g. --param lambda=0.4)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ergokit",
        description="numerical experiments for transfer operators, exactness "
                    "certificates, and chaotic semiflows",
    )
    parser.add_argument("--version", action="version", version=f"ergokit {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("certify", help="exactness certificate for a catalog map")
    _map_flags(p)
    p.add_argument("--grid", type=int, default=100_000, help="evaluation grid size")
    _common_flags(p)

    p = sub.add_parser("invariant", help="invariant density by the piecewise-constant operator matrix")
    _map_flags(p)
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--tol", type=float, default=1e-12, help="power-iteration L1 tolerance")
    p.add_argument("--max-iter", type=int, default=100_000)
    _common_flags(p)

    p = sub.add_parser("iterate", help="push a density forward and track distances to the fixed point")
    _map_flags(p)
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--start", default="uniform",
                   help="'uniform' or a path to a density CSV on the same bins")
    _common_flags(p)

    p = sub.add_parser("birkhoff", help="time average of an observable along an orbit")
    _map_flags(p)
    p.add_argument("--x0", type=float, required=True, help="orbit start point")
    p.add_argument("--iters", type=int, default=1_000_000)
    p.add_argument("--observable", choices=("identity", "log-slope"), default="identity")
    _common_flags(p)

    p = sub.add_parser("semiflow", help="evolve a state and stream space-time frames")
    p.add_argument("--lam", type=float, required=True, help="semiflow exponent")
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--dt", type=float, default=0.05, help="output frame spacing")
    p.add_argument("--n-grid", type=int, default=257)
    p.add_argument("--init", choices=("power", "sample"), default="power",
                   help="initial state: x^(alpha*lam) or a draw from the invariant measure")
    p.add_argument("--alpha", type=float, default=1.0, help="exponent fraction for --init power")
    p.add_argument("--stride", type=int, default=1, help="keep every stride-th frame in the CSV")
    _seed_flag(p)
    _common_flags(p)

    p = sub.add_parser("turbulence", help="second-order statistics of the boundary trace")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--horizon", type=float, default=10_000.0)
    p.add_argument("--dt", type=float, default=0.025)
    p.add_argument("--lag", type=float, action="append", default=None,
                   help="autocovariance lag, repeatable (default 0, 0.5, 1, 2, 5/lam)")
    p.add_argument("--probe-x", type=float, action="append", default=None,
                   help="also report the autocovariance of the trace at this point, repeatable")
    _seed_flag(p, required=True)
    _common_flags(p)

    p = sub.add_parser("stationarity", help="two-ensemble invariance check of the sampled measure")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--t", type=float, default=0.5, help="push time")
    p.add_argument("--n-samples", type=int, default=10_000)
    p.add_argument("--push-lam", type=float, default=None,
                   help="mismatched push exponent for negative controls")
    p.add_argument("--n-grid", type=int, default=1001)
    _seed_flag(p, required=True)
    _common_flags(p)

    p = sub.add_parser("sample", help="stream ensembles of Gaussian paths or states")
    p.add_argument("--kind", choices=("wiener", "ou", "invariant"), required=True)
    p.add_argument("--lam", type=float, default=1.0, help="rate for ou / exponent for invariant")
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--n-grid", type=int, default=257, help="spatial grid for --kind invariant")
    p.add_argument("--n-samples", type=int, default=10)
    _seed_flag(p, required=True)
    _common_flags(p)

    return parser


# -- subcommand pipelines ------------------------------------------------------


def _run_certify(args):
    report = certify_exactness(_build_map(args), grid_size=args.grid)
    code = {"certified": EXIT_OK,
            "inconclusive": EXIT_INCONCLUSIVE,
            "precondition-failed": EXIT_PRECONDITION}[report.status]
    return code, report.to_dict(), None, None


def _density_overlay(m):
    if m.kind == "tent":
        return (lambda x: 1.0), "uniform"
    if m.kind == "logistic":
        return arcsine_density, "arcsine"
    return None, None


def _run_invariant(args):
    m = _build_map(args)
    tm = ulam_matrix(m, args.bins)
    density = invariant_density(tm, tol=args.tol, max_iter=args.max_iter)
    residual = float(np.abs(tm.propagate(density.masses) - density.masses).sum())
    result = {
        "bins": args.bins,
        "fixed_point_residual": residual,
        "min_mass": float(np.min(density.masses)),
        "max_mass": float(np.max(density.masses)),
    }
    overlay, label = _density_overlay(m)

    def plotter(path):
        from .plots import plot_density
        plot_density(density, path, overlay=overlay, overlay_label=label,
                     title=f"{m.kind} invariant density, {args.bins} bins")

    return EXIT_OK, result, density_to_csv(density), plotter


def _run_iterate(args):
    m = _build_map(args)
    tm = ulam_matrix(m, args.bins)
    reference = invariant_density(tm)
    if args.start == "uniform":
        f0 = uniform_density(args.bins, m.domain_length)
    else:
        f0 = density_from_csv(read_text(args.start))
        if f0.n != args.bins or abs(f0.domain_length - m.domain_length) > 1e-9:
            raise InvalidParameterError("start density does not match the requested bins/domain")
    final, distances = iterate_density(m, f0, args.steps, reference, matrix=tm)
    result = {"steps": args.steps, "l1_to_invariant": [float(d) for d in distances]}

    def plotter(path):
        from .plots import plot_density
        plot_density(final, path, title=f"{m.kind} density after {args.steps} steps")

    return EXIT_OK, result, density_to_csv(final), plotter


def _run_birkhoff(args):
    m = _build_map(args)
    if args.observable == "identity":
        obs = lambda x: x
    else:
        obs = log_slope_observable(m)
    average = birkhoff_average(m, args.x0, obs, args.iters)
    result = {"observable": args.observable, "x0": args.x0,
              "iters": args.iters, "average": float(average)}
    return EXIT_OK, result, None, None


def _run_semiflow(args):
    grid = np.linspace(0.0, 1.0, args.n_grid)
    if args.init == "sample":
        if args.seed is None:
            raise InvalidParameterError("--init sample requires --seed")
        v0 = sample_invariant_state(args.lam, grid, args.seed)
    else:
        from .gridfn import GridFunction
        v0 = GridFunction(grid ** (args.alpha * args.lam))
    times = np.arange(0.0, args.t_max + 0.5 * args.dt, args.dt)
    frames = np.empty((times.size, grid.size))
    for k, t in enumerate(times):
        frames[k] = linear_semiflow(args.lam, v0, float(t)).values
    final = linear_semiflow(args.lam, v0, float(times[-1]))
    result = {
        "n_frames": int(times.size),
        "final_sup": float(np.max(np.abs(final.values))),
        "final_mass": grid_mass(final),
    }

    def plotter(path):
        from .plots import plot_trajectory
        plot_trajectory(times, grid, frames, path, title=f"semiflow, lam={args.lam}")

    return EXIT_OK, result, trajectory_to_csv(times, grid, frames, stride=args.stride), plotter


def _run_turbulence(args):
    report = turbulence_report(args.lam, seed=args.seed, horizon=args.horizon,
                               dt=args.dt, lags=args.lag, probe_x=args.probe_x)
    result = report.to_dict()
    if result["pointwise"] is not None:
        result["pointwise"] = {repr(x): list(g) for x, g in result["pointwise"].items()}

    def plotter(path):
        from .plots import plot_autocov
        plot_autocov(report, path, title=f"trace autocovariance, lam={args.lam}")

    return EXIT_OK, result, None, plotter


def _run_stationarity(args):
    result = stationarity_test(args.lam, args.t, args.n_samples, args.seed,
                               push_lam=args.push_lam, n_grid=args.n_grid)
    return EXIT_OK, result.to_dict(), None, None


def _run_sample(args):
    if args.kind == "invariant":
        grid = np.linspace(0.0, 1.0, args.n_grid)
        values = invariant_state_ensemble(args.lam, grid, args.n_samples, args.seed)
        csv_text = ensemble_to_csv(grid, values)
        result = {"kind": args.kind, "n_samples": args.n_samples, "n_points": int(grid.size)}
        return EXIT_OK, result, csv_text, None
    times = np.arange(0.0, args.t_max + 0.5 * args.dt, args.dt)
    if args.kind == "wiener":
        values = np.vstack([sample_wiener(times, args.seed, index=i).values
                            for i in range(args.n_samples)])
    else:
        values = ou_ensemble(args.lam, times, args.n_samples, args.seed)
    result = {"kind": args.kind, "n_samples": args.n_samples, "n_points": int(times.size)}
    return EXIT_OK, result, ensemble_to_csv(times, values), None


_HANDLERS = {
    "certify": _run_certify,
    "invariant": _run_invariant,
    "iterate": _run_iterate,
    "birkhoff": _run_birkhoff,
    "semiflow": _run_semiflow,
    "turbulence": _run_turbulence,
    "stationarity": _run_stationarity,
    "sample": _run_sample,
}


def _resolved_config(args, threads):
    config = {k: v for k, v in vars(args).items() if k != "cmd"}
    if "param" in config:
        config["param"] = _parse_params(config["param"])
    config["threads"] = threads
    return config


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        threads = _resolve_threads()
        code, result, csv_text, plotter = _HANDLERS[args.cmd](args)
        if csv_text is not None and args.out:
            write_text(args.out, csv_text)
        if args.plot:
            if plotter is None:
                raise InvalidParameterError(f"subcommand {args.cmd!r} has no plot output")
            plotter(args.plot)
    except PreconditionError as exc:
        print(f"ergokit: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InvalidParameterError, DomainError, CalibrationError, KinkError,
            ConvergenceError, ExtinctionError, InstabilityError, FactorizationError,
            OSError) as exc:
        print(f"ergokit: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    payload = {
        "schema": 1,
        "tool": "ergokit",
        "version": __version__,
        "subcommand": args.cmd,
        "config": _resolved_config(args, threads),
        "result": result,
    }
    if args.timing:
        payload["wall_clock_s"] = time.perf_counter() - started
    sys.stdout.write(report_json(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
