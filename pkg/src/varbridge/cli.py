"""Command-line front-end.

Subcommands: eval, curve, check-cnd, simulate-gaussian, simulate-br,
empirical, fit, extremal-coeff, classify.

Exit codes: 0 success, 1 validation/usage error, 2 numerical failure
(non-PSD matrix, failed embedding, optimizer made no progress).

Point files are CSV with header ``x1,...,xd[,value1,...,valueR]``: one row
per point, coordinate columns first, then optionally one column per
replicate.  ``simulate-gaussian`` and ``simulate-br`` emit the same schema,
so their output feeds ``empirical``, ``fit`` and ``extremal-coeff`` directly.
All floats are written with 17 significant digits and round-trip exactly;
missing values are empty fields.

The THREADS environment variable (positive integer) is accepted as a
parallel-replicate override; per-replicate random streams make the output
identical at any thread count, and the current implementation runs serially.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .errors import (
    NumericalError,
    OutOfRangeError,
    ValidationError,
    VarbridgeError,
)
from .extremes import (
    MaxStableRealization,
    estimate_extremal_coeff,
    simulate_brown_resnick,
    std_normal_cdf,
    theoretical_extremal_coeff,
)
from .gaussian import (
    GridSpec,
    PointSet,
    circulant_embedding_simulate,
    simulate_pinned_field,
)
from .inference import empirical_variogram, fit
from .model import (
    BridgingVariogram,
    ModelParams,
    classify_regime,
    cnd_quadratic_form,
    evaluate,
    sill,
)
from .svgplot import Series, render_curve_svg


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{message}\n{self.format_usage()}")


def _fmt(value: float) -> str:
    if math.isnan(value):
        return ""
    return format(value, ".17g")


def write_table(path: str | None, header: list[str], rows) -> None:
    """Write a rectangular table of floats as CSV (stdout when path is None)."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def read_points_csv(path: str) -> tuple[PointSet, np.ndarray | None]:
    """Read a point file; returns (points, values or None).

    values comes back as an (n_rep, n) matrix, one row per replicate.
    """
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.strip() for line in handle if line.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty file")
    header = [name.strip() for name in lines[0].split(",")]
    dim = 0
    while dim < len(header) and header[dim] == f"x{dim + 1}":
        dim += 1
    if dim == 0:
        raise ValidationError(f"{path}: header must start with x1[,x2,...], got {header}")
    for pos, name in enumerate(header[dim:], start=1):
        if name != f"value{pos}":
            raise ValidationError(
                f"{path}: expected column value{pos} after coordinates, got {name!r}"
            )
    try:
        data = np.array(
            [[float(cell) for cell in line.split(",")] for line in lines[1:]]
        )
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric cell ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValidationError(f"{path}: rows do not match the header width")
    points = PointSet(data[:, :dim])
    values = data[:, dim:].T if data.shape[1] > dim else None
    return points, values


def _require_values(path: str) -> tuple[PointSet, np.ndarray]:
    points, values = read_points_csv(path)
    if values is None or values.size == 0:
        raise ValidationError(f"{path}: needs value columns")
    return points, values


def _params_from_args(args) -> ModelParams:
    alpha = args.alpha
    beta = args.beta
    if getattr(args, "model", None) == "power":
        if beta is not None and beta != alpha:
            raise ValidationError("--model power fixes beta = alpha; drop --beta")
        beta = alpha
    if alpha is None or beta is None:
        raise ValidationError("--alpha and --beta are required")
    return ModelParams(alpha=alpha, beta=beta, scale=args.scale, variance=args.variance)


def _threads_override() -> int:
    raw = os.environ.get("THREADS")
    if raw is None:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ValidationError(f"THREADS must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ValidationError(f"THREADS must be >= 1, got {threads}")
    return threads


def _write_realization(path: str | None, points: PointSet, values: np.ndarray) -> None:
    header = [f"x{k + 1}" for k in range(points.dim)]
    header += [f"value{r + 1}" for r in range(values.shape[0])]
    rows = np.hstack([points.coords, values.T])
    write_table(path, header, rows)


def _add_model_flags(sub, with_model_alias: bool = False):
    sub.add_argument("--alpha", type=float, default=None, help="smoothness exponent in (0, 2]")
    sub.add_argument("--beta", type=float, default=None, help="long-range exponent, <= 2")
    sub.add_argument("--scale", type=float, default=1.0, help="length unit (default 1)")
    sub.add_argument("--variance", type=float, default=1.0, help="variance multiplier (default 1)")
    if with_model_alias:
        sub.add_argument(
            "--model",
            choices=("bridging", "power"),
            default="bridging",
            help="'power' is the beta = alpha special case",
        )


def build_parser() -> _Parser:
    parser = _Parser(prog="varbridge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate the variogram at one lag")
    _add_model_flags(p)
    p.add_argument("--lag", type=float, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("curve", help="variogram values over a lag grid (CSV, optional SVG)")
    _add_model_flags(p, with_model_alias=True)
    p.add_argument("--n-lags", type=int, default=200)
    p.add_argument("--lag-min", type=float, default=1e-2, help="in units of scale")
    p.add_argument("--lag-max", type=float, default=1e2, help="in units of scale")
    p.add_argument("--out", default=None)
    p.add_argument("--plot", default=None, help="write an SVG curve here")
    p.add_argument("--log-x", action="store_true")

    p = sub.add_parser("check-cnd", help="random quadratic-form definiteness check")
    _add_model_flags(p)
    p.add_argument("--configs", type=int, default=200)
    p.add_argument("--n", type=int, default=10, help="points per configuration")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("simulate-gaussian", help="pinned or grid-embedding Gaussian field")
    _add_model_flags(p)
    p.add_argument("--points", default=None, help="CSV of locations (pinned simulation)")
    p.add_argument("--grid-size", default=None, help="cells per axis, e.g. 256 or 64,64")
    p.add_argument("--grid-spacing", default=None, help="spacing per axis, e.g. 0.1 or 0.1,0.2")
    p.add_argument("--method", choices=("pinned", "embedding"), default="pinned")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("simulate-br", help="exact Brown-Resnick field at points")
    _add_model_flags(p)
    p.add_argument("--points", required=True, help="CSV of locations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("empirical", help="binned Matheron estimator from a value file")
    p.add_argument("--points", required=True, help="CSV with coordinates and values")
    p.add_argument("--bins", type=int, default=15)
    p.add_argument("--max-lag", type=float, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("fit", help="weighted-least-squares fit to a value file")
    p.add_argument("--points", required=True, help="CSV with coordinates and values")
    p.add_argument("--bins", type=int, default=15)
    p.add_argument("--max-lag", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--multistarts", type=int, default=8)
    p.add_argument("--out", default=None)

    p = sub.add_parser("extremal-coeff", help="theoretical or empirical extremal coefficient")
    _add_model_flags(p)
    p.add_argument("--lag", type=float, default=None, help="theoretical theta at this lag")
    p.add_argument("--points", default=None, help="Brown-Resnick value file for estimation")
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("classify", help="regime label; sill and limiting theta when bounded")
    _add_model_flags(p)
    p.add_argument("--out", default=None)

    return parser


def _print(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_eval(args) -> int:
    params = _params_from_args(args)
    _print(args.out, _fmt(evaluate(params, args.lag)) + "\n")
    return 0


def _cmd_curve(args) -> int:
    params = _params_from_args(args)
    if args.n_lags < 2:
        raise ValidationError("--n-lags must be >= 2")
    if not 0.0 < args.lag_min < args.lag_max:
        raise ValidationError("need 0 < --lag-min < --lag-max")
    lags = params.scale * np.logspace(
        math.log10(args.lag_min), math.log10(args.lag_max), args.n_lags
    )
    gam = evaluate(params, lags)
    write_table(args.out, ["lag", "gamma"], np.column_stack([lags, gam]))
    if args.plot is not None:
        label = f"alpha={params.alpha:g} beta={params.beta:g}"
        svg = render_curve_svg([Series(label, lags, gam)], log_x=args.log_x)
        with open(args.plot, "w", encoding="utf-8") as handle:
            handle.write(svg)
    return 0


def _cmd_check_cnd(args) -> int:
    params = _params_from_args(args)
    if args.configs < 1 or args.n < 2 or args.dim < 1:
        raise ValidationError("need --configs >= 1, --n >= 2, --dim >= 1")
    v = BridgingVariogram(params)
    rng = np.random.default_rng(args.seed)
    worst = -math.inf
    for _ in range(args.configs):
        pts = rng.uniform(-10.0, 10.0, size=(args.n, args.dim))
        w = rng.standard_normal(args.n)
        w -= w.mean()
        w /= np.linalg.norm(w)
        worst = max(worst, cnd_quadratic_form(v, pts, w))
    tolerance = 1e-9 * args.n**2
    ok = worst <= tolerance
    _print(
        args.out,
        f"configs {args.configs}\nworst_q {_fmt(worst)}\ntolerance {_fmt(tolerance)}\n"
        f"result {'pass' if ok else 'fail'}\n",
    )
    return 0 if ok else 2


def _parse_axis_list(raw: str, name: str, cast):
    try:
        return tuple(cast(part) for part in raw.split(","))
    except ValueError:
        raise ValidationError(f"--{name} must be comma-separated numbers, got {raw!r}") from None


def _cmd_simulate_gaussian(args) -> int:
    params = _params_from_args(args)
    _threads_override()
    if args.reps < 1:
        raise ValidationError("--reps must be >= 1")
    if args.method == "embedding":
        if args.grid_size is None or args.grid_spacing is None:
            raise ValidationError("embedding needs --grid-size and --grid-spacing")
        grid = GridSpec(
            sizes=_parse_axis_list(args.grid_size, "grid-size", int),
            spacings=_parse_axis_list(args.grid_spacing, "grid-spacing", float),
        )
        real = circulant_embedding_simulate(params, grid, args.seed, args.reps)
    else:
        if args.points is None:
            raise ValidationError("pinned simulation needs --points")
        points, _ = read_points_csv(args.points)
        real = simulate_pinned_field(BridgingVariogram(params), points, args.seed, args.reps)
    _write_realization(args.out, real.points, real.values)
    return 0


def _cmd_simulate_br(args) -> int:
    params = _params_from_args(args)
    _threads_override()
    if args.reps < 1:
        raise ValidationError("--reps must be >= 1")
    points, _ = read_points_csv(args.points)
    real = simulate_brown_resnick(BridgingVariogram(params), points, args.seed, args.reps)
    _write_realization(args.out, real.points, real.values)
    return 0


def _cmd_empirical(args) -> int:
    points, values = _require_values(args.points)
    emp = empirical_variogram(points, values, args.bins, args.max_lag)
    rows = np.column_stack([emp.lag_centers, emp.gamma_hat, emp.pair_counts])
    write_table(args.out, ["lag_center", "gamma_hat", "pair_count"], rows)
    return 0


def _cmd_fit(args) -> int:
    points, values = _require_values(args.points)
    emp = empirical_variogram(points, values, args.bins, args.max_lag)
    result = fit(
        emp, max_iter=args.max_iter, tol=args.tol, multistart_count=args.multistarts
    )
    p = result.params
    text = (
        f"alpha {_fmt(p.alpha)}\nbeta {_fmt(p.beta)}\nscale {_fmt(p.scale)}\n"
        f"variance {_fmt(p.variance)}\nobjective {_fmt(result.objective)}\n"
        f"iterations {result.iterations}\nconverged {str(result.converged).lower()}\n"
        f"regime {result.regime.value}\n"
    )
    if result.boundary_suspect:
        text += "boundary_suspect true\n"
    _print(args.out, text)
    return 0


def _cmd_extremal_coeff(args) -> int:
    if args.points is not None:
        points, values = _require_values(args.points)
        real = MaxStableRealization(points=points, values=values, seed=0)
        coeff = estimate_extremal_coeff(real, args.i, args.j)
    else:
        if args.lag is None:
            raise ValidationError("need either --lag (theoretical) or --points (empirical)")
        params = _params_from_args(args)
        coeff = theoretical_extremal_coeff(BridgingVariogram(params), args.lag)
    _print(args.out, _fmt(coeff.theta) + "\n")
    return 0


def _cmd_classify(args) -> int:
    params = _params_from_args(args)
    label = classify_regime(params)
    text = label.value + "\n"
    if params.beta < 0.0:
        s = sill(params)
        theta_inf = 2.0 * std_normal_cdf(math.sqrt(s) / 2.0)
        text += f"sill {_fmt(s)}\ntheta_inf {_fmt(theta_inf)}\n"
    _print(args.out, text)
    return 0


_DISPATCH = {
    "eval": _cmd_eval,
    "curve": _cmd_curve,
    "check-cnd": _cmd_check_cnd,
    "simulate-gaussian": _cmd_simulate_gaussian,
    "simulate-br": _cmd_simulate_br,
    "empirical": _cmd_empirical,
    "fit": _cmd_fit,
    "extremal-coeff": _cmd_extremal_coeff,
    "classify": _cmd_classify,
}


def run(argv: list[str]) -> int:
    """Parse and dispatch; returns the process exit code (never raises)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except SystemExit as exc:  # argparse -h
        return int(exc.code or 0)
    except NumericalError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValidationError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except VarbridgeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
