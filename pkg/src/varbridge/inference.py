"""Empirical variogram estimation and weighted-least-squares fitting.

The fit works in a transformed space where every coordinate is unconstrained
and beta = 0 is an interior point, so the optimizer crosses the
stationary/intrinsic bridge freely:

    u = (logit(alpha/2), log(2 - beta), log(scale), log(variance))

Minimization is Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
shrink 0.5) with deterministic Halton multistarts; no hidden randomness, so
``fit`` is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateGeometryError,
    DimensionMismatchError,
    NoProgressError,
    OutOfRangeError,
    TooFewBinsError,
)
from .gaussian import PointSet
from .model import ModelParams, RegimeLabel, classify_regime, evaluate

_WLS_FLOOR = 1e-12
_MIN_NONEMPTY_BINS = 4  # four free parameters

# transformed coordinates outside this box map to exp/expit saturation;
# treat them as infeasible instead of constructing degenerate params
_U_LIMIT = 50.0

_ALPHA_SUSPECT = 1.999  # fits at the alpha boundary are flagged


@dataclass(frozen=True)
class EmpiricalVariogram:
    """Binned Matheron estimates.

    ``gamma_hat`` is NaN where a bin received no pairs; ``pair_counts`` holds
    the number of squared increments averaged into each bin (point pairs
    times replicates).
    """

    lag_centers: np.ndarray
    gamma_hat: np.ndarray
    pair_counts: np.ndarray
    max_lag: float

    def __post_init__(self):
        centers = np.asarray(self.lag_centers, dtype=float)
        gam = np.asarray(self.gamma_hat, dtype=float)
        counts = np.asarray(self.pair_counts, dtype=np.int64)
        if not (centers.shape == gam.shape == counts.shape) or centers.ndim != 1:
            raise DimensionMismatchError("bins arrays must be equal-length 1-D")
        if centers.size < 1:
            raise DimensionMismatchError("need at least one bin")
        if np.any(np.diff(centers) <= 0.0):
            raise OutOfRangeError("lag_centers", "lag centers must be strictly increasing")
        occupied = counts > 0
        if np.any(~np.isfinite(gam[occupied])) or np.any(gam[occupied] < 0.0):
            raise OutOfRangeError("gamma_hat", "estimates must be finite and >= 0")
        object.__setattr__(self, "lag_centers", centers)
        object.__setattr__(self, "gamma_hat", gam)
        object.__setattr__(self, "pair_counts", counts)
        object.__setattr__(self, "max_lag", float(self.max_lag))

    @property
    def n_bins(self) -> int:
        return self.lag_centers.size

    def nonempty(self) -> np.ndarray:
        return self.pair_counts > 0


@dataclass(frozen=True)
class FitResult:
    params: ModelParams
    objective: float
    iterations: int
    converged: bool
    regime: RegimeLabel
    boundary_suspect: bool = False


def empirical_variogram(
    points: PointSet,
    values,
    n_bins: int,
    max_lag: float | None = None,
) -> EmpiricalVariogram:
    """Matheron estimator on equal-width lag bins over (0, max_lag].

    Every unordered point pair within ``max_lag`` (default: half the maximum
    pairwise distance) contributes (z_i - z_j)^2 / 2 per replicate to the bin
    containing its lag.

    Parameters
    ----------
    points : PointSet
    values : array_like, (n_rep, n) or (n,)
        Field values, one column per point.
    n_bins : int
    max_lag : float, optional
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim == 1:
        vals = vals[None, :]
    if vals.ndim != 2 or vals.shape[1] != points.n:
        raise DimensionMismatchError(
            f"values shape {vals.shape} does not match {points.n} points"
        )
    if points.n < 2:
        raise DegenerateGeometryError("need at least 2 points")
    if n_bins < 1:
        raise OutOfRangeError("n_bins", "n_bins must be >= 1")

    dist = points.pairwise_distances()
    iu, ju = np.triu_indices(points.n, k=1)
    d = dist[iu, ju]
    d_max = float(d.max())
    if d_max == 0.0:
        raise DegenerateGeometryError("all points coincide")
    if max_lag is None:
        max_lag = 0.5 * d_max
    max_lag = float(max_lag)
    if not math.isfinite(max_lag) or max_lag <= 0.0:
        raise OutOfRangeError("max_lag", "max_lag must be positive and finite")

    n_rep = vals.shape[0]
    # sum over replicates of (z_i - z_j)^2 via the Gram matrix
    gram = vals.T @ vals
    sq = np.diag(gram)[iu] + np.diag(gram)[ju] - 2.0 * gram[iu, ju]

    width = max_lag / n_bins
    usable = (d > 0.0) & (d <= max_lag)
    bin_idx = np.minimum(np.ceil(d[usable] / width).astype(np.int64) - 1, n_bins - 1)
    sums = np.bincount(bin_idx, weights=0.5 * sq[usable], minlength=n_bins)
    pairs = np.bincount(bin_idx, minlength=n_bins)
    lag_sums = np.bincount(bin_idx, weights=d[usable], minlength=n_bins)

    counts = pairs * n_rep
    gamma_hat = np.full(n_bins, np.nan)
    occupied = counts > 0
    gamma_hat[occupied] = sums[occupied] / counts[occupied]
    # mean pair lag, not the interval midpoint: on gridded data the pairs sit
    # far from the midpoint and the misalignment badly biases weighted fits
    centers = (np.arange(n_bins) + 0.5) * width
    centers[occupied] = lag_sums[occupied] / pairs[occupied]
    return EmpiricalVariogram(
        lag_centers=centers, gamma_hat=gamma_hat, pair_counts=counts, max_lag=max_lag
    )


def wls_objective(params: ModelParams, emp: EmpiricalVariogram) -> float:
    """Cressie-weighted least squares:
    sum over nonempty bins of N_b * (gamma_hat - gamma_model)^2 / gamma_model^2,
    the denominator floored at 1e-12."""
    occupied = emp.nonempty()
    if int(occupied.sum()) < _MIN_NONEMPTY_BINS:
        raise TooFewBinsError(
            f"need >= {_MIN_NONEMPTY_BINS} nonempty bins, got {int(occupied.sum())}"
        )
    model = evaluate(params, emp.lag_centers[occupied])
    resid = emp.gamma_hat[occupied] - model
    denom = np.maximum(model, _WLS_FLOOR)
    return float(np.sum(emp.pair_counts[occupied] * (resid / denom) ** 2))


def transform_params(params: ModelParams) -> np.ndarray:
    """Map params into the unconstrained fitting space u."""
    a_half = params.alpha / 2.0
    return np.array(
        [
            math.log(a_half / (1.0 - a_half)) if a_half < 1.0 else math.inf,
            math.log(2.0 - params.beta) if params.beta < 2.0 else -math.inf,
            math.log(params.scale),
            math.log(params.variance),
        ]
    )


def untransform_params(u) -> ModelParams:
    """Inverse of ``transform_params``."""
    u = np.asarray(u, dtype=float)
    t = u[0]
    expit = 1.0 / (1.0 + math.exp(-t)) if t >= 0 else math.exp(t) / (1.0 + math.exp(t))
    return ModelParams(
        alpha=2.0 * expit,
        beta=2.0 - math.exp(u[1]),
        scale=math.exp(u[2]),
        variance=math.exp(u[3]),
    )


def _halton(index: int, base: int) -> float:
    f, result = 1.0, 0.0
    while index > 0:
        f /= base
        result += f * (index % base)
        index //= base
    return result


def _halton_points(count: int, dim: int) -> np.ndarray:
    bases = (2, 3, 5, 7)[:dim]
    return np.array(
        [[_halton(i, b) for b in bases] for i in range(1, count + 1)]
    )


def _nelder_mead(f, x0, step, max_iter, tol):
    """Minimize f from x0; returns (x_best, f_best, iterations, converged).

    Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
    Converged when the objective spread across the simplex is < tol.
    """
    n = x0.size
    simplex = np.vstack([x0] + [x0 + step * e for e in np.eye(n)])
    fvals = np.array([f(x) for x in simplex])

    iterations = 0
    converged = False
    while iterations < max_iter:
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        spread = fvals[-1] - fvals[0]
        if np.isfinite(spread) and spread < tol:
            converged = True
            break
        iterations += 1

        centroid = simplex[:-1].mean(axis=0)
        reflected = centroid + (centroid - simplex[-1])
        f_r = f(reflected)
        if f_r < fvals[0]:
            expanded = centroid + 2.0 * (centroid - simplex[-1])
            f_e = f(expanded)
            if f_e < f_r:
                simplex[-1], fvals[-1] = expanded, f_e
            else:
                simplex[-1], fvals[-1] = reflected, f_r
        elif f_r < fvals[-2]:
            simplex[-1], fvals[-1] = reflected, f_r
        else:
            if f_r < fvals[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
                f_c = f(contracted)
                accept = f_c <= f_r
            else:
                contracted = centroid - 0.5 * (centroid - simplex[-1])
                f_c = f(contracted)
                accept = f_c < fvals[-1]
            if accept:
                simplex[-1], fvals[-1] = contracted, f_c
            else:
                simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
                fvals[1:] = [f(x) for x in simplex[1:]]

    order = np.argsort(fvals, kind="stable")
    return simplex[order[0]], float(fvals[order[0]]), iterations, converged


def _start_box(emp: EmpiricalVariogram) -> tuple[np.ndarray, np.ndarray]:
    """Data-driven box in u-space from which multistarts are drawn."""
    occupied = emp.nonempty()
    h_max = float(emp.lag_centers[occupied].max())
    g_pos = emp.gamma_hat[occupied]
    g_pos = g_pos[g_pos > 0.0]
    g_mid = float(np.median(g_pos)) if g_pos.size else 1.0
    lo = np.array(
        [
            math.log(0.15 / 0.85),  # alpha = 0.3
            math.log(0.2),          # beta = 1.8
            math.log(0.1 * h_max),
            math.log(0.25 * g_mid),
        ]
    )
    hi = np.array(
        [
            math.log(0.95 / 0.05),  # alpha = 1.9
            math.log(5.0),          # beta = -3
            math.log(2.0 * h_max),
            math.log(4.0 * g_mid),
        ]
    )
    return lo, hi


def fit(
    emp: EmpiricalVariogram,
    init: ModelParams | None = None,
    *,
    max_iter: int = 2000,
    tol: float = 1e-10,
    multistart_count: int = 8,
) -> FitResult:
    """Fit the bridging family to an empirical variogram by weighted least
    squares.

    Deterministic: multistarts come from a fixed Halton sequence over a
    data-driven box in the transformed space (plus ``init`` if given), each
    minimized by Nelder-Mead; the best final objective wins, ties broken by
    lowest start index.

    Raises
    ------
    TooFewBinsError
        Fewer than 4 nonempty bins.
    NoProgressError
        No start improved on its initial objective.
    """

    def objective(u: np.ndarray) -> float:
        if np.any(np.abs(u) > _U_LIMIT):
            return math.inf
        return wls_objective(untransform_params(u), emp)

    # validates bin count once up front
    lo, hi = _start_box(emp)
    wls_objective(untransform_params(0.5 * (lo + hi)), emp)

    starts = []
    if init is not None:
        starts.append(transform_params(init))
    starts.extend(lo + _halton_points(multistart_count, 4) * (hi - lo))

    best = None
    improved = False
    for idx, u0 in enumerate(starts):
        f0 = objective(np.asarray(u0, dtype=float))
        x, f_min, iters, converged = _nelder_mead(
            objective, np.asarray(u0, dtype=float), step=0.25, max_iter=max_iter, tol=tol
        )
        if f_min < f0:
            improved = True
        if best is None or f_min < best[1]:
            best = (x, f_min, iters, converged, idx)
    if not improved:
        raise NoProgressError("no start improved on its initial objective")

    x, f_min, iters, converged, _ = best
    params = untransform_params(x)
    return FitResult(
        params=params,
        objective=f_min,
        iterations=iters,
        converged=converged,
        regime=classify_regime(params),
        boundary_suspect=params.alpha > _ALPHA_SUSPECT,
    )
