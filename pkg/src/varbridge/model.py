"""Two-parameter bridging variogram family.

The family

    gamma(h) = ((1 + |h|^alpha)^(beta/alpha) - 1) / (2^(beta/alpha) - 1)

is normalized so gamma(1) = 1 and interpolates, in beta, between bounded
(stationary, generalized-Cauchy-type, beta < 0) and unbounded (intrinsically
stationary, 0 <= beta <= 2) variograms, with the logarithmic model
log(1 + |h|^alpha)/log 2 as the beta = 0 branch and the power model |h|^alpha
at beta = alpha.  ``scale`` and ``variance`` turn the unit-normalized form
into a fitting-ready model: gamma(h) = variance * gamma_unit(h / scale).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonFiniteError,
    OutOfRangeError,
    RegimeError,
    ValidationError,
    WeightSumError,
)

_LOG2 = math.log(2.0)
# exp overflows past ~709.78; switch to the exponent-difference form earlier
_EXP_ARG_MAX = 700.0


@dataclass(frozen=True)
class ModelParams:
    """Parameter vector (alpha, beta, scale, variance) of the bridging family.

    alpha in (0, 2] controls smoothness, beta <= 2 the long-range growth
    (beta < 0 bounded, beta = 0 logarithmic, beta > 0 power-like).  ``scale``
    is the length unit of the lag and ``variance`` the multiplier in squared
    field units; the normalized model is the scale=1, variance=1 slice.
    """

    alpha: float
    beta: float
    scale: float = 1.0
    variance: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "scale", "variance"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)):
                raise NonFiniteError(f"{name} must be a real number, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise NonFiniteError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not 0.0 < self.alpha <= 2.0:
            raise OutOfRangeError("alpha", f"alpha must lie in (0, 2], got {self.alpha}")
        if self.beta > 2.0:
            raise OutOfRangeError("beta", f"beta must lie in (-inf, 2], got {self.beta}")
        if self.scale <= 0.0:
            raise OutOfRangeError("scale", f"scale must be > 0, got {self.scale}")
        if self.variance <= 0.0:
            raise OutOfRangeError("variance", f"variance must be > 0, got {self.variance}")


class RegimeLabel(str, Enum):
    """Growth regime of the variogram and the ergodicity of the associated
    max-stable field.

    Bounded variograms (beta < 0) give non-ergodic Brown-Resnick fields.  The
    known mixing criterion asks for growth faster than 4*log|h| and is stated
    for one-dimensional processes only: power growth (beta > 0) eventually
    exceeds any logarithm, hence ``UNBOUNDED_MIXING``; the beta = 0 branch
    grows like a multiple of log|h| whose slope depends on alpha and variance,
    so no mixing claim is made and it is labeled indeterminate.
    """

    BOUNDED_NON_ERGODIC = "BoundedNonErgodic"
    LOG_GROWTH_INDETERMINATE = "LogGrowthIndeterminate"
    UNBOUNDED_MIXING = "UnboundedMixing"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def _check_lag(lag) -> np.ndarray:
    arr = np.asarray(lag, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("lag must be finite")
    if np.any(arr < 0.0):
        raise OutOfRangeError("lag", "lag must be >= 0")
    return arr


def _gamma_unit(alpha: float, beta: float, r: np.ndarray) -> np.ndarray:
    """Normalized gamma at nonnegative reduced lag r, stable in all regimes.

    Branches bitwise on beta == 0 (logarithmic limit) and beta == alpha (the
    exact power reduction); otherwise a single expm1/log1p expression avoids
    cancellation for beta near 0 from either side.
    """
    with np.errstate(over="ignore"):
        x = r**alpha
        if beta == 0.0:
            return np.log1p(x) / _LOG2
        q = beta / alpha
        if q == 1.0:
            return x
        q_log2 = q * _LOG2
        if q_log2 > _EXP_ARG_MAX:
            # both exponentials overflow; the ratio is exp(q*(log1p(x) - log 2))
            return np.exp(q * (np.log1p(x) - _LOG2))
        return np.expm1(q * np.log1p(x)) / math.expm1(q_log2)


def evaluate(params: ModelParams, lag):
    """Evaluate the variogram at one or many lags.

    Parameters
    ----------
    params : ModelParams
    lag : float or array_like of floats, >= 0 and finite

    Returns
    -------
    float or ndarray
        variance * gamma_unit(lag / scale); 0 at lag 0, strictly increasing,
        equal to ``variance`` at lag == scale.  May be +inf for beta > 0 at
        lags large enough that the power overflows.
    """
    arr = _check_lag(lag)
    out = params.variance * _gamma_unit(params.alpha, params.beta, arr / params.scale)
    return float(out) if arr.ndim == 0 else out


def sill(params: ModelParams) -> float:
    """Large-lag limit of the variogram: finite for beta < 0, +inf otherwise."""
    if params.beta >= 0.0:
        return math.inf
    q = params.beta / params.alpha
    return params.variance / -math.expm1(q * _LOG2)


def covariance(params: ModelParams, lag):
    """Stationary covariance sill - gamma of the bounded regime.

    Only beta < 0 admits one; positive, decreasing in lag, tending to 0.

    Raises
    ------
    RegimeError
        If beta >= 0 (the variogram is unbounded; no stationary covariance).
    """
    if params.beta >= 0.0:
        raise RegimeError(
            f"no stationary covariance exists for beta = {params.beta} >= 0"
        )
    return sill(params) - evaluate(params, lag)


def classify_regime(params: ModelParams) -> RegimeLabel:
    """Regime label from the sign of beta (see ``RegimeLabel``)."""
    if params.beta < 0.0:
        return RegimeLabel.BOUNDED_NON_ERGODIC
    if params.beta == 0.0:
        return RegimeLabel.LOG_GROWTH_INDETERMINATE
    return RegimeLabel.UNBOUNDED_MIXING


class Variogram:
    """An evaluatable isotropic variogram: lag distance -> nonnegative value.

    Instances are immutable and safe to share across threads.  Calling with a
    scalar returns a float, with an array returns an ndarray.
    """

    def __call__(self, lag):
        raise NotImplementedError


class BridgingVariogram(Variogram):
    """The bridging family as a Variogram object."""

    def __init__(self, params: ModelParams):
        self.params = params

    def __call__(self, lag):
        return evaluate(self.params, lag)

    def __repr__(self) -> str:
        p = self.params
        return (
            f"BridgingVariogram(alpha={p.alpha}, beta={p.beta}, "
            f"scale={p.scale}, variance={p.variance})"
        )


class ComposedVariogram(Variogram):
    """Combinator ((1 + g)^delta - 1) / (2^delta - 1) applied to a base
    variogram g, with the log(1 + g)/log 2 branch at delta = 0.

    A variogram again for any delta <= 1; nestable.
    """

    def __init__(self, delta: float, base: Variogram):
        delta = float(delta)
        if not math.isfinite(delta):
            raise NonFiniteError(f"delta must be finite, got {delta}")
        if delta > 1.0:
            raise OutOfRangeError("delta", f"delta must be <= 1, got {delta}")
        self.delta = delta
        self.base = base

    def __call__(self, lag):
        g = np.asarray(self.base(lag), dtype=float)
        with np.errstate(over="ignore"):
            if self.delta == 0.0:
                out = np.log1p(g) / _LOG2
            elif self.delta == 1.0:
                out = g
            else:
                out = np.expm1(self.delta * np.log1p(g)) / math.expm1(
                    self.delta * _LOG2
                )
        return float(out) if out.ndim == 0 else out

    def __repr__(self) -> str:
        return f"ComposedVariogram(delta={self.delta}, base={self.base!r})"


def compose(delta: float, base: Variogram) -> Variogram:
    """Apply the combinator; compose(beta/alpha, power-law base) recovers the
    bridging family itself."""
    return ComposedVariogram(delta, base)


def cnd_quadratic_form(v: Variogram, points, weights) -> float:
    """Quadratic form sum_ij w_i w_j v(|x_i - x_j|) for centered weights.

    For a true variogram the result is <= 0 up to roundoff, which makes this
    a direct numerical test of conditional negative definiteness.

    Parameters
    ----------
    v : Variogram
    points : array_like, shape (n, d)
    weights : array_like, shape (n,), summing to 0 within 1e-12 * sum|w|

    Raises
    ------
    DimensionMismatchError, WeightSumError
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise DimensionMismatchError("points must be a list of equal-length vectors")
    if not np.all(np.isfinite(pts)):
        raise NonFiniteError("points must be finite")
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.shape[0] != pts.shape[0]:
        raise DimensionMismatchError(
            f"got {pts.shape[0]} points but {w.size} weights"
        )
    if pts.shape[0] < 2:
        raise ValidationError("need at least 2 points")
    if not np.all(np.isfinite(w)):
        raise NonFiniteError("weights must be finite")
    mag = float(np.sum(np.abs(w)))
    if abs(float(np.sum(w))) > 1e-12 * mag:
        raise WeightSumError(
            f"weights sum to {np.sum(w):.3e}, exceeding 1e-12 * sum|w| = {1e-12 * mag:.3e}"
        )
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return float(w @ v(dist) @ w)
