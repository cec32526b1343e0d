"""Bridging variogram family: model, simulation, estimation, extremes."""

from .errors import (
    DegenerateGeometryError,
    DimensionMismatchError,
    EmbeddingFailedError,
    EmptySeriesError,
    IndexOutOfRangeError,
    NoProgressError,
    NonFiniteError,
    NotPSDError,
    NumericalError,
    OutOfRangeError,
    RegimeError,
    SizeCapError,
    TooFewBinsError,
    ValidationError,
    VarbridgeError,
    WeightSumError,
)
from .extremes import (
    ExtremalCoefficient,
    MaxStableRealization,
    estimate_extremal_coeff,
    simulate_brown_resnick,
    std_normal_cdf,
    theoretical_extremal_coeff,
)
from .gaussian import (
    FieldRealization,
    GridSpec,
    PointSet,
    cholesky_with_jitter,
    circulant_embedding_simulate,
    pinned_covariance_matrix,
    simulate_pinned_field,
)
from .inference import (
    EmpiricalVariogram,
    FitResult,
    empirical_variogram,
    fit,
    transform_params,
    untransform_params,
    wls_objective,
)
from .model import (
    BridgingVariogram,
    ComposedVariogram,
    ModelParams,
    RegimeLabel,
    Variogram,
    classify_regime,
    cnd_quadratic_form,
    compose,
    covariance,
    evaluate,
    sill,
)

__version__ = "0.1.0"

__all__ = [
    "BridgingVariogram",
    "ComposedVariogram",
    "DegenerateGeometryError",
    "DimensionMismatchError",
    "EmbeddingFailedError",
    "EmpiricalVariogram",
    "EmptySeriesError",
    "ExtremalCoefficient",
    "FieldRealization",
    "FitResult",
    "GridSpec",
    "IndexOutOfRangeError",
    "MaxStableRealization",
    "ModelParams",
    "NoProgressError",
    "NonFiniteError",
    "NotPSDError",
    "NumericalError",
    "OutOfRangeError",
    "PointSet",
    "RegimeError",
    "RegimeLabel",
    "SizeCapError",
    "TooFewBinsError",
    "ValidationError",
    "VarbridgeError",
    "Variogram",
    "WeightSumError",
    "cholesky_with_jitter",
    "circulant_embedding_simulate",
    "classify_regime",
    "cnd_quadratic_form",
    "compose",
    "covariance",
    "empirical_variogram",
    "estimate_extremal_coeff",
    "evaluate",
    "fit",
    "pinned_covariance_matrix",
    "simulate_brown_resnick",
    "simulate_pinned_field",
    "sill",
    "std_normal_cdf",
    "theoretical_extremal_coeff",
    "transform_params",
    "untransform_params",
    "wls_objective",
]
