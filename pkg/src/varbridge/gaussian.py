"""Exact Gaussian random field simulation on finite point sets.

Two routes:

* ``simulate_pinned_field`` — any point set, any variogram.  The field is
  pinned at the origin (Z(0) = 0), whose covariance is
  K(x, y) = gamma(x) + gamma(y) - gamma(x - y), and sampled by Cholesky.
  Exact for all regimes, O(n^3).
* ``circulant_embedding_simulate`` — regular 1-D/2-D grids in the bounded
  regime (beta < 0), where the stationary covariance embeds into a circulant
  torus and FFT synthesis applies.  Exact up to the eigenvalue clip floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmbeddingFailedError,
    NonFiniteError,
    NotPSDError,
    OutOfRangeError,
    RegimeError,
    SizeCapError,
    ValidationError,
)
from .model import ModelParams, Variogram, covariance
from .rng import check_seed, replicate_stream

CHOLESKY_SIZE_CAP = 4096

_JITTER_START = 1e-10
_JITTER_MAX = 1e-6

# embedding eigenvalues may go this far below zero (relative to the largest)
# before the padding is declared insufficient
_EIG_CLIP_FLOOR = 1e-9
_MAX_PADDING_DOUBLINGS = 6

_FFT_CHUNK = 256  # replicates per batched FFT, bounds synthesis memory


@dataclass(frozen=True)
class PointSet:
    """n points in R^d, stored as an (n, d) float array."""

    coords: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatchError(
                f"coords must be an (n, d) array with n, d >= 1, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("coordinates must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def norms(self) -> np.ndarray:
        return np.sqrt(np.einsum("ij,ij->i", self.coords, self.coords))

    def pairwise_distances(self) -> np.ndarray:
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


@dataclass(frozen=True)
class FieldRealization:
    """Simulated field values: one row of ``values`` per replicate."""

    points: PointSet
    values: np.ndarray  # (n_rep, n)
    seed: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[1] != self.points.n:
            raise DimensionMismatchError(
                f"values shape {vals.shape} does not match {self.points.n} points"
            )
        object.__setattr__(self, "values", vals)

    @property
    def n_rep(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class GridSpec:
    """Regular 1-D or 2-D grid: cells per axis and spacing per axis."""

    sizes: tuple[int, ...]
    spacings: tuple[float, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in np.atleast_1d(self.sizes))
        spacings = tuple(float(s) for s in np.atleast_1d(self.spacings))
        if len(sizes) not in (1, 2) or len(sizes) != len(spacings):
            raise DimensionMismatchError(
                "grid must have 1 or 2 axes with one spacing per axis"
            )
        if any(s < 1 for s in sizes):
            raise OutOfRangeError("sizes", "grid sizes must be >= 1")
        if any(not np.isfinite(s) or s <= 0.0 for s in spacings):
            raise OutOfRangeError("spacing", "grid spacings must be positive and finite")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "spacings", spacings)

    @property
    def dim(self) -> int:
        return len(self.sizes)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.sizes))

    def point_set(self) -> PointSet:
        """Grid nodes in C order (last axis fastest), matching the flattening
        used by ``circulant_embedding_simulate``."""
        axes = [np.arange(n) * dx for n, dx in zip(self.sizes, self.spacings)]
        mesh = np.meshgrid(*axes, indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=1)
        return PointSet(coords)


def pinned_covariance_matrix(v: Variogram, points: PointSet) -> np.ndarray:
    """Covariance of the field pinned at the origin,
    K[i, j] = v(|x_i|) + v(|x_j|) - v(|x_i - x_j|)."""
    g0 = np.asarray(v(points.norms()), dtype=float)
    return g0[:, None] + g0[None, :] - np.asarray(v(points.pairwise_distances()), float)


def cholesky_with_jitter(K) -> tuple[np.ndarray, float]:
    """Lower-triangular L with L @ L.T = K + eps*I, escalating eps.

    eps starts at 0, then 1e-10 * trace(K)/n, growing tenfold up to
    1e-6 * trace(K)/n.  Returns (L, eps used).

    Raises
    ------
    NotPSDError
        If factorization still fails at the maximum jitter.
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimensionMismatchError(f"K must be square, got shape {K.shape}")
    if not np.all(np.isfinite(K)):
        raise NonFiniteError("K must have finite entries")
    scale = float(np.max(np.abs(K))) or 1.0
    if float(np.max(np.abs(K - K.T))) > 1e-12 * scale:
        raise ValidationError("K must be symmetric")
    n = K.shape[0]
    unit = float(np.trace(K)) / n
    if unit < 0.0:
        raise NotPSDError("negative trace; matrix cannot be positive semidefinite")
    if unit == 0.0:
        # a PSD matrix with zero trace is the zero matrix
        if np.any(K != 0.0):
            raise NotPSDError("zero diagonal with nonzero off-diagonal entries")
        return np.zeros_like(K), 0.0

    eps = 0.0
    while True:
        try:
            L = np.linalg.cholesky(K if eps == 0.0 else K + eps * np.eye(n))
            return L, eps
        except np.linalg.LinAlgError:
            if eps >= _JITTER_MAX * unit:
                raise NotPSDError(
                    f"Cholesky failed at maximum jitter {eps:.3e}; "
                    "matrix is not positive semidefinite or geometry is degenerate"
                ) from None
            eps = _JITTER_START * unit if eps == 0.0 else eps * 10.0


def simulate_pinned_field(
    v: Variogram,
    points: PointSet,
    seed: int,
    n_rep: int,
    size_cap: int = CHOLESKY_SIZE_CAP,
) -> FieldRealization:
    """Exact replicates of the Gaussian field with variogram v, pinned so a
    point at the origin (if present) is exactly 0.

    Replicate r draws its normals from ``replicate_stream(seed, r)``, so
    results are deterministic in (seed, point order, n_rep) and independent
    of execution parallelism.

    Raises
    ------
    SizeCapError
        If points.n exceeds ``size_cap`` (Cholesky is O(n^3)).
    NotPSDError
        Propagated from factorization (invalid variogram or geometry).
    """
    seed = check_seed(seed)
    if n_rep < 1:
        raise OutOfRangeError("n_rep", "n_rep must be >= 1")
    if points.n > size_cap:
        raise SizeCapError(f"{points.n} points exceed the cap of {size_cap}")
    K = pinned_covariance_matrix(v, points)
    L, _ = cholesky_with_jitter(K)
    xi = np.empty((n_rep, points.n))
    for r in range(n_rep):
        xi[r] = replicate_stream(seed, r).standard_normal(points.n)
    values = xi @ L.T
    at_origin = points.norms() == 0.0
    if np.any(at_origin):
        # the exact law gives 0 there; remove the jitter's residue
        values[:, at_origin] = 0.0
    return FieldRealization(points=points, values=values, seed=seed)


def _embedding_eigenvalues(
    params: ModelParams, grid: GridSpec, doublings: int
) -> tuple[np.ndarray, tuple[int, ...]]:
    torus = tuple(n * 2**doublings for n in grid.sizes)
    if grid.dim == 1:
        j = np.arange(torus[0])
        dist = np.minimum(j, torus[0] - j) * grid.spacings[0]
    else:
        j0 = np.arange(torus[0])
        j1 = np.arange(torus[1])
        d0 = np.minimum(j0, torus[0] - j0) * grid.spacings[0]
        d1 = np.minimum(j1, torus[1] - j1) * grid.spacings[1]
        dist = np.hypot(d0[:, None], d1[None, :])
    eig = np.fft.fftn(covariance(params, dist)).real
    return eig, torus


def circulant_embedding_simulate(
    params: ModelParams, grid: GridSpec, seed: int, n_rep: int
) -> FieldRealization:
    """Stationary Gaussian grid samples with covariance sill - gamma via
    circulant embedding (bounded regime only).

    The grid is embedded in a torus of 2^k times its extent per axis,
    k escalating from 1 to 6 until the embedding's Fourier eigenvalues are
    all >= -1e-9 times the largest (small negatives are clipped to zero).

    Raises
    ------
    RegimeError
        If params.beta >= 0 (no stationary covariance).
    EmbeddingFailedError
        If eigenvalues stay below the floor at maximum padding; fall back to
        ``simulate_pinned_field`` in that case.
    """
    seed = check_seed(seed)
    if params.beta >= 0.0:
        raise RegimeError(f"circulant embedding needs beta < 0, got beta = {params.beta}")
    if n_rep < 1:
        raise OutOfRangeError("n_rep", "n_rep must be >= 1")

    eig = torus = None
    for doublings in range(1, _MAX_PADDING_DOUBLINGS + 1):
        cand, cand_torus = _embedding_eigenvalues(params, grid, doublings)
        if cand.min() >= -_EIG_CLIP_FLOOR * cand.max():
            eig, torus = cand, cand_torus
            break
    if eig is None:
        raise EmbeddingFailedError(
            f"embedding eigenvalues stayed below the clip floor up to "
            f"2^{_MAX_PADDING_DOUBLINGS} padding; use simulate_pinned_field instead"
        )

    amplitude = np.sqrt(np.clip(eig, 0.0, None) / eig.size)
    n_out = grid.n_cells
    values = np.empty((n_rep, n_out))
    for start in range(0, n_rep, _FFT_CHUNK):
        stop = min(start + _FFT_CHUNK, n_rep)
        noise = np.empty((stop - start, *torus), dtype=complex)
        for r in range(start, stop):
            rng = replicate_stream(seed, r)
            noise[r - start] = rng.standard_normal(torus) + 1j * rng.standard_normal(
                torus
            )
        spectra = np.fft.fftn(amplitude * noise, axes=tuple(range(1, grid.dim + 1)))
        block = spectra.real[(slice(None),) + tuple(slice(0, n) for n in grid.sizes)]
        values[start:stop] = block.reshape(stop - start, n_out)
    return FieldRealization(points=grid.point_set(), values=values, seed=seed)
