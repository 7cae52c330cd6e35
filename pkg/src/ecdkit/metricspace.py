"""Feature sets, distance matrices, and pairwise-distance computation.

Every downstream statistic consumes one canonical structure: a dense,
exactly symmetric, zero-diagonal :class:`DistanceMatrix` over the pooled
points of the two sets being compared. Matrices are kept dense; pool
sizes of interest are at most a few thousand points.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import (
    AsymmetryError,
    DimensionMismatch,
    EmptySet,
    InvalidSpec,
    NegativeDistanceError,
    NonFiniteInput,
    NonSquareError,
    NonzeroDiagonalError,
    SchemaError,
    SizeMismatch,
)

METRICS = ("euclidean", "squared_euclidean")

#: Default slack when ingesting externally produced distance matrices;
#: descriptor pipelines routinely emit rounding noise of this order.
INGEST_TOLERANCE = 1e-9

_CDIST_NAME = {"euclidean": "euclidean", "squared_euclidean": "sqeuclidean"}


@dataclass(frozen=True)
class FeatureSet:
    """N x d matrix of real-valued feature vectors, one point per row."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D point array, got ndim={pts.ndim}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise EmptySet(f"feature set must be non-empty, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise NonFiniteInput("feature values must be finite (no NaN/Inf)")
        object.__setattr__(self, "points", pts)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative N x N dissimilarity matrix with zero diagonal.

    The invariants are enforced exactly as stored: ``values[i, j] ==
    values[j, i]`` bitwise, ``values[i, i] == 0``, all entries finite and
    nonnegative. Use :func:`validate_distance_matrix` to ingest raw
    matrices that only satisfy these up to rounding noise.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise NonSquareError(f"distance matrix must be square, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NonFiniteInput("distances must be finite")
        if not np.array_equal(v, v.T):
            raise AsymmetryError("distance matrix must be exactly symmetric")
        if np.any(np.diagonal(v) != 0.0):
            raise NonzeroDiagonalError("distance matrix diagonal must be exactly zero")
        if np.any(v < 0.0):
            raise NegativeDistanceError("distances must be nonnegative")
        object.__setattr__(self, "values", v)

    @property
    def n_points(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class PooledLabels:
    """Split of a pooled matrix: the first `n` rows form the first set."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 2 or self.m < 2:
            raise SizeMismatch(
                f"each set needs at least 2 points, got sizes ({self.n}, {self.m})"
            )

    @property
    def split_index(self) -> int:
        return self.n

    @property
    def n_total(self) -> int:
        return self.n + self.m


def _check_metric(metric: str) -> str:
    if metric not in METRICS:
        raise InvalidSpec(f"unknown metric {metric!r}; choose from {METRICS}")
    return _CDIST_NAME[metric]


def pairwise_distances(a: FeatureSet, b: FeatureSet, metric: str = "euclidean") -> DistanceMatrix:
    """Dense distance matrix over the pooled rows ``[a; b]``.

    Each unordered pair is computed once and mirrored, so the two halves
    are bitwise identical and the result passes validation with zero
    tolerance. Entries are computed independently of one another; the
    output does not depend on any parallel execution schedule.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"feature dimensions differ: {a.dim} vs {b.dim}")
    name = _check_metric(metric)
    pooled = np.vstack([a.points, b.points])
    raw = cdist(pooled, pooled, metric=name)
    n = pooled.shape[0]
    upper = np.triu(raw, k=1)
    return DistanceMatrix(upper + upper.T)


def cross_distances(a: FeatureSet, b: FeatureSet, metric: str = "euclidean") -> np.ndarray:
    """|a| x |b| matrix of distances from each a-point to each b-point."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"feature dimensions differ: {a.dim} vs {b.dim}")
    name = _check_metric(metric)
    return cdist(a.points, b.points, metric=name)


def validate_distance_matrix(raw, tolerance: float = INGEST_TOLERANCE) -> DistanceMatrix:
    """Ingest a raw square matrix as a DistanceMatrix.

    Accepts the matrix when asymmetry, diagonal magnitude, and negative
    entries all stay within `tolerance`; the stored result is the exact
    symmetrization ``(raw + raw.T) / 2`` with the diagonal forced to zero
    and residual negatives clamped to zero. Violations beyond the
    tolerance raise the matching error instead of being repaired.
    """
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("distance entries must be finite")
    asym = np.max(np.abs(arr - arr.T)) if arr.size else 0.0
    if asym > tolerance:
        raise AsymmetryError(f"max |d[i,j] - d[j,i]| = {asym:g} exceeds tolerance {tolerance:g}")
    diag = np.max(np.abs(np.diagonal(arr))) if arr.size else 0.0
    if diag > tolerance:
        raise NonzeroDiagonalError(f"max |d[i,i]| = {diag:g} exceeds tolerance {tolerance:g}")
    low = np.min(arr) if arr.size else 0.0
    if low < -tolerance:
        raise NegativeDistanceError(f"min entry {low:g} below -tolerance {-tolerance:g}")
    sym = (arr + arr.T) / 2.0
    np.fill_diagonal(sym, 0.0)
    np.clip(sym, 0.0, None, out=sym)
    return DistanceMatrix(sym)


# --- file ingestion ---------------------------------------------------------

def load_feature_csv(path) -> FeatureSet:
    """Read a feature CSV: one point per row, comma-separated numerals.

    A single leading header row is auto-detected: if the first field of
    the first row fails numeric parsing, that row is skipped.
    """
    rows: list[list[float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        first = True
        for lineno, rec in enumerate(reader, start=1):
            if not rec or all(f.strip() == "" for f in rec):
                continue
            if first:
                first = False
                try:
                    float(rec[0])
                except ValueError:
                    continue  # header row
            try:
                rows.append([float(f) for f in rec])
            except ValueError as exc:
                raise SchemaError(f"{path}: non-numeric value on line {lineno}: {exc}") from None
    if not rows:
        raise EmptySet(f"{path}: no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise SchemaError(f"{path}: rows have inconsistent column counts")
    return FeatureSet(np.array(rows, dtype=np.float64))


def load_distance_csv(path, tolerance: float = INGEST_TOLERANCE) -> DistanceMatrix:
    """Read an N x N distance matrix CSV (no header) and validate it."""
    rows: list[list[float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, rec in enumerate(reader, start=1):
            if not rec or all(f.strip() == "" for f in rec):
                continue
            try:
                rows.append([float(f) for f in rec])
            except ValueError as exc:
                raise SchemaError(f"{path}: non-numeric value on line {lineno}: {exc}") from None
    if not rows:
        raise EmptySet(f"{path}: no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise SchemaError(f"{path}: rows have inconsistent column counts")
    return validate_distance_matrix(np.array(rows, dtype=np.float64), tolerance)
