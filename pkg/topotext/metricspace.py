from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence, Union

import numpy as np
from scipy import sparse
from scipy.spatial.distance import pdist, squareform

from topotext.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InputError,
    ZeroVectorError,
)

logger = logging.getLogger(__name__)

Metric = Literal["euclidean", "cosine"]
METRICS: tuple[Metric, ...] = ("euclidean", "cosine")

VectorRows = Union[np.ndarray, sparse.spmatrix]


@dataclass(frozen=True, eq=False)
class PointCloud:
    """
    A finite set of points of equal dimension, each with a unique id.

    !!! note
        Build clouds from ragged Python data with
        [from_rows][topotext.metricspace.PointCloud.from_rows], which reports
        dimension mismatches by row.
    """

    points: np.ndarray
    ids: tuple[str, ...]

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim != 2:
            raise DimensionMismatchError(
                f"points must form a 2-d array, got {points.ndim} dimension(s)"
            )
        if points.shape[1] < 1:
            raise DimensionMismatchError("points must have dimension at least 1")
        if len(self.ids) != points.shape[0]:
            raise InputError(f"{points.shape[0]} points but {len(self.ids)} ids")
        if len(set(self.ids)) != len(self.ids):
            raise InputError("point ids must be unique")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))

    @classmethod
    def from_rows(
        cls, rows: Iterable[Sequence[float]], ids: Optional[Sequence[str]] = None
    ) -> PointCloud:
        rows = [list(row) for row in rows]
        if rows:
            dim = len(rows[0])
            for index, row in enumerate(rows):
                if len(row) != dim:
                    raise DimensionMismatchError(
                        f"row {index} has dimension {len(row)}, expected {dim}"
                    )
            points = np.asarray(rows, dtype=np.float64)
        else:
            points = np.empty((0, 1))
        if ids is None:
            ids = [str(i) for i in range(len(rows))]
        return cls(points, tuple(ids))

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """
    Symmetric pairwise dissimilarities, stored as the condensed upper triangle.

    `entries[k]` holds d(i, j) for i < j in row-major order, the layout used by
    `scipy.spatial.distance.pdist`.
    """

    n: int
    entries: np.ndarray
    metric: str = "euclidean"
    _square: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.float64)
        expected = self.n * (self.n - 1) // 2
        if entries.shape != (expected,):
            raise DimensionMismatchError(
                f"{self.n} points need {expected} condensed entries, got {entries.size}"
            )
        if np.any(entries < 0) or np.any(np.isnan(entries)):
            raise InputError("distances must be nonnegative numbers")
        object.__setattr__(self, "entries", entries)
        square = squareform(entries) if self.n > 0 else np.zeros((0, 0))
        object.__setattr__(self, "_square", square)

    @classmethod
    def from_square(cls, matrix: Sequence[Sequence[float]], metric: str = "euclidean"):
        square = np.asarray(matrix, dtype=np.float64)
        if square.ndim != 2 or square.shape[0] != square.shape[1]:
            raise DimensionMismatchError("distance matrix must be square")
        if square.size and (
            np.any(np.diag(square) != 0) or not np.array_equal(square, square.T)
        ):
            raise InputError("distance matrix must be symmetric with a zero diagonal")
        n = square.shape[0]
        upper = np.triu_indices(n, k=1)
        return cls(n, square[upper], metric)

    def __getitem__(self, index: tuple[int, int]) -> float:
        i, j = index
        return float(self._square[i, j])

    def __len__(self) -> int:
        return self.n

    def to_square(self) -> np.ndarray:
        """Return a fresh n×n copy of the full matrix."""
        return self._square.copy()

    def subset(self, indices: Sequence[int]) -> DistanceMatrix:
        """The distance matrix restricted to `indices`, in the given order."""
        idx = np.asarray(indices, dtype=np.intp)
        sub = self._square[np.ix_(idx, idx)]
        upper = np.triu_indices(len(idx), k=1)
        return DistanceMatrix(len(idx), sub[upper], self.metric)

    def diameter(self) -> float:
        return float(self.entries.max()) if self.entries.size else 0.0


def _dense_rows(rows: VectorRows) -> np.ndarray:
    if sparse.issparse(rows):
        return rows.toarray().astype(np.float64)
    return np.asarray(rows, dtype=np.float64)


def vector_distances(
    rows: VectorRows, metric: Metric = "euclidean", ids: Optional[Sequence[str]] = None
) -> DistanceMatrix:
    """
    Pairwise distances between the rows of a dense or sparse matrix.

    Args:
        rows: one vector per row; sparse input is densified.
        metric: `"euclidean"` or `"cosine"` (stored as 1 − cosine similarity).
        ids: names used in error messages, defaults to row numbers.
    Returns:
        [DistanceMatrix][topotext.metricspace.DistanceMatrix]
    Raises:
        EmptyInputError: if there are no rows.
        ZeroVectorError: if a row is zero under the cosine metric.
    """
    if metric not in METRICS:
        raise InputError(f"unknown metric {metric!r}; expected one of {METRICS}")
    points = _dense_rows(rows)
    if points.ndim != 2:
        raise DimensionMismatchError("vectors must form a 2-d array")
    n = points.shape[0]
    if n == 0:
        raise EmptyInputError("cannot compute distances of an empty point cloud")

    if metric == "cosine":
        norms = np.linalg.norm(points, axis=1)
        zero = np.flatnonzero(norms == 0)
        if zero.size:
            index = int(zero[0])
            raise ZeroVectorError(index, ids[index] if ids is not None else str(index))
        condensed = np.clip(pdist(points, "cosine"), 0.0, 2.0) if n > 1 else np.empty(0)
    else:
        condensed = pdist(points, "euclidean") if n > 1 else np.empty(0)

    logger.debug("computed %s distances for %d points", metric, n)
    return DistanceMatrix(n, condensed, metric)


def pairwise_distances(cloud: PointCloud, metric: Metric = "euclidean") -> DistanceMatrix:
    """
    Pairwise distances of a point cloud.

    Args:
        cloud: a nonempty [PointCloud][topotext.metricspace.PointCloud].
        metric: `"euclidean"` or `"cosine"`.
    Returns:
        [DistanceMatrix][topotext.metricspace.DistanceMatrix]
    Raises:
        EmptyInputError: if the cloud has no points.
        ZeroVectorError: if a point is the zero vector under the cosine metric.
    """
    return vector_distances(cloud.points, metric, ids=cloud.ids)
