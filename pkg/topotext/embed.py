from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy import sparse

from topotext.constants import (
    DEFAULT_OVERSAMPLES,
    DEFAULT_POWER_ITERATIONS,
    DEFAULT_SEED,
    MIN_OVERSAMPLES,
    MIN_POWER_ITERATIONS,
)
from topotext.errors import ConfigError, DimensionMismatchError
from topotext.metricspace import PointCloud
from topotext.textpipeline import DocumentTermMatrix

logger = logging.getLogger(__name__)

Matrix = Union[DocumentTermMatrix, np.ndarray, sparse.spmatrix]


@dataclass(frozen=True, eq=False)
class Embedding:
    """
    A lens: one k-dimensional coordinate row per document or point.

    `singular_values` and `components` are set by the SVD-based lenses.
    """

    coords: np.ndarray
    doc_ids: tuple[str, ...]
    method: str
    seed: Optional[int] = None
    singular_values: Optional[np.ndarray] = None
    components: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        coords = np.asarray(self.coords, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[0] != len(self.doc_ids):
            raise DimensionMismatchError(
                f"{len(self.doc_ids)} ids but coordinates of shape {coords.shape}"
            )
        object.__setattr__(self, "coords", coords)

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def to_cloud(self) -> PointCloud:
        return PointCloud(self.coords, self.doc_ids)


def _unpack(data: Matrix, ids: Optional[Sequence[str]]) -> tuple[object, tuple[str, ...]]:
    if isinstance(data, DocumentTermMatrix):
        return data.matrix, data.doc_ids
    if not sparse.issparse(data):
        data = np.asarray(data, dtype=np.float64)
    if ids is None:
        ids = [str(i) for i in range(data.shape[0])]
    return data, tuple(ids)


def _orthonormal(y: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(y)
    return q


def _fix_signs(vt: np.ndarray) -> np.ndarray:
    """Flip each row so that its largest-magnitude entry is positive."""
    pivots = np.argmax(np.abs(vt), axis=1)
    signs = np.sign(vt[np.arange(vt.shape[0]), pivots])
    signs[signs == 0] = 1.0
    return vt * signs[:, None]


def randomized_svd(
    a,
    k: int,
    *,
    seed: Optional[int] = DEFAULT_SEED,
    oversamples: int = DEFAULT_OVERSAMPLES,
    power_iterations: int = DEFAULT_POWER_ITERATIONS,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Top-k singular values and right singular vectors by subspace iteration.

    Returns:
        `(singular_values, vt)` with `vt` of shape k×n, signs fixed.
    """
    m, n = a.shape
    oversamples = max(oversamples, MIN_OVERSAMPLES)
    power_iterations = max(power_iterations, MIN_POWER_ITERATIONS)
    sketch = min(k + oversamples, m, n)

    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((n, sketch))
    q = _orthonormal(np.asarray(a @ omega))
    for _ in range(power_iterations):
        q = _orthonormal(np.asarray(a.T @ q))
        q = _orthonormal(np.asarray(a @ q))

    b = np.asarray((a.T @ q).T)
    _, s, vt = np.linalg.svd(b, full_matrices=False)
    return s[:k], _fix_signs(vt[:k])


def truncated_svd(
    dtm: Matrix,
    k: int = 2,
    seed: Optional[int] = DEFAULT_SEED,
    *,
    ids: Optional[Sequence[str]] = None,
    oversamples: int = DEFAULT_OVERSAMPLES,
    power_iterations: int = DEFAULT_POWER_ITERATIONS,
) -> Embedding:
    """
    Project rows onto their top-k right singular directions.

    The singular subspace comes from randomized subspace iteration seeded with
    `seed`; the same seed always gives the same lens.

    Args:
        dtm: a [DocumentTermMatrix][topotext.textpipeline.DocumentTermMatrix] or
            any dense or sparse matrix.
        k: lens dimension, 1 ≤ k ≤ min(rows, columns).
        seed: seed of the random test matrix.
        ids: row names when `dtm` is a bare matrix.
        oversamples: extra sketch columns, never fewer than 5.
        power_iterations: subspace iterations, never fewer than 4.
    Returns:
        [Embedding][topotext.embed.Embedding] with nonincreasing
        `singular_values`.
    Raises:
        ConfigError: if `k` is out of range.
    """
    a, doc_ids = _unpack(dtm, ids)
    m, n = a.shape
    if not 1 <= k <= min(m, n):
        raise ConfigError(f"k must be between 1 and {min(m, n)}, got {k}")
    s, vt = randomized_svd(
        a, k, seed=seed, oversamples=oversamples, power_iterations=power_iterations
    )
    coords = np.asarray(a @ vt.T)
    logger.debug("truncated SVD of %dx%d matrix to %d components", m, n, k)
    return Embedding(coords, doc_ids, "svd", seed, s, vt)


def principal_components(
    data: Union[Matrix, PointCloud],
    k: int = 2,
    seed: Optional[int] = DEFAULT_SEED,
    *,
    ids: Optional[Sequence[str]] = None,
) -> Embedding:
    """
    PCA lens: truncated SVD of the column-centred data.

    Sparse input is densified, since centring destroys sparsity.
    """
    if isinstance(data, PointCloud):
        a, doc_ids = data.points, data.ids
    else:
        a, doc_ids = _unpack(data, ids)
        if sparse.issparse(a):
            a = a.toarray()
    centred = np.asarray(a, dtype=np.float64) - np.asarray(a).mean(axis=0)
    lens = truncated_svd(centred, k, seed, ids=doc_ids)
    return Embedding(
        lens.coords, doc_ids, "pca", seed, lens.singular_values, lens.components
    )


def coordinate_projection(cloud: PointCloud, axis: int = 0) -> Embedding:
    """
    The 1-dimensional lens given by one coordinate of each point.

    Raises:
        ConfigError: if `axis` is not a coordinate of the cloud.
    """
    if not 0 <= axis < cloud.dim:
        raise ConfigError(f"axis {axis} is out of range for a {cloud.dim}-d cloud")
    return Embedding(cloud.points[:, [axis]], cloud.ids, f"axis{axis}")
