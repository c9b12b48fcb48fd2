"""Seeded reference data: small clouds with known topology and a two-author corpus."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from topotext.constants import DEFAULT_SEED
from topotext.errors import ConfigError
from topotext.metricspace import PointCloud
from topotext.textpipeline import Corpus, Document


def circle(n: int = 24, radius: float = 1.0, offset: float = 0.5) -> PointCloud:
    """
    `n` evenly spaced points on a circle centred at the origin.

    Point `i` sits at angle 2π(i + offset)/n; the default half step keeps
    every point off the x-axis.
    """
    if n < 1:
        raise ConfigError(f"n must be at least 1, got {n}")
    angles = 2 * np.pi * (np.arange(n) + offset) / n
    points = radius * np.column_stack([np.cos(angles), np.sin(angles)])
    return PointCloud(points, tuple(f"p{i}" for i in range(n)))


def blobs(
    n_per_blob: int = 20,
    centers: Sequence[Sequence[float]] = ((0.0, 0.0), (10.0, 0.0)),
    spread: float = 0.3,
    seed: Optional[int] = DEFAULT_SEED,
) -> tuple[PointCloud, tuple[str, ...]]:
    """
    Gaussian blobs around `centers`.

    Returns:
        The cloud, and the blob index of every point as a label.
    """
    rng = np.random.default_rng(seed)
    centers = np.asarray(centers, dtype=np.float64)
    dim = centers.shape[1]
    points = np.concatenate(
        [center + spread * rng.standard_normal((n_per_blob, dim)) for center in centers]
    )
    labels = tuple(f"blob{b}" for b in range(len(centers)) for _ in range(n_per_blob))
    return PointCloud(points, tuple(f"p{i}" for i in range(len(points)))), labels


def unit_square() -> PointCloud:
    points = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    return PointCloud(points, ("a", "b", "c", "d"))


def two_vocabulary_corpus(
    n_per_class: int = 500,
    class_vocab: int = 50,
    shared_vocab: int = 20,
    words_per_doc: int = 12,
    seed: Optional[int] = DEFAULT_SEED,
    *,
    labels: tuple[str, str] = ("A", "B"),
    shared_fraction: float = 0.3,
) -> Corpus:
    """
    Two labelled classes of documents written from disjoint vocabularies.

    Each class draws from its own `class_vocab` words plus `shared_vocab` words
    common to both; about `shared_fraction` of every document's words are shared.
    """
    if min(n_per_class, class_vocab, words_per_doc) < 1 or shared_vocab < 0:
        raise ConfigError(
            "class sizes, vocabularies and document lengths must be positive"
        )
    if not 0 <= shared_fraction < 1:
        raise ConfigError(f"shared_fraction must lie in [0, 1), got {shared_fraction}")
    rng = np.random.default_rng(seed)
    shared = [f"shared{i:02d}" for i in range(shared_vocab)]
    docs = []
    for label in labels:
        own = [f"{label.lower()}word{i:02d}" for i in range(class_vocab)]
        for i in range(n_per_class):
            from_shared = rng.random(words_per_doc) < shared_fraction if shared else None
            words = []
            for j in range(words_per_doc):
                pool = shared if from_shared is not None and from_shared[j] else own
                words.append(pool[rng.integers(len(pool))])
            docs.append(Document(f"{label}-{i + 1}", label, " ".join(words)))
    return Corpus(tuple(docs), tuple(labels))
