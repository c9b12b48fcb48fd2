from __future__ import annotations

import logging
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from topotext.clustering import CutRule, FirstGap, parse_cut_rule
from topotext.complex import FiltrationComplex, build_rips
from topotext.constants import (
    DEFAULT_LANDSCAPE_LEVELS,
    DEFAULT_MAX_DIM,
    DEFAULT_OVERLAP,
    DEFAULT_RESOLUTION,
    DEFAULT_SEED,
)
from topotext.diagramtools import Landscape, landscape
from topotext.embed import (
    Embedding,
    coordinate_projection,
    principal_components,
    truncated_svd,
)
from topotext.errors import ConfigError
from topotext.mapper import Cover, MapperGraph, build_cover, build_mapper
from topotext.metricspace import (
    METRICS,
    DistanceMatrix,
    Metric,
    PointCloud,
    pairwise_distances,
    vector_distances,
)
from topotext.persistence import PersistenceDiagram, boundary_matrix, diagram, reduce
from topotext.textpipeline import Corpus, DocumentTermMatrix, tfidf

logger = logging.getLogger(__name__)


class PersistenceResult(NamedTuple):
    complex: FiltrationComplex
    diagram: PersistenceDiagram
    landscapes: dict[int, Landscape]


class MapperResult(NamedTuple):
    lens: Embedding
    cover: Cover
    graph: MapperGraph


class Pipeline:
    """
    Chainable entry point from a corpus or a point cloud to its topology.

    Example:
        ```py
        from topotext import Pipeline, load_corpus

        corpus = load_corpus("hafez.txt", "hafez.labels")
        result = Pipeline.from_corpus(corpus).tfidf().mapper().cover(10, 0.3).execute()
        print(result.graph.cycle_rank())
        ```
    """

    def __init__(
        self,
        *,
        corpus: Optional[Corpus] = None,
        cloud: Optional[PointCloud] = None,
        labels: Optional[Sequence[str]] = None,
    ) -> None:
        self.corpus = corpus
        self.cloud = cloud
        self.labels = tuple(labels) if labels is not None else None
        self.dtm: Optional[DocumentTermMatrix] = None
        self._metric: Metric = "cosine" if corpus is not None else "euclidean"

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> Pipeline:
        return cls(corpus=corpus)

    @classmethod
    def from_cloud(
        cls, cloud: PointCloud, labels: Optional[Sequence[str]] = None
    ) -> Pipeline:
        return cls(cloud=cloud, labels=labels)

    def tfidf(self, stop_words: Optional[Iterable[str]] = None) -> Pipeline:
        """
        Vectorise the corpus; documents left without terms are dropped.

        Returns:
            The modified Pipeline.
        Raises:
            ConfigError: if the pipeline was built from a point cloud.
        """
        if self.corpus is None:
            raise ConfigError("tf-idf needs a corpus")
        full = tfidf(self.corpus, stop_words)
        self.dtm = full.without_empty_rows()
        logger.debug(
            "dropped %d empty documents", len(full.doc_ids) - len(self.dtm.doc_ids)
        )
        return self

    def metric(self, name: Metric) -> Pipeline:
        """
        Choose the distance of the data space.

        Args:
            name: `"euclidean"` or `"cosine"`.
        Returns:
            The modified Pipeline.
        """
        if name not in METRICS:
            raise ConfigError(f"unknown metric {name!r}; expected one of {METRICS}")
        self._metric = name
        return self

    @property
    def data(self) -> Union[DocumentTermMatrix, PointCloud]:
        if self.cloud is not None:
            return self.cloud
        if self.dtm is None:
            self.tfidf()
        return self.dtm  # type: ignore

    def distances(self) -> DistanceMatrix:
        data = self.data
        if isinstance(data, PointCloud):
            return pairwise_distances(data, self._metric)
        return vector_distances(data.matrix, self._metric, ids=data.doc_ids)

    def persistence(
        self, max_dim: int = DEFAULT_MAX_DIM, max_eps: Optional[float] = None
    ) -> PersistenceBuilder:
        """
        Compute persistent homology of the Rips filtration.

        Returns:
            [PersistenceBuilder][topotext.pipeline.PersistenceBuilder]
        """
        return PersistenceBuilder(self.distances(), max_dim, max_eps)

    def mapper(self) -> MapperBuilder:
        """
        Run Mapper on the data.

        Returns:
            [MapperBuilder][topotext.pipeline.MapperBuilder]
        """
        return MapperBuilder(self)


class PersistenceBuilder:
    def __init__(
        self,
        dm: Optional[DistanceMatrix],
        max_dim: int,
        max_eps: Optional[float],
        *,
        fc: Optional[FiltrationComplex] = None,
    ) -> None:
        self.dm = dm
        self.fc = fc
        self.max_dim = max_dim
        self.max_eps = max_eps
        self._clearing = True
        self._keep_zero = False
        self._k_max = 0
        self._cap: Optional[float] = None

    @classmethod
    def from_complex(cls, fc: FiltrationComplex) -> PersistenceBuilder:
        """Persistence of a filtration built elsewhere, e.g. a saved complex dump."""
        return cls(None, fc.max_dim, fc.max_eps, fc=fc)

    def clearing(self, flag: bool = True) -> PersistenceBuilder:
        self._clearing = flag
        return self

    def keep_zero_persistence(self, flag: bool = True) -> PersistenceBuilder:
        self._keep_zero = flag
        return self

    def landscapes(
        self, k_max: int = DEFAULT_LANDSCAPE_LEVELS, cap: Optional[float] = None
    ) -> PersistenceBuilder:
        """
        Also compute landscapes of every dimension.

        Args:
            k_max: levels per landscape.
            cap: death value given to infinite bars; they are left out if None.
        """
        if k_max < 1:
            raise ConfigError(f"k_max must be at least 1, got {k_max}")
        self._k_max = k_max
        self._cap = cap
        return self

    def execute(self) -> PersistenceResult:
        """
        Returns:
            [PersistenceResult][topotext.pipeline.PersistenceResult]
        Raises:
            MissingFaceError: if a filtration given to
                [from_complex][topotext.pipeline.PersistenceBuilder.from_complex]
                is not face-closed.
        """
        fc = self.fc
        if fc is None:
            assert self.dm is not None
            fc = build_rips(self.dm, self.max_dim, self.max_eps)
        pairing = reduce(boundary_matrix(fc), clearing=self._clearing)
        d = diagram(fc, pairing, keep_zero_persistence=self._keep_zero)
        landscapes = {}
        if self._k_max:
            landscapes = {
                dim: landscape(d, dim, self._k_max, cap=self._cap)
                for dim in range(self.max_dim + 1)
            }
        return PersistenceResult(fc, d, landscapes)


class MapperBuilder:
    def __init__(self, pipeline: Pipeline) -> None:
        self.pipeline = pipeline
        self._lens: Optional[Embedding] = None
        self._resolution: Union[int, Sequence[int]] = DEFAULT_RESOLUTION
        self._overlap = DEFAULT_OVERLAP
        self._cut: CutRule = FirstGap()
        self._workers = 1

    def _rows(self):
        data = self.pipeline.data
        if isinstance(data, PointCloud):
            return data.points, data.ids
        return data, None

    def lens_svd(self, k: int = 2, seed: Optional[int] = DEFAULT_SEED) -> MapperBuilder:
        rows, ids = self._rows()
        self._lens = truncated_svd(rows, k, seed, ids=ids)
        return self

    def lens_pca(self, k: int = 2, seed: Optional[int] = DEFAULT_SEED) -> MapperBuilder:
        rows, ids = self._rows()
        self._lens = principal_components(rows, k, seed, ids=ids)
        return self

    def lens_axis(self, axis: int = 0) -> MapperBuilder:
        data = self.pipeline.data
        if not isinstance(data, PointCloud):
            raise ConfigError("a coordinate lens needs a point cloud")
        self._lens = coordinate_projection(data, axis)
        return self

    def cover(
        self,
        resolution: Union[int, Sequence[int]] = DEFAULT_RESOLUTION,
        overlap: float = DEFAULT_OVERLAP,
    ) -> MapperBuilder:
        self._resolution = resolution
        self._overlap = overlap
        return self

    def cut(self, rule: Union[CutRule, str]) -> MapperBuilder:
        """
        Args:
            rule: a cut rule, or its text form such as `"first-gap:3"`.
        """
        self._cut = parse_cut_rule(rule) if isinstance(rule, str) else rule
        return self

    def workers(self, n: int) -> MapperBuilder:
        self._workers = n
        return self

    def execute(self) -> MapperResult:
        """
        Returns:
            [MapperResult][topotext.pipeline.MapperResult]
        !!! note
            Without an explicit lens, corpora use a 2-d SVD lens and point
            clouds their first coordinate.
        """
        if self._lens is None:
            if isinstance(self.pipeline.data, PointCloud):
                self.lens_axis(0)
            else:
                self.lens_svd()
        lens = self._lens
        cover = build_cover(lens, self._resolution, self._overlap)  # type: ignore
        graph = build_mapper(
            lens,  # type: ignore
            self.pipeline.data,
            cover,
            self._cut,
            metric=self.pipeline._metric,
            labels=self.pipeline.labels,
            workers=self._workers,
        )
        return MapperResult(lens, cover, graph)  # type: ignore
