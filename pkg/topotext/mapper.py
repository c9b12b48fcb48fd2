from __future__ import annotations

import itertools
import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Optional, Sequence, Union

import networkx as nx
import numpy as np
from multidict import MultiDict
from scipy import sparse

from topotext.clustering import CutRule, FirstGap, cluster
from topotext.constants import (
    BOTH,
    DEFAULT_BOTH_THRESHOLD,
    DEFAULT_OVERLAP,
    DEFAULT_RESOLUTION,
    DEFAULT_TOP_TERMS,
    UNLABELED,
)
from topotext.embed import Embedding
from topotext.errors import ConfigError, DimensionMismatchError
from topotext.metricspace import DistanceMatrix, Metric, PointCloud, vector_distances
from topotext.textpipeline import DocumentTermMatrix
from topotext.utils import sanitize_dot_id

logger = logging.getLogger(__name__)

Source = Union[
    DistanceMatrix, PointCloud, DocumentTermMatrix, np.ndarray, sparse.spmatrix
]

# Fill colours cycled over labels in sorted order; mixed nodes are grey.
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
MIXED_COLOR = "#7f7f7f"


@dataclass(frozen=True)
class Bin:
    """
    One cell of a cover: a product of intervals.

    An interval is closed unless its `half_open` flag is set, in which case it
    excludes its upper end.
    """

    id: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    half_open: tuple[bool, ...]

    def contains(self, coords: np.ndarray) -> np.ndarray:
        """Mask of the rows of `coords` lying in the bin."""
        inside = np.ones(coords.shape[0], dtype=bool)
        bounds = zip(self.lower, self.upper, self.half_open)
        for axis, (lo, hi, open_) in enumerate(bounds):
            values = coords[:, axis]
            inside &= values >= lo
            inside &= (values < hi) if open_ else (values <= hi)
        return inside


@dataclass(frozen=True)
class Cover:
    bins: tuple[Bin, ...]
    resolution: tuple[int, ...]
    overlap: float

    @property
    def dims(self) -> int:
        return len(self.resolution)

    def __len__(self) -> int:
        return len(self.bins)


def _axis_intervals(
    values: np.ndarray, resolution: int, overlap: float
) -> list[tuple[float, float, bool]]:
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return [(lo, hi, False)]
    width = (hi - lo) / resolution
    pad = overlap * width / 2
    intervals = []
    for i in range(resolution):
        last = i == resolution - 1
        lower = lo + i * width - pad
        upper = lo + (i + 1) * width + pad
        if i == 0:
            lower = min(lower, lo)
        if last:
            upper = max(upper, hi)
        intervals.append((lower, upper, overlap == 0 and not last))
    return intervals


def build_cover(
    lens: Embedding,
    resolution: Union[int, Sequence[int]] = DEFAULT_RESOLUTION,
    overlap: float = DEFAULT_OVERLAP,
) -> Cover:
    """
    Cover the range of a 1-d or 2-d lens with overlapping bins.

    Along each axis with range [lo, hi] and `n` bins of width w = (hi − lo)/n,
    bin `i` spans [lo + i·w − o·w/2, lo + (i + 1)·w + o·w/2], so neighbours
    overlap by o·w. With o = 0 the bins are half-open and partition the range.
    A 2-d cover is the row-major product of the axis covers.

    Args:
        lens: the lens values.
        resolution: bins per axis, one number for every axis or one per axis.
        overlap: fraction of a bin width shared with each neighbour, in [0, 1).
    Returns:
        [Cover][topotext.mapper.Cover]
    Raises:
        ConfigError: if a resolution is below 1 or the overlap is out of range.
    """
    if lens.dim not in (1, 2):
        raise ConfigError(f"lens must be 1- or 2-dimensional, got {lens.dim}")
    if isinstance(resolution, int):
        resolution = (resolution,) * lens.dim
    resolution = tuple(int(r) for r in resolution)
    if len(resolution) != lens.dim or any(r < 1 for r in resolution):
        raise ConfigError(
            f"need {lens.dim} resolution(s) of at least 1, got {resolution}"
        )
    if not 0 <= overlap < 1:
        raise ConfigError(f"overlap must lie in [0, 1), got {overlap}")
    if len(lens) == 0:
        raise ConfigError("cannot cover an empty lens")

    axes = [
        _axis_intervals(lens.coords[:, axis], resolution[axis], overlap)
        for axis in range(lens.dim)
    ]
    bins = tuple(
        Bin(
            index,
            tuple(iv[0] for iv in cell),
            tuple(iv[1] for iv in cell),
            tuple(iv[2] for iv in cell),
        )
        for index, cell in enumerate(itertools.product(*axes))
    )
    return Cover(bins, tuple(len(a) for a in axes), float(overlap))


@dataclass(frozen=True)
class MapperNode:
    id: int
    bin: int
    members: tuple[str, ...]
    composition: Mapping[str, int]
    indices: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.members)

    def majority(self) -> tuple[str, float]:
        """Most frequent label and its share; ties go to the smaller label."""
        label, count = min(self.composition.items(), key=lambda item: (-item[1], item[0]))
        return label, count / self.size


class Edge(NamedTuple):
    source: int
    target: int
    shared: int


@dataclass(frozen=True)
class MapperGraph:
    """
    The nerve 1-skeleton: one node per cluster, an edge per intersecting pair.

    !!! note
        Edges are sorted by (source, target) with `source < target`.
    """

    nodes: tuple[MapperNode, ...]
    edges: tuple[Edge, ...]

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        for node in self.nodes:
            graph.add_node(
                node.id, bin=node.bin, size=node.size, composition=dict(node.composition)
            )
        graph.add_edges_from(
            (e.source, e.target, {"shared": e.shared}) for e in self.edges
        )
        return graph

    def components(self) -> list[tuple[int, ...]]:
        """Connected components as sorted node-id tuples, ordered by smallest id."""
        parts = nx.connected_components(self.to_networkx())
        return sorted(tuple(sorted(part)) for part in parts)

    def cycle_rank(self) -> int:
        """Edges − nodes + components: the number of independent loops."""
        return len(self.edges) - len(self.nodes) + len(self.components())

    def covered(self) -> set[str]:
        return {member for node in self.nodes for member in node.members}

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "id": node.id,
                    "bin": node.bin,
                    "size": node.size,
                    "members": list(node.members),
                    "composition": dict(sorted(node.composition.items())),
                }
                for node in self.nodes
            ],
            "edges": [
                {"source": e.source, "target": e.target, "shared": e.shared}
                for e in self.edges
            ],
        }

    def to_json(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)
        return text + "\n"

    @classmethod
    def from_json(cls, text: str) -> MapperGraph:
        data = json.loads(text)
        nodes = tuple(
            MapperNode(n["id"], n["bin"], tuple(n["members"]), dict(n["composition"]))
            for n in data["nodes"]
        )
        edges = tuple(Edge(e["source"], e["target"], e["shared"]) for e in data["edges"])
        return cls(nodes, edges)

    def to_dot(self, partition: Optional[Mapping[int, str]] = None) -> str:
        """
        Graphviz source with node width scaled by size and fill colour by label.

        Args:
            partition: node id → group, e.g. from
                [partition_nodes][topotext.mapper.partition_nodes]; defaults to
                each node's majority label.
        """
        if partition is None:
            partition = {node.id: node.majority()[0] for node in self.nodes}
        groups = sorted({g for g in partition.values() if g != BOTH})
        colors = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(groups)}
        largest = max((node.size for node in self.nodes), default=1)

        lines = ["graph mapper {", '  node [shape=circle, style=filled, label=""];']
        for node in self.nodes:
            group = partition.get(node.id, BOTH)
            width = 0.2 + 0.8 * (node.size / largest) ** 0.5
            lines.append(
                f"  {node.id} [width={width:.3f}, "
                f"fillcolor={sanitize_dot_id(colors.get(group, MIXED_COLOR))}, "
                f"tooltip={sanitize_dot_id(f'{group} ({node.size})')}];"
            )
        for edge in self.edges:
            penwidth = 1 + edge.shared**0.5
            lines.append(f"  {edge.source} -- {edge.target} [penwidth={penwidth:.3f}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _distances_for(source: Source, metric: Metric):
    """A callable mapping row indices to the distance matrix on those rows."""
    if isinstance(source, DistanceMatrix):
        return source.n, source.subset
    if isinstance(source, PointCloud):
        rows = source.points
    elif isinstance(source, DocumentTermMatrix):
        rows = source.matrix
    else:
        rows = source if sparse.issparse(source) else np.asarray(source, dtype=np.float64)
    if sparse.issparse(rows):
        rows = sparse.csr_matrix(rows)

    def restricted(indices: Sequence[int]) -> DistanceMatrix:
        return vector_distances(rows[np.asarray(indices)], metric)

    return rows.shape[0], restricted


def build_mapper(
    lens: Embedding,
    source: Source,
    cover: Cover,
    cut_rule: CutRule = FirstGap(),
    *,
    metric: Metric = "euclidean",
    labels: Optional[Sequence[str]] = None,
    workers: int = 1,
) -> MapperGraph:
    """
    Run Mapper: pull the cover back, cluster each bin, and take the nerve.

    Points are clustered with complete linkage in the original space, bin by
    bin. Nodes are numbered in bin order and, within a bin, in cluster order;
    two nodes are joined when they share a member.

    Args:
        lens: the filter values, one row per point.
        source: the data space, as a distance matrix or as vectors.
        cover: bins over the lens range.
        cut_rule: how each bin's dendrogram is cut.
        metric: distance used when `source` holds vectors.
        labels: a label per point for node compositions; taken from a
            document-term matrix source when not given.
        workers: number of threads clustering bins at once.
    Returns:
        [MapperGraph][topotext.mapper.MapperGraph]
    Raises:
        DimensionMismatchError: if the lens and the source disagree in length.
    """
    n, distances = _distances_for(source, metric)
    if len(lens) != n:
        raise DimensionMismatchError(f"lens has {len(lens)} rows, data has {n}")
    if labels is None:
        labels = source.labels if isinstance(source, DocumentTermMatrix) else None
    if labels is None:
        labels = (UNLABELED,) * n
    if len(labels) != n:
        raise DimensionMismatchError(f"{len(labels)} labels for {n} points")
    if workers < 1:
        raise ConfigError(f"workers must be at least 1, got {workers}")

    def cluster_bin(bin_: Bin) -> list[tuple[int, ...]]:
        members = np.flatnonzero(bin_.contains(lens.coords))
        if members.size == 0:
            return []
        assignment = cluster(distances(members), cut_rule) if members.size > 1 else (0,)
        groups: dict[int, list[int]] = {}
        for index, label in zip(members.tolist(), assignment):
            groups.setdefault(label, []).append(index)
        return [tuple(group) for group in groups.values()]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_bin = list(pool.map(cluster_bin, cover.bins))
    else:
        per_bin = [cluster_bin(bin_) for bin_ in cover.bins]

    nodes = []
    membership: MultiDict[int] = MultiDict()
    for bin_, clusters in zip(cover.bins, per_bin):
        for indices in clusters:
            node_id = len(nodes)
            composition = Counter(labels[i] for i in indices)
            nodes.append(
                MapperNode(
                    node_id,
                    bin_.id,
                    tuple(lens.doc_ids[i] for i in indices),
                    dict(sorted(composition.items())),
                    indices,
                )
            )
            for i in indices:
                membership.add(lens.doc_ids[i], node_id)

    shared: Counter[tuple[int, int]] = Counter()
    for point in dict.fromkeys(membership.keys()):
        for pair in itertools.combinations(sorted(membership.getall(point)), 2):
            shared[pair] += 1
    edges = tuple(Edge(u, v, count) for (u, v), count in sorted(shared.items()))

    logger.debug(
        "mapper: %d bins, %d nodes, %d edges", len(cover.bins), len(nodes), len(edges)
    )
    return MapperGraph(tuple(nodes), edges)


def partition_nodes(
    graph: MapperGraph,
    both_threshold: float = DEFAULT_BOTH_THRESHOLD,
) -> dict[int, str]:
    """
    Assign every node to its majority label, or to `"Both"` when mixed.

    A node is mixed when its majority share is below `both_threshold`.
    """
    if not 0.5 <= both_threshold <= 1:
        raise ConfigError(f"both_threshold must lie in [0.5, 1], got {both_threshold}")
    partition = {}
    for node in graph.nodes:
        label, share = node.majority()
        partition[node.id] = BOTH if share < both_threshold else label
    return partition


class PurityRow(NamedTuple):
    group: str
    label: str
    nodes: int
    size: int
    ratio: Optional[float]


def cluster_purity(
    graph: MapperGraph,
    partition: Mapping[int, str],
    labels: Optional[Sequence[str]] = None,
) -> list[PurityRow]:
    """
    Share of each group's documents that carry the group's label.

    For a label group the ratio is Σ count(label) / Σ size over its nodes;
    the `"Both"` group reports one row per label. An empty group has ratio
    None.

    Args:
        graph: the Mapper graph.
        partition: node id → label or `"Both"`; every node must be assigned.
        labels: the class labels; defaults to every label seen in the graph.
    Returns:
        One [PurityRow][topotext.mapper.PurityRow] per class, then the
        `"Both"` rows.
    Raises:
        ConfigError: if a node is not assigned.
    """
    missing = [node.id for node in graph.nodes if node.id not in partition]
    if missing:
        raise ConfigError(f"nodes {missing} have no group")
    if labels is None:
        labels = sorted({label for node in graph.nodes for label in node.composition})

    def row(group: str, label: str) -> PurityRow:
        members = [node for node in graph.nodes if partition[node.id] == group]
        size = sum(node.size for node in members)
        hits = sum(node.composition.get(label, 0) for node in members)
        return PurityRow(group, label, len(members), size, hits / size if size else None)

    rows = [row(label, label) for label in labels]
    rows.extend(row(BOTH, label) for label in labels)
    return rows


def term_summary(
    node: MapperNode, dtm: DocumentTermMatrix, top_k: int = DEFAULT_TOP_TERMS
) -> list[tuple[str, float]]:
    """
    The node's top terms by TF-IDF weight summed over its documents.

    Ties are broken alphabetically; terms with zero weight are left out.
    """
    index = dtm.doc_index()
    rows = [index[m] for m in node.members if m in index]
    if not rows or top_k < 1:
        return []
    weights = np.asarray(dtm.matrix[rows].sum(axis=0)).ravel()
    ranked = sorted(
        ((dtm.vocab[j], float(weights[j])) for j in np.flatnonzero(weights > 0)),
        key=lambda item: (-item[1], item[0]),
    )
    return ranked[:top_k]
