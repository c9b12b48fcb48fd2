from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from topotext.constants import DEFAULT_GAP_FACTOR
from topotext.errors import ConfigError
from topotext.metricspace import DistanceMatrix
from topotext.utils import UnionFind

logger = logging.getLogger(__name__)


class Merge(NamedTuple):
    left: int
    right: int
    distance: float


@dataclass(frozen=True)
class Dendrogram:
    """
    Complete-linkage merge history.

    Leaves are clusters `0..leaf_count-1`; the cluster created by merge `i`
    has id `leaf_count + i`. Merge distances are nondecreasing.
    """

    merges: tuple[Merge, ...]
    leaf_count: int

    @property
    def heights(self) -> np.ndarray:
        return np.asarray([m.distance for m in self.merges], dtype=np.float64)


@dataclass(frozen=True)
class Threshold:
    tau: float

    def __str__(self) -> str:
        return f"threshold:{self.tau}"


@dataclass(frozen=True)
class ClusterCount:
    k: int

    def __str__(self) -> str:
        return f"count:{self.k}"


@dataclass(frozen=True)
class FirstGap:
    """
    Cut at the largest relative gap `(high - low) / low` between consecutive merge
    heights, if it exceeds `factor`.
    """

    factor: float = DEFAULT_GAP_FACTOR

    def __str__(self) -> str:
        if self.factor == DEFAULT_GAP_FACTOR:
            return "first-gap"
        return f"first-gap:{self.factor}"


CutRule = Union[Threshold, ClusterCount, FirstGap]


def parse_cut_rule(text: str) -> CutRule:
    """
    Parse `first-gap`, `first-gap:<g>`, `threshold:<tau>` or `count:<k>`.

    Raises:
        ConfigError: if the text is not one of these or a value is out of range.
    """
    name, _, value = text.strip().partition(":")
    try:
        if name == "first-gap":
            rule: CutRule = FirstGap(float(value)) if value else FirstGap()
            if not rule.factor > 0:
                raise ConfigError(f"gap factor must be positive, got {rule.factor}")
        elif name == "threshold" and value:
            rule = Threshold(float(value))
            if not rule.tau >= 0:
                raise ConfigError(f"threshold must be nonnegative, got {rule.tau}")
        elif name == "count" and value:
            rule = ClusterCount(int(value))
            if rule.k < 1:
                raise ConfigError(f"cluster count must be at least 1, got {rule.k}")
        else:
            raise ConfigError(f"unknown cut rule {text!r}")
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse cut rule {text!r}: {exc}") from None
    return rule


def agglomerate(dm: DistanceMatrix) -> Dendrogram:
    """
    Complete-linkage agglomerative clustering.

    Repeatedly merges the two clusters whose farthest members are closest.
    Ties go to the pair with the smallest (lower id, higher id).

    Args:
        dm: distances between the leaves.
    Returns:
        [Dendrogram][topotext.clustering.Dendrogram]
    """
    n = dm.n
    linkage = dm.to_square()
    np.fill_diagonal(linkage, np.inf)
    cluster_of = np.arange(n)
    merges: list[Merge] = []

    for step in range(n - 1):
        best = linkage.min()
        slots = np.argwhere(np.triu(linkage == best, k=1))
        ids = np.sort(cluster_of[slots], axis=1)
        pick = np.lexsort((ids[:, 1], ids[:, 0]))[0]
        a, b = sorted(slots[pick])
        merges.append(Merge(int(ids[pick, 0]), int(ids[pick, 1]), float(best)))

        row = np.maximum(linkage[a], linkage[b])
        linkage[a, :] = row
        linkage[:, a] = row
        linkage[a, a] = np.inf
        linkage[b, :] = np.inf
        linkage[:, b] = np.inf
        cluster_of[a] = n + step

    logger.debug("agglomerated %d leaves", n)
    return Dendrogram(tuple(merges), n)


def _merges_to_apply(dg: Dendrogram, rule: CutRule) -> int:
    heights = dg.heights
    if isinstance(rule, Threshold):
        return int(np.searchsorted(heights, rule.tau, side="right"))
    if isinstance(rule, ClusterCount):
        if not 1 <= rule.k <= max(dg.leaf_count, 1):
            raise ConfigError(
                f"cannot cut {dg.leaf_count} leaves into {rule.k} clusters"
            )
        return dg.leaf_count - rule.k
    if len(heights) < 2:
        return len(heights)
    gaps = []
    for low, high in zip(heights[:-1], heights[1:]):
        if low > 0:
            gaps.append((high - low) / low)
        else:
            gaps.append(0.0 if high == 0 else math.inf)
    gap = int(np.argmax(gaps))
    if gaps[gap] > rule.factor:
        return gap + 1
    return len(heights)


def cut(dg: Dendrogram, rule: CutRule) -> tuple[int, ...]:
    """
    Partition the leaves of a dendrogram.

    Args:
        dg: the dendrogram.
        rule: [Threshold][topotext.clustering.Threshold] keeps merges at or
            below τ, [ClusterCount][topotext.clustering.ClusterCount] stops at
            k clusters, [FirstGap][topotext.clustering.FirstGap] cuts at the
            largest relative height gap when it exceeds the factor and otherwise
            returns one cluster.
    Returns:
        A cluster number per leaf, numbered in order of first appearance.
    Raises:
        ConfigError: if a cluster count exceeds the number of leaves.
    """
    applied = _merges_to_apply(dg, rule)
    members = UnionFind(dg.leaf_count + len(dg.merges))
    for index, merge in enumerate(dg.merges[:applied]):
        node = dg.leaf_count + index
        members.union(node, merge.left)
        members.union(node, merge.right)

    numbering: dict[int, int] = {}
    assignment = []
    for leaf in range(dg.leaf_count):
        root = members.find(leaf)
        assignment.append(numbering.setdefault(root, len(numbering)))
    return tuple(assignment)


def cluster(dm: DistanceMatrix, rule: CutRule) -> tuple[int, ...]:
    """[agglomerate][topotext.clustering.agglomerate] then [cut][topotext.clustering.cut]."""
    if dm.n == 0:
        return ()
    return cut(agglomerate(dm), rule)
