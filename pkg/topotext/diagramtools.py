from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linear_sum_assignment
from scipy.sparse.csgraph import maximum_bipartite_matching

from topotext.constants import DEFAULT_LANDSCAPE_LEVELS
from topotext.errors import ConfigError, EssentialMismatchWarning, InputError
from topotext.persistence import PersistenceDiagram

logger = logging.getLogger(__name__)

# Tent evaluations are done this many abscissae at a time.
_CHUNK = 2048


def _split(d: PersistenceDiagram, dim: int) -> tuple[np.ndarray, np.ndarray]:
    return d.finite(dim), np.sort(d.essential(dim))


def _augmented_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Sup-norm costs of the diagonal-augmented bipartite graph.

    Rows are the points of `a` followed by one diagonal slot per point of `b`;
    columns are the points of `b` followed by one diagonal slot per point of `a`.
    A point may only go to its own diagonal slot, and diagonal slots match each
    other for free.
    """
    n, m = len(a), len(b)
    costs = np.full((n + m, n + m), np.inf)
    if n and m:
        costs[:n, :m] = np.maximum(
            np.abs(a[:, None, 0] - b[None, :, 0]), np.abs(a[:, None, 1] - b[None, :, 1])
        )
    if n:
        costs[np.arange(n), m + np.arange(n)] = (a[:, 1] - a[:, 0]) / 2
    if m:
        costs[n + np.arange(m), np.arange(m)] = (b[:, 1] - b[:, 0]) / 2
    costs[n:, m:] = 0.0
    return costs


def _essential_costs(
    e1: np.ndarray, e2: np.ndarray, drop_essential: bool
) -> Optional[np.ndarray]:
    """Birth differences of infinite bars matched in sorted order; None on a count mismatch."""
    if drop_essential:
        return np.empty(0)
    if len(e1) != len(e2):
        warnings.warn(
            f"diagrams have {len(e1)} and {len(e2)} infinite bars; distance is infinite",
            EssentialMismatchWarning,
            stacklevel=3,
        )
        return None
    return np.abs(e1 - e2)


def _has_perfect_matching(costs: np.ndarray, threshold: float) -> bool:
    graph = sparse.csr_matrix((costs <= threshold).astype(np.int8))
    matching = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(matching >= 0))


def bottleneck(
    d1: PersistenceDiagram,
    d2: PersistenceDiagram,
    dim: int,
    *,
    drop_essential: bool = False,
) -> float:
    """
    Bottleneck distance between the dimension-`dim` parts of two diagrams.

    Finite points are matched to each other or to their diagonal projections
    under the sup norm. The optimum is one of the pairwise costs, so it is found
    by binary search over the sorted candidate costs with a perfect-matching
    feasibility check at each step. Infinite bars are matched separately, in
    order of birth.

    Args:
        d1: first diagram.
        d2: second diagram.
        dim: homology dimension to compare.
        drop_essential: ignore infinite bars entirely.
    Returns:
        The distance; `math.inf` if the infinite-bar counts differ, in which
        case an [EssentialMismatchWarning][topotext.errors.EssentialMismatchWarning]
        is emitted.
    """
    (a, e1), (b, e2) = _split(d1, dim), _split(d2, dim)
    essential = _essential_costs(e1, e2, drop_essential)
    if essential is None:
        return math.inf
    result = float(essential.max()) if essential.size else 0.0
    if len(a) + len(b) == 0:
        return result

    costs = _augmented_costs(a, b)
    candidates = np.unique(costs[np.isfinite(costs)])
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(costs, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    logger.debug(
        "bottleneck over %d x %d points, %d candidate costs",
        len(a),
        len(b),
        len(candidates),
    )
    return max(result, float(candidates[lo]))


def wasserstein(
    d1: PersistenceDiagram,
    d2: PersistenceDiagram,
    dim: int,
    p: float = 1.0,
    *,
    drop_essential: bool = False,
) -> float:
    """
    p-Wasserstein distance between the dimension-`dim` parts of two diagrams.

    Solved exactly as an assignment problem on the diagonal-augmented cost
    matrix, with each sup-norm cost raised to `p`.

    Args:
        d1: first diagram.
        d2: second diagram.
        dim: homology dimension to compare.
        p: the exponent, at least 1.
        drop_essential: ignore infinite bars entirely.
    Returns:
        `(Σ cost^p)^(1/p)`; `math.inf` on an infinite-bar count mismatch.
    Raises:
        ConfigError: if `p < 1`.
    """
    if not p >= 1 or math.isinf(p):
        raise ConfigError(f"p must be a finite number at least 1, got {p}")
    (a, e1), (b, e2) = _split(d1, dim), _split(d2, dim)
    essential = _essential_costs(e1, e2, drop_essential)
    if essential is None:
        return math.inf
    total = float(np.sum(essential**p))

    if len(a) + len(b):
        costs = _augmented_costs(a, b) ** p
        finite = costs[np.isfinite(costs)]
        # Forbidden edges get a cost no optimal assignment can afford.
        forbidden = float(finite.sum()) + 1.0
        rows, cols = linear_sum_assignment(np.where(np.isfinite(costs), costs, forbidden))
        total += float(costs[rows, cols].sum())
    return total ** (1.0 / p)


@dataclass(frozen=True, eq=False)
class Landscape:
    """
    Persistence landscape levels λ_1 ≥ λ_2 ≥ … as exact piecewise-linear functions.

    `levels[k - 1]` is an m×2 array of (t, value) critical points sorted by t;
    the function is linear between them and zero outside. An empty array is
    the zero function.
    """

    levels: tuple[np.ndarray, ...]
    domain: tuple[float, float] = (0.0, 0.0)

    @property
    def k_max(self) -> int:
        return len(self.levels)

    def critical_points(self, k: int) -> np.ndarray:
        if k < 1 or k > len(self.levels):
            return np.empty((0, 2))
        return self.levels[k - 1]


def _simplify(ts: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Drop interior points where the slope does not change; all-zero becomes empty."""
    if ts.size == 0 or not np.any(values > 0):
        return np.empty((0, 2))
    keep = np.ones(ts.size, dtype=bool)
    if ts.size > 2:
        slopes = np.diff(values) / np.diff(ts)
        keep[1:-1] = ~np.isclose(slopes[:-1], slopes[1:], rtol=0.0, atol=1e-12)
    return np.column_stack([ts[keep], values[keep]])


def _landscape_pairs(
    d: PersistenceDiagram, dim: int, cap: Optional[float]
) -> np.ndarray:
    rows = d.in_dimension(dim)
    if cap is not None:
        rows = rows.copy()
        rows[:, 1] = np.minimum(rows[:, 1], cap)
    rows = rows[np.isfinite(rows[:, 1])]
    return rows[rows[:, 1] > rows[:, 0]]


def _tents(pairs: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """len(ts)×len(pairs) matrix of max(0, min(t − b, d − t))."""
    rising = ts[:, None] - pairs[None, :, 0]
    falling = pairs[None, :, 1] - ts[:, None]
    return np.maximum(0.0, np.minimum(rising, falling))


def landscape(
    d: PersistenceDiagram,
    dim: int,
    k_max: int = DEFAULT_LANDSCAPE_LEVELS,
    *,
    cap: Optional[float] = None,
) -> Landscape:
    """
    Persistence landscape of one dimension of a diagram.

    λ_k(t) is the k-th largest tent max(0, min(t − b, d − t)) over the pairs.
    Every level is linear between births, deaths, midpoints and the crossings
    (b_i + d_j)/2 of a rising and a falling tent edge, so evaluating on those
    abscissae gives the exact critical points.

    Args:
        d: the diagram.
        dim: homology dimension.
        k_max: number of levels to keep.
        cap: replace infinite deaths with this value; without it infinite bars
            are left out.
    Returns:
        [Landscape][topotext.diagramtools.Landscape]
    Raises:
        ConfigError: if `k_max < 1`.
    """
    if k_max < 1:
        raise ConfigError(f"k_max must be at least 1, got {k_max}")
    pairs = _landscape_pairs(d, dim, cap)
    if len(pairs) == 0:
        return Landscape(tuple(np.empty((0, 2)) for _ in range(k_max)))

    lo, hi = float(pairs[:, 0].min()), float(pairs[:, 1].max())
    crossings = (pairs[:, 0][:, None] + pairs[:, 1][None, :]).ravel() / 2
    ts = np.unique(
        np.concatenate([pairs[:, 0], pairs[:, 1], pairs.sum(axis=1) / 2, crossings])
    )
    ts = ts[(ts >= lo) & (ts <= hi)]

    depth = min(k_max, len(pairs))
    top = np.zeros((len(ts), k_max))
    for start in range(0, len(ts), _CHUNK):
        tents = _tents(pairs, ts[start : start + _CHUNK])
        ordered = -np.sort(-tents, axis=1)
        top[start : start + _CHUNK, :depth] = ordered[:, :depth]

    levels = tuple(_simplify(ts, top[:, k]) for k in range(k_max))
    logger.debug(
        "landscape of %d pairs in dim %d: %d abscissae, %d levels",
        len(pairs),
        dim,
        len(ts),
        k_max,
    )
    return Landscape(levels, (lo, hi))


def eval_landscape(l: Landscape, k: int, t: float) -> float:
    """
    Evaluate λ_k at `t`.

    Raises:
        ConfigError: if `k < 1`.
    """
    if k < 1:
        raise ConfigError(f"landscape levels start at 1, got {k}")
    points = l.critical_points(k)
    if len(points) == 0:
        return 0.0
    return float(np.interp(t, points[:, 0], points[:, 1], left=0.0, right=0.0))


def _on_grid(points: np.ndarray, ts: np.ndarray) -> np.ndarray:
    if len(points) == 0:
        return np.zeros_like(ts)
    return np.interp(ts, points[:, 0], points[:, 1], left=0.0, right=0.0)


def _union_abscissae(landscapes: Sequence[Landscape], k: int) -> np.ndarray:
    parts = [l.critical_points(k)[:, 0] for l in landscapes]
    return np.unique(np.concatenate(parts)) if parts else np.empty(0)


def mean_landscape(ls: Sequence[Landscape]) -> Landscape:
    """
    Pointwise mean of landscapes, exact on the union of their critical points.

    Levels a landscape does not store count as zero.

    Raises:
        InputError: if `ls` is empty.
    """
    if not ls:
        raise InputError("cannot average an empty list of landscapes")
    k_max = max(l.k_max for l in ls)
    levels = []
    for k in range(1, k_max + 1):
        ts = _union_abscissae(ls, k)
        values = np.mean([_on_grid(l.critical_points(k), ts) for l in ls], axis=0)
        levels.append(_simplify(ts, values) if ts.size else np.empty((0, 2)))
    domain = (min(l.domain[0] for l in ls), max(l.domain[1] for l in ls))
    return Landscape(tuple(levels), domain)


def _segment_integral(h: np.ndarray, a: np.ndarray, b: np.ndarray, p: float) -> float:
    """∫ |f|^p over segments of width h where f is linear from a to b."""
    if p == 1:
        same_sign = a * b >= 0
        straight = h * (np.abs(a) + np.abs(b)) / 2
        denom = np.where(same_sign, 1.0, np.abs(a) + np.abs(b))
        crossing = h * (a**2 + b**2) / (2 * denom)
        return float(np.sum(np.where(same_sign, straight, crossing)))
    return float(np.sum(h * (a**2 + a * b + b**2) / 3))


def landscape_distance(l1: Landscape, l2: Landscape, p: float = 2) -> float:
    """
    L^p distance between two landscapes, summed over levels.

    Args:
        l1: first landscape.
        l2: second landscape.
        p: 1, 2 or `math.inf`.
    Raises:
        ConfigError: for any other `p`.
    """
    if p not in (1, 2, math.inf):
        raise ConfigError(f"landscape norms support p in 1, 2 and inf, got {p}")
    total = 0.0
    for k in range(1, max(l1.k_max, l2.k_max) + 1):
        ts = _union_abscissae((l1, l2), k)
        if ts.size == 0:
            continue
        diff = _on_grid(l1.critical_points(k), ts) - _on_grid(l2.critical_points(k), ts)
        if math.isinf(p):
            total = max(total, float(np.abs(diff).max()))
        else:
            total += _segment_integral(np.diff(ts), diff[:-1], diff[1:], p)
    return total if math.isinf(p) else total ** (1.0 / p)


def landscape_norm(l: Landscape, p: float = 2) -> float:
    """L^p norm of a landscape; see [landscape_distance][topotext.diagramtools.landscape_distance]."""
    return landscape_distance(l, Landscape(()), p)
