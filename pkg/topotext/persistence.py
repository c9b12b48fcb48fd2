from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

from topotext.complex import FiltrationComplex, build_rips
from topotext.constants import DEFAULT_MAX_DIM
from topotext.errors import InputError, MissingFaceError
from topotext.metricspace import DistanceMatrix
from topotext.utils import UnionFind

logger = logging.getLogger(__name__)

Column = tuple[int, ...]


def _add_columns(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Sum of two sorted index lists over the two-element field (symmetric difference)."""
    out: list[int] = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif a[i] > b[j]:
            out.append(b[j])
            j += 1
        else:
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out


@dataclass(frozen=True)
class BoundaryMatrix:
    """
    The boundary operator of a filtration over the two-element field.

    Column `j` lists, in increasing order, the filtration positions of the
    codimension-1 faces of simplex `j`.
    """

    columns: tuple[Column, ...]
    dims: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.columns)

    def boundary_of_boundary(self, j: int) -> list[int]:
        """∂∂ applied to simplex `j`; always empty for a valid matrix."""
        total: list[int] = []
        for row in self.columns[j]:
            total = _add_columns(total, self.columns[row])
        return total


class Pairing(NamedTuple):
    pairs: tuple[tuple[int, int], ...]
    unpaired: tuple[int, ...]


class PersistencePair(NamedTuple):
    dim: int
    birth: float
    death: float

    @property
    def persistence(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    """
    A multiset of (dim, birth, death) pairs; `death` may be `math.inf`.

    Pairs are kept sorted, so two diagrams compare equal exactly when they are
    the same multiset.
    """

    pairs: tuple[PersistencePair, ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple(
            sorted(PersistencePair(int(d), float(b), float(e)) for d, b, e in self.pairs)
        )
        for pair in pairs:
            if pair.birth > pair.death:
                raise InputError(f"pair {tuple(pair)} dies before it is born")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[PersistencePair]:
        return iter(self.pairs)

    def dims(self) -> tuple[int, ...]:
        return tuple(sorted({p.dim for p in self.pairs}))

    def restrict(self, dim: int) -> PersistenceDiagram:
        return PersistenceDiagram(tuple(p for p in self.pairs if p.dim == dim))

    def in_dimension(self, dim: int) -> np.ndarray:
        """All (birth, death) rows of dimension `dim`, as a k×2 array."""
        rows = [(p.birth, p.death) for p in self.pairs if p.dim == dim]
        return np.asarray(rows, dtype=np.float64).reshape(-1, 2)

    def finite(self, dim: int) -> np.ndarray:
        rows = self.in_dimension(dim)
        return rows[np.isfinite(rows[:, 1])]

    def essential(self, dim: int) -> np.ndarray:
        """Births of the infinite bars of dimension `dim`."""
        rows = self.in_dimension(dim)
        return rows[np.isinf(rows[:, 1]), 0]

    def persistence(self, dim: int) -> np.ndarray:
        rows = self.in_dimension(dim)
        return rows[:, 1] - rows[:, 0]


@dataclass(frozen=True)
class BettiProfile:
    """β_p(ε) for every dimension of a diagram, as right-continuous step functions."""

    diagram: PersistenceDiagram

    def at(self, dim: int, eps: float) -> int:
        return sum(1 for p in self.diagram if p.dim == dim and p.birth <= eps < p.death)

    def critical_values(self, dim: int) -> tuple[float, ...]:
        values = set()
        for pair in self.diagram:
            if pair.dim == dim:
                values.add(pair.birth)
                if math.isfinite(pair.death):
                    values.add(pair.death)
        return tuple(sorted(values))

    def steps(self, dim: int) -> list[tuple[float, int]]:
        """(ε, β) at each critical value; β is constant until the next one."""
        return [(eps, self.at(dim, eps)) for eps in self.critical_values(dim)]


def boundary_matrix(fc: FiltrationComplex) -> BoundaryMatrix:
    """
    Build the mod-2 boundary matrix of a filtration.

    Over the two-element field the alternating signs of the boundary collapse
    to set membership, so column `j` is just the set of faces of simplex `j`.

    Args:
        fc: a face-closed filtration.
    Returns:
        [BoundaryMatrix][topotext.persistence.BoundaryMatrix]
    Raises:
        MissingFaceError: if a face of some simplex is not stored in `fc`.
    """
    columns: list[Column] = []
    for simplex in fc:
        rows = []
        for face in simplex.faces():
            position = fc.position(face)
            if position is None:
                raise MissingFaceError(simplex.vertices, face)
            rows.append(position)
        columns.append(tuple(sorted(rows)))
    return BoundaryMatrix(tuple(columns), tuple(s.dim for s in fc))


def reduce(bm: BoundaryMatrix, *, clearing: bool = False) -> Pairing:
    """
    Standard column reduction of a boundary matrix.

    Each column is repeatedly added to by the earlier column sharing its lowest
    row until its lowest row is unique. A column reduced to `j` with lowest row
    `i` pairs `(i, j)`; zero columns never used as a lowest row are unpaired.

    Args:
        bm: the boundary matrix, in filtration order.
        clearing: reduce dimensions from the top down and zero out every
            column already known to be a birth. The pairing is unchanged.
    Returns:
        [Pairing][topotext.persistence.Pairing], pairs sorted by death index.
    """
    n = len(bm)
    reduced: list[list[int]] = [list(column) for column in bm.columns]
    pivots: dict[int, int] = {}
    cleared: set[int] = set()

    if clearing:
        order = sorted(range(n), key=lambda j: (-bm.dims[j], j))
    else:
        order = list(range(n))

    additions = 0
    for j in order:
        if j in cleared:
            reduced[j] = []
            continue
        column = reduced[j]
        while column and column[-1] in pivots:
            column = _add_columns(column, reduced[pivots[column[-1]]])
            additions += 1
        reduced[j] = column
        if column:
            pivots[column[-1]] = j
            if clearing:
                cleared.add(column[-1])

    pairs = tuple(sorted(((low, j) for low, j in pivots.items()), key=lambda p: p[1]))
    unpaired = tuple(j for j in range(n) if not reduced[j] and j not in pivots)
    logger.debug(
        "reduced %d columns with %d additions: %d pairs, %d unpaired",
        n,
        additions,
        len(pairs),
        len(unpaired),
    )
    return Pairing(pairs, unpaired)


def diagram(
    fc: FiltrationComplex, pairing: Pairing, *, keep_zero_persistence: bool = False
) -> PersistenceDiagram:
    """
    Read a persistence diagram off a pairing.

    Args:
        fc: the filtration the pairing was computed on.
        pairing: output of [reduce][topotext.persistence.reduce].
        keep_zero_persistence: keep pairs born and killed at the same value.
    Returns:
        [PersistenceDiagram][topotext.persistence.PersistenceDiagram]
    """
    pairs = []
    for birth, death in pairing.pairs:
        born, killed = fc[birth], fc[death]
        if born.value == killed.value and not keep_zero_persistence:
            continue
        pairs.append(PersistencePair(born.dim, born.value, killed.value))
    for index in pairing.unpaired:
        pairs.append(PersistencePair(fc[index].dim, fc[index].value, math.inf))
    return PersistenceDiagram(tuple(pairs))


def betti_profile(d: PersistenceDiagram) -> BettiProfile:
    """β_p(ε) = number of pairs of dimension p with birth ≤ ε < death."""
    return BettiProfile(d)


def persistent_homology(
    dm: DistanceMatrix,
    max_dim: int = DEFAULT_MAX_DIM,
    max_eps: Optional[float] = None,
    *,
    clearing: bool = True,
    keep_zero_persistence: bool = False,
) -> PersistenceDiagram:
    """
    Persistence diagram of the Vietoris–Rips filtration of `dm`.

    !!! note
        Classes of dimension `max_dim` never die, because no simplex of
        dimension `max_dim + 1` is built; read that dimension as a bound.
    """
    if max_dim == 0:
        return zero_dimensional_persistence(
            dm, max_eps, keep_zero_persistence=keep_zero_persistence
        )
    fc = build_rips(dm, max_dim, max_eps)
    pairing = reduce(boundary_matrix(fc), clearing=clearing)
    return diagram(fc, pairing, keep_zero_persistence=keep_zero_persistence)


def zero_dimensional_persistence(
    dm: DistanceMatrix,
    max_eps: Optional[float] = None,
    *,
    keep_zero_persistence: bool = False,
) -> PersistenceDiagram:
    """
    The H_0 diagram by Kruskal's algorithm.

    Every vertex is born at 0, so each merging edge kills one class at its
    length and every surviving component is an infinite bar.
    """
    if max_eps is None:
        max_eps = dm.diameter()
    square = dm.to_square()
    edges = sorted(
        (float(square[i, j]), i, j)
        for i in range(dm.n)
        for j in range(i + 1, dm.n)
        if square[i, j] <= max_eps
    )
    components = UnionFind(dm.n)
    pairs = []
    for value, i, j in edges:
        if components.union(i, j) and (value > 0 or keep_zero_persistence):
            pairs.append(PersistencePair(0, 0.0, value))
    pairs.extend(
        PersistencePair(0, 0.0, math.inf) for _ in range(components.num_components)
    )
    return PersistenceDiagram(tuple(pairs))
