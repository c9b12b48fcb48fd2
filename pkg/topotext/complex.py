from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from topotext.constants import DEFAULT_MAX_DIM
from topotext.errors import ConfigError, InputError
from topotext.metricspace import DistanceMatrix
from topotext.utils import format_float, parse_float

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Simplex:
    """A simplex on sorted point indices, entering the filtration at `value`."""

    vertices: tuple[int, ...]
    value: float

    def __post_init__(self) -> None:
        if not self.vertices:
            raise InputError("a simplex needs at least one vertex")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise InputError(f"vertices {self.vertices} are not strictly increasing")
        if self.value < 0:
            raise InputError("filtration values are nonnegative")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> Iterator[tuple[int, ...]]:
        """Codimension-1 faces, each obtained by deleting one vertex in turn."""
        if self.dim == 0:
            return
        for skip in range(len(self.vertices)):
            yield self.vertices[:skip] + self.vertices[skip + 1 :]

    def sort_key(self) -> tuple[float, int, tuple[int, ...]]:
        return (self.value, self.dim, self.vertices)


@dataclass(frozen=True)
class FiltrationComplex:
    """
    A face-closed set of simplices in filtration order.

    Simplices are sorted by (value, dimension, vertices), so every prefix of
    the ordering is itself a simplicial complex and the prefixes with value at
    most ε form VR(ε).
    """

    simplices: tuple[Simplex, ...]
    max_dim: int
    max_eps: float
    _positions: dict[tuple[int, ...], int] = field(
        init=False, repr=False, compare=False
    )
    _values: list[float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.simplices, key=Simplex.sort_key))
        object.__setattr__(self, "simplices", ordered)
        object.__setattr__(
            self, "_positions", {s.vertices: i for i, s in enumerate(ordered)}
        )
        object.__setattr__(self, "_values", [s.value for s in ordered])

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.simplices)

    def __getitem__(self, index: int) -> Simplex:
        return self.simplices[index]

    def position(self, vertices: Sequence[int]) -> Optional[int]:
        """Index of the simplex on `vertices` in the filtration order, if stored."""
        return self._positions.get(tuple(vertices))

    def vertex_count(self) -> int:
        return sum(1 for s in self.simplices if s.dim == 0)

    def prefix_length(self, eps: float) -> int:
        """Number of simplices with value at most `eps`."""
        return bisect.bisect_right(self._values, eps)

    def dump(self) -> str:
        """One simplex per line as `dim value v0 v1 …`."""
        lines = [
            " ".join([str(s.dim), format_float(s.value), *map(str, s.vertices)])
            for s in self.simplices
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def load(cls, text: str, max_eps: Optional[float] = None) -> FiltrationComplex:
        simplices = []
        for line in text.splitlines():
            if not line.strip():
                continue
            try:
                dim, value, *rest = line.split()
                declared, vertices = int(dim), tuple(int(v) for v in rest)
                filtration_value = parse_float(value)
            except ValueError:
                raise InputError(f"line {line!r} is not `dim value vertices`") from None
            simplex = Simplex(vertices, filtration_value)
            if simplex.dim != declared:
                raise InputError(f"line {line!r} declares the wrong dimension")
            simplices.append(simplex)
        max_dim = max((s.dim for s in simplices), default=0)
        if max_eps is None:
            max_eps = max((s.value for s in simplices), default=0.0)
        return cls(tuple(simplices), max_dim, max_eps)


def _lower_neighbors(square: np.ndarray, max_eps: float) -> list[list[int]]:
    n = square.shape[0]
    return [[u for u in range(v) if square[u, v] <= max_eps] for v in range(n)]


def build_rips(
    dm: DistanceMatrix, max_dim: int = DEFAULT_MAX_DIM, max_eps: Optional[float] = None
) -> FiltrationComplex:
    """
    Build the Vietoris–Rips filtration of a distance matrix.

    Every simplex of dimension at most `max_dim` whose diameter is at most
    `max_eps` is included, with its diameter as filtration value.

    Args:
        dm: pairwise distances.
        max_dim: highest simplex dimension kept.
        max_eps: truncation scale; defaults to the diameter of the cloud.
    Returns:
        [FiltrationComplex][topotext.complex.FiltrationComplex]
    Raises:
        ConfigError: if `max_dim` is negative or `max_eps` is not positive.
    """
    if max_dim < 0:
        raise ConfigError(f"max_dim must be nonnegative, got {max_dim}")
    if max_eps is None:
        max_eps = dm.diameter()
    elif max_eps <= 0:
        raise ConfigError(f"max_eps must be positive, got {max_eps}")

    square = dm.to_square()
    lower = _lower_neighbors(square, max_eps)
    simplices: list[Simplex] = []

    # Incremental expansion: each clique is grown by lower neighbours only, so
    # every simplex is generated exactly once from its largest vertex.
    def add_cofaces(vertices: tuple[int, ...], value: float, candidates: list[int]):
        simplices.append(Simplex(vertices, value))
        if len(vertices) > max_dim:
            return
        for u in candidates:
            coface_value = max(value, max(float(square[u, w]) for w in vertices))
            remaining = [c for c in candidates if c < u and square[c, u] <= max_eps]
            add_cofaces((u, *vertices), coface_value, remaining)

    for v in range(dm.n):
        add_cofaces((v,), 0.0, lower[v])

    fc = FiltrationComplex(tuple(simplices), max_dim, float(max_eps))
    logger.debug(
        "built Rips complex: %d points, %d simplices, max_dim=%d, max_eps=%s",
        dm.n,
        len(fc),
        max_dim,
        max_eps,
    )
    return fc


def complex_at(fc: FiltrationComplex, eps: float) -> tuple[int, ...]:
    """
    Count the simplices of VR(eps), per dimension.

    Args:
        fc: a filtration.
        eps: the scale to cut at.
    Returns:
        A tuple whose entry `k` is the number of k-simplices with value ≤ eps,
        for k = 0..fc.max_dim.
    Raises:
        ConfigError: if `eps` is negative.
    """
    if eps < 0:
        raise ConfigError(f"eps must be nonnegative, got {eps}")
    counts = [0] * (fc.max_dim + 1)
    for simplex in fc.simplices[: fc.prefix_length(eps)]:
        counts[simplex.dim] += 1
    return tuple(counts)


def is_face_closed(simplices: Iterable[Simplex]) -> bool:
    """Whether every face of every simplex is present with a value no larger."""
    values = {s.vertices: s.value for s in simplices}
    for vertices, value in values.items():
        if len(vertices) == 1:
            continue
        for face in combinations(vertices, len(vertices) - 1):
            if face not in values or values[face] > value:
                return False
    return True
