from __future__ import annotations

from typing import Sequence


class TopoTextError(Exception):
    """Base class for every error raised by topotext."""


class ConfigError(TopoTextError, ValueError):
    """A parameter is outside the range the operation accepts."""


class InputError(TopoTextError, ValueError):
    """Input data does not satisfy an operation's preconditions."""


class DimensionMismatchError(InputError):
    pass


class EmptyInputError(InputError):
    pass


class ZeroVectorError(InputError):
    """Cosine distance was requested for a cloud containing a zero vector."""

    def __init__(self, index: int, point_id: str) -> None:
        super().__init__(
            f"point {point_id!r} (row {index}) is the zero vector; "
            "cosine distance is undefined for it"
        )
        self.index = index
        self.point_id = point_id


class CorpusError(InputError):
    pass


class CorpusDecodeError(CorpusError):
    def __init__(self, source: str, line: int) -> None:
        super().__init__(f"{source}: line {line} is not valid UTF-8")
        self.source = source
        self.line = line


class ComputationError(TopoTextError, RuntimeError):
    pass


class MissingFaceError(ComputationError):
    """A simplex's codimension-1 face is absent from the filtration."""

    def __init__(self, simplex: Sequence[int], face: Sequence[int]) -> None:
        super().__init__(
            f"simplex {list(simplex)} has face {list(face)} missing from the complex"
        )
        self.simplex = tuple(simplex)
        self.face = tuple(face)


class EssentialMismatchWarning(UserWarning):
    """Two diagrams carry different numbers of infinite bars."""
