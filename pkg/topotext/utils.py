import math
from typing import Any


def format_float(value: float) -> str:
    """Shortest round-tripping text for a float; infinities are written `inf`."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def parse_float(text: str) -> float:
    text = text.strip()
    if text.lower() in {"inf", "+inf", "infinity"}:
        return math.inf
    return float(text)


def sanitize_dot_id(value: Any) -> str:
    value = str(value)
    reserved_chars = '"\\'
    if any(char in value for char in reserved_chars):
        value = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{value}"'


class UnionFind:
    """Disjoint sets over 0..size-1 with path compression; roots are the smallest member."""

    def __init__(self, size: int) -> None:
        self.parents = list(range(size))
        self.num_components = size

    def find(self, elem: int) -> int:
        root = elem
        while root != self.parents[root]:
            root = self.parents[root]
        while elem != root:
            self.parents[elem], elem = root, self.parents[elem]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of `a` and `b`; False if they were already one set."""
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return False
        if root_b < root_a:
            root_a, root_b = root_b, root_a
        self.parents[root_b] = root_a
        self.num_components -= 1
        return True
