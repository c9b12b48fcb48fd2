from __future__ import annotations

import numpy as np
import pytest

from topotext.metricspace import DistanceMatrix, PointCloud, pairwise_distances
from topotext.synthetic import unit_square


@pytest.fixture
def square() -> PointCloud:
    return unit_square()


@pytest.fixture
def square_dm(square: PointCloud) -> DistanceMatrix:
    return pairwise_distances(square)


@pytest.fixture
def equilateral_dm() -> DistanceMatrix:
    return DistanceMatrix(3, np.ones(3))
