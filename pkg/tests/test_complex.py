from __future__ import annotations

import math

import pytest

from tests.oracles import random_cloud, rips_simplices
from topotext.complex import (
    FiltrationComplex,
    Simplex,
    build_rips,
    complex_at,
    is_face_closed,
)
from topotext.errors import ConfigError, InputError
from topotext.metricspace import DistanceMatrix, pairwise_distances


class TestSimplex:
    def test_faces(self):
        simplex = Simplex((0, 1, 2), 1.0)

        assert list(simplex.faces()) == [(1, 2), (0, 2), (0, 1)]
        assert simplex.dim == 2

    def test_vertex_has_no_faces(self):
        assert list(Simplex((3,), 0.0).faces()) == []

    def test_unsorted_vertices(self):
        with pytest.raises(InputError):
            Simplex((2, 1), 1.0)

    def test_negative_value(self):
        with pytest.raises(InputError):
            Simplex((0,), -1.0)


class TestBuildRips:
    def test_equilateral(self, equilateral_dm: DistanceMatrix):
        fc = build_rips(equilateral_dm, max_dim=2, max_eps=2)

        assert [(s.vertices, s.value) for s in fc] == [
            ((0,), 0.0),
            ((1,), 0.0),
            ((2,), 0.0),
            ((0, 1), 1.0),
            ((0, 2), 1.0),
            ((1, 2), 1.0),
            ((0, 1, 2), 1.0),
        ]

    def test_single_point(self):
        fc = build_rips(DistanceMatrix(1, []), max_dim=2)

        assert [(s.vertices, s.value) for s in fc] == [((0,), 0.0)]

    def test_empty(self):
        fc = build_rips(DistanceMatrix(0, []), max_dim=2, max_eps=1)

        assert len(fc) == 0

    def test_square(self, square_dm: DistanceMatrix):
        fc = build_rips(square_dm, max_dim=2, max_eps=2)
        edges = [s for s in fc if s.dim == 1]
        triangles = [s for s in fc if s.dim == 2]

        assert sorted(s.value for s in edges) == [1, 1, 1, 1, math.sqrt(2), math.sqrt(2)]
        assert len(triangles) == 4
        assert all(s.value == pytest.approx(math.sqrt(2)) for s in triangles)

    def test_max_eps_truncates(self, square_dm: DistanceMatrix):
        fc = build_rips(square_dm, max_dim=2, max_eps=1.2)

        assert complex_at(fc, 1.2) == (4, 4, 0)

    def test_default_max_eps_is_diameter(self, square_dm: DistanceMatrix):
        fc = build_rips(square_dm)

        assert fc.max_eps == pytest.approx(math.sqrt(2))
        assert len(fc) == 4 + 6 + 4

    def test_invalid_arguments(self, square_dm: DistanceMatrix):
        with pytest.raises(ConfigError):
            build_rips(square_dm, max_dim=-1)
        with pytest.raises(ConfigError):
            build_rips(square_dm, max_eps=0)

    def test_faces_precede_cofaces(self, square_dm: DistanceMatrix):
        fc = build_rips(square_dm, max_dim=2, max_eps=2)

        for index, simplex in enumerate(fc):
            for face in simplex.faces():
                assert fc.position(face) < index


class TestComplexAt:
    def test_square_counts(self, square_dm: DistanceMatrix):
        fc = build_rips(square_dm, max_dim=2, max_eps=2)

        assert complex_at(fc, 0) == (4, 0, 0)
        assert complex_at(fc, 1) == (4, 4, 0)
        assert complex_at(fc, 1.5) == (4, 6, 4)

    def test_negative_eps(self, square_dm: DistanceMatrix):
        with pytest.raises(ConfigError):
            complex_at(build_rips(square_dm), -0.5)

    def test_monotone(self):
        fc = build_rips(pairwise_distances(random_cloud(3, n=9)), max_dim=2)
        scales = sorted({s.value for s in fc})
        counts = [complex_at(fc, eps) for eps in scales]

        for before, after in zip(counts, counts[1:]):
            assert all(a >= b for a, b in zip(after, before))


@pytest.mark.parametrize("seed", range(20))
def test_matches_subset_enumeration(seed: int):
    n = 3 + seed % 8
    max_dim = 1 + seed % 3
    dm = pairwise_distances(random_cloud(seed, n))
    max_eps = 0.3 + 0.05 * seed

    fc = build_rips(dm, max_dim, max_eps)
    expected = rips_simplices(dm.to_square(), max_dim, max_eps)

    assert {s.vertices: s.value for s in fc} == expected
    assert len(fc) == len(expected)
    assert is_face_closed(fc)


@pytest.mark.parametrize("n, max_dim", [(5, 2), (6, 3), (8, 2)])
def test_full_skeleton_size(n: int, max_dim: int):
    fc = build_rips(pairwise_distances(random_cloud(n, n)), max_dim)

    assert len(fc) == sum(math.comb(n, k + 1) for k in range(max_dim + 1))


def test_every_prefix_is_a_complex():
    fc = build_rips(pairwise_distances(random_cloud(7, 7)), max_dim=3)

    for end in range(1, len(fc) + 1):
        assert is_face_closed(fc.simplices[:end])


def test_dump_and_load(square_dm: DistanceMatrix):
    fc = build_rips(square_dm, max_dim=2)

    text = fc.dump()
    loaded = FiltrationComplex.load(text)

    assert text.splitlines()[0] == "0 0.0 0"
    assert text.splitlines()[-1] == "2 1.4142135623730951 1 2 3"
    assert loaded.simplices == fc.simplices


class TestLoad:
    def test_malformed_line(self):
        with pytest.raises(InputError, match="1 x 0 1"):
            FiltrationComplex.load("0 0.0 0\n1 x 0 1\n")

    def test_simplex_errors_keep_their_message(self):
        with pytest.raises(InputError, match="strictly increasing"):
            FiltrationComplex.load("1 1.0 1 0\n")

    def test_wrong_dimension(self):
        with pytest.raises(InputError, match="wrong dimension"):
            FiltrationComplex.load("2 1.0 0 1\n")
