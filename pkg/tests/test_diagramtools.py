from __future__ import annotations

import math

import numpy as np
import pytest

from tests.oracles import landscape_sup, matching_distance
from topotext.diagramtools import (
    Landscape,
    bottleneck,
    eval_landscape,
    landscape,
    landscape_distance,
    landscape_norm,
    mean_landscape,
    wasserstein,
)
from topotext.errors import ConfigError, EssentialMismatchWarning, InputError
from topotext.persistence import PersistenceDiagram


def dgm(*pairs, dim: int = 1) -> PersistenceDiagram:
    return PersistenceDiagram(tuple((dim, b, d) for b, d in pairs))


def random_pairs(rng: np.random.Generator, count: int) -> list[tuple[float, float]]:
    births = rng.random(count)
    return [(float(b), float(b + rng.uniform(0.05, 1.0))) for b in births]


class TestBottleneck:
    def test_identical(self):
        d = dgm((0, 2), (1, 3), (0.5, 0.7))

        assert bottleneck(d, d, 1) == 0

    def test_against_empty(self):
        assert bottleneck(dgm((0, 2)), dgm(), 1) == 1

    def test_two_points(self):
        assert bottleneck(dgm((0, 2)), dgm((0, 4)), 1) == 2

    def test_both_empty(self):
        assert bottleneck(dgm(), dgm(), 1) == 0

    def test_other_dimensions_ignored(self):
        d1 = PersistenceDiagram(((0, 0.0, 5.0), (1, 0.0, 2.0)))
        d2 = PersistenceDiagram(((1, 0.0, 2.0),))

        assert bottleneck(d1, d2, 1) == 0

    def test_essential_bars_matched_by_birth(self):
        d1 = dgm((0, math.inf), (0, 1))
        d2 = dgm((0.25, math.inf), (0, 1))

        assert bottleneck(d1, d2, 1) == 0.25

    def test_essential_count_mismatch(self):
        with pytest.warns(EssentialMismatchWarning):
            assert bottleneck(dgm((0, math.inf)), dgm(), 1) == math.inf

    def test_drop_essential(self):
        d1 = dgm((0, math.inf), (0, 2), dim=0)
        d2 = dgm((0, 4), dim=0)

        assert bottleneck(d1, d2, 0, drop_essential=True) == 2


class TestWasserstein:
    def test_identical(self):
        d = dgm((0, 2), (1, 3))

        assert wasserstein(d, d, 1) == 0

    def test_against_empty(self):
        assert wasserstein(dgm((0, 2)), dgm(), 1, p=1) == 1

    def test_two_points(self):
        assert wasserstein(dgm((0, 2)), dgm((0, 4)), 1, p=1) == 2

    def test_p2_sums_squares(self):
        d1 = dgm((0, 2), (5, 7))

        assert wasserstein(d1, dgm(), 1, p=2) == pytest.approx(math.sqrt(2))

    def test_invalid_p(self):
        with pytest.raises(ConfigError):
            wasserstein(dgm(), dgm(), 1, p=0.5)
        with pytest.raises(ConfigError):
            wasserstein(dgm(), dgm(), 1, p=math.inf)

    def test_essential_count_mismatch(self):
        with pytest.warns(EssentialMismatchWarning):
            assert wasserstein(dgm((0, math.inf)), dgm(), 1) == math.inf


@pytest.mark.parametrize("seed", range(200))
def test_distances_match_exhaustive_matching(seed: int):
    rng = np.random.default_rng(seed)
    a = random_pairs(rng, int(rng.integers(0, 6)))
    b = random_pairs(rng, int(rng.integers(0, 6)))
    d1, d2 = dgm(*a), dgm(*b)

    expected = matching_distance(a, b, math.inf)
    assert bottleneck(d1, d2, 1) == pytest.approx(expected, abs=1e-9)
    for p in (1, 2):
        expected = matching_distance(a, b, p)
        assert wasserstein(d1, d2, 1, p) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("seed", range(30))
def test_metric_axioms(seed: int):
    rng = np.random.default_rng(1000 + seed)
    d1, d2, d3 = (dgm(*random_pairs(rng, int(rng.integers(1, 7)))) for _ in range(3))

    for distance in (bottleneck, wasserstein):
        assert distance(d1, d1, 1) == 0
        assert distance(d1, d2, 1) >= 0
        assert distance(d1, d2, 1) == pytest.approx(distance(d2, d1, 1), abs=1e-12)
        assert distance(d1, d3, 1) <= distance(d1, d2, 1) + distance(d2, d3, 1) + 1e-9
    assert bottleneck(d1, d2, 1) <= wasserstein(d1, d2, 1, p=1) + 1e-12


class TestLandscape:
    def test_single_tent(self):
        l = landscape(dgm((0, 2)), 1)

        assert eval_landscape(l, 1, 1) == 1
        assert eval_landscape(l, 1, 0) == 0
        assert eval_landscape(l, 1, 0.5) == 0.5
        assert eval_landscape(l, 1, -5) == 0
        assert len(l.critical_points(2)) == 0

    def test_empty(self):
        l = landscape(dgm(), 1, k_max=3)

        assert l.k_max == 3
        assert all(eval_landscape(l, k, 0.5) == 0 for k in (1, 2, 3))

    def test_second_level(self):
        l = landscape(dgm((0, 2), (1, 3)), 1)

        assert eval_landscape(l, 2, 1.5) == pytest.approx(0.5)
        assert eval_landscape(l, 1, 1.5) == pytest.approx(0.5)
        assert eval_landscape(l, 1, 2) == pytest.approx(1)

    def test_critical_points(self):
        l = landscape(dgm((0, 2)), 1)

        assert l.critical_points(1).tolist() == [[0, 0], [1, 1], [2, 0]]
        assert l.domain == (0, 2)

    def test_high_level_is_zero(self):
        assert eval_landscape(landscape(dgm((0, 2)), 1), 999, 1) == 0

    def test_invalid_level(self):
        with pytest.raises(ConfigError):
            eval_landscape(landscape(dgm((0, 2)), 1), 0, 1)
        with pytest.raises(ConfigError):
            landscape(dgm((0, 2)), 1, k_max=0)

    def test_infinite_bars_dropped_without_cap(self):
        l = landscape(dgm((0, math.inf)), 1)

        assert eval_landscape(l, 1, 1) == 0

    def test_cap(self):
        l = landscape(dgm((0, math.inf)), 1, cap=4)

        assert eval_landscape(l, 1, 2) == 2


@pytest.mark.parametrize("seed", range(50))
def test_landscape_matches_sup_formulation(seed: int):
    rng = np.random.default_rng(seed)
    pairs = random_pairs(rng, int(rng.integers(1, 7)))
    k_max = 4
    l = landscape(dgm(*pairs), 1, k_max)

    for t in np.linspace(-0.2, 2.2, 100):
        values = [eval_landscape(l, k, t) for k in range(1, k_max + 1)]
        for k, value in enumerate(values, start=1):
            assert value == pytest.approx(landscape_sup(pairs, k, t), abs=1e-9)
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
        assert values[-1] >= 0


@pytest.mark.parametrize("seed", range(10))
def test_landscape_is_one_lipschitz(seed: int):
    rng = np.random.default_rng(seed)
    l = landscape(dgm(*random_pairs(rng, 5)), 1, 3)

    for k in range(1, 4):
        points = l.critical_points(k)
        if len(points) > 1:
            slopes = np.diff(points[:, 1]) / np.diff(points[:, 0])
            assert np.all(np.abs(slopes) <= 1 + 1e-9)


class TestMeanLandscape:
    def test_mean_of_copies(self):
        l = landscape(dgm((0, 2), (1, 3)), 1)

        mean = mean_landscape([l, l])

        for k in range(1, l.k_max + 1):
            assert np.array_equal(mean.critical_points(k), l.critical_points(k))

    def test_mean_with_zero(self):
        mean = mean_landscape([landscape(dgm((0, 2)), 1), landscape(dgm(), 1)])

        assert eval_landscape(mean, 1, 1) == 0.5

    def test_disjoint_tents(self):
        mean = mean_landscape([landscape(dgm((0, 2)), 1), landscape(dgm((2, 4)), 1)])

        assert eval_landscape(mean, 1, 1) == 0.5
        assert eval_landscape(mean, 1, 3) == 0.5

    def test_different_depths(self):
        mean = mean_landscape(
            [
                landscape(dgm((0, 2)), 1, k_max=1),
                landscape(dgm((0, 2), (0, 2)), 1, k_max=2),
            ]
        )

        assert mean.k_max == 2
        assert eval_landscape(mean, 2, 1) == 0.5

    def test_empty_list(self):
        with pytest.raises(InputError):
            mean_landscape([])


class TestLandscapeDistance:
    def test_norms_of_a_tent(self):
        l = landscape(dgm((0, 2)), 1)

        assert landscape_norm(l, 1) == pytest.approx(1.0)
        assert landscape_norm(l, 2) == pytest.approx(math.sqrt(2 / 3))
        assert landscape_norm(l, math.inf) == pytest.approx(1.0)

    def test_distance_to_itself(self):
        l = landscape(dgm((0, 2), (1, 3)), 1)

        assert landscape_distance(l, l, 2) == 0

    def test_sign_change(self):
        left, right = landscape(dgm((0, 2)), 1), landscape(dgm((1, 3)), 1)

        assert landscape_distance(left, right, 1) == pytest.approx(1.5)

    def test_unsupported_p(self):
        with pytest.raises(ConfigError):
            landscape_distance(Landscape(()), Landscape(()), 3)
