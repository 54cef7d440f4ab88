"""Metric engine: directed/Hausdorff distances, diameters, nets, CSV."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_directed, brute_hausdorff
from ifscert import (
    PointSet,
    diam,
    directed_dist,
    epsilon_net,
    hausdorff,
    load_csv,
    save_csv,
    within_ball,
)
from ifscert.errors import DimensionMismatchError, DomainError


def ps(*rows):
    return PointSet(np.array(rows, dtype=float))


class TestDirectedDist:
    def test_subset_gives_zero(self):
        assert directed_dist(ps([0.0]), ps([0.0], [1.0])) == 0.0

    def test_superset_side(self):
        assert directed_dist(ps([0.0], [1.0]), ps([0.0])) == 1.0

    def test_two_dimensional_example(self):
        A = ps([0.0, 0.0], [2.0, 0.0])
        B = ps([1.0, 0.0], [3.0, 0.0])
        assert directed_dist(A, B) == brute_directed(A.points, B.points) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            directed_dist(ps([0.0]), ps([0.0, 1.0]))

    def test_matches_oracle_on_randoms(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n, m, d = rng.integers(1, 40, size=3)
            A = rng.normal(size=(n, d))
            B = rng.normal(size=(m, d))
            got = directed_dist(PointSet(A), PointSet(B))
            assert got == pytest.approx(brute_directed(A, B), rel=1e-12)


class TestHausdorff:
    def test_identity(self):
        A = ps([0.3], [0.9])
        assert hausdorff(A, A) == 0.0

    def test_singletons(self):
        assert hausdorff(ps([0.0]), ps([1.0])) == 1.0

    def test_shifted_pairs(self):
        assert hausdorff(ps([0.0], [2.0]), ps([1.0], [3.0])) == 1.0

    def test_symmetry_exact(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            A = PointSet(rng.normal(size=(13, 2)))
            B = PointSet(rng.normal(size=(9, 2)))
            assert hausdorff(A, B) == hausdorff(B, A)

    def test_triangle_inequality_within_4_ulps(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            A = PointSet(rng.normal(size=(8, 2)))
            B = PointSet(rng.normal(size=(6, 2)))
            C = PointSet(rng.normal(size=(7, 2)))
            hac = hausdorff(A, C)
            hab = hausdorff(A, B)
            hbc = hausdorff(B, C)
            assert hac <= hab + hbc + 4 * np.spacing(max(hac, hab + hbc))

    def test_union_bounded_by_sup_of_pairs(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            k = int(rng.integers(2, 5))
            Hs = [rng.normal(size=(int(rng.integers(1, 6)), 2)) for _ in range(k)]
            Ks = [rng.normal(size=(int(rng.integers(1, 6)), 2)) for _ in range(k)]
            union_h = hausdorff(PointSet(np.concatenate(Hs)), PointSet(np.concatenate(Ks)))
            sup_pair = max(hausdorff(PointSet(h), PointSet(g)) for h, g in zip(Hs, Ks))
            assert union_h <= sup_pair + 4 * np.spacing(max(union_h, sup_pair))

    def test_dedup_does_not_change_distance(self):
        rng = np.random.default_rng(13)
        A = rng.normal(size=(20, 2))
        B = rng.normal(size=(15, 2))
        dup = PointSet(np.concatenate([A, A[:7]]))
        assert hausdorff(dup, PointSet(B)) == hausdorff(PointSet(A), PointSet(B))
        assert hausdorff(dup.dedup(), PointSet(B)) == hausdorff(PointSet(A), PointSet(B))


class TestAcceleration:
    def test_accelerated_equals_brute_bitwise(self):
        rng = np.random.default_rng(2024)
        for _ in range(12):
            n = int(rng.integers(2, 600))
            m = int(rng.integers(2, 600))
            d = int(rng.integers(1, 4))
            A = PointSet(rng.uniform(size=(n, d)))
            B = PointSet(rng.uniform(size=(m, d)))
            assert directed_dist(A, B, accelerate=True) == directed_dist(
                A, B, accelerate=False
            )

    def test_accelerated_equals_brute_with_ties(self):
        # identical grids and shifted grids produce massive distance ties
        g = np.linspace(0.0, 1.0, 30)
        grid = np.array([[x, y] for x in g for y in g])
        A = PointSet(grid)
        B = PointSet(grid + np.array([0.013, 0.0]))
        assert directed_dist(A, B, accelerate=True) == directed_dist(A, B, accelerate=False)
        assert directed_dist(A, A, accelerate=True) == 0.0


class TestDiam:
    def test_singleton(self):
        assert diam(ps([4.2, -1.0])) == 0.0

    def test_one_dimensional(self):
        assert diam(ps([0.0], [1.0], [3.0])) == 3.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(21)
        pts = rng.uniform(size=(100, 2))
        oracle = 0.0
        for i in range(100):
            for j in range(100):
                oracle = max(oracle, float(np.sqrt(((pts[i] - pts[j]) ** 2).sum())))
        assert diam(PointSet(pts)) == pytest.approx(oracle, rel=1e-12)


class TestWithinBall:
    def test_reflexive_at_zero(self):
        A = ps([0.0, 1.0], [2.0, 0.5])
        assert within_ball(A, A, 0.0)

    def test_outside(self):
        assert not within_ball(ps([2.0]), ps([0.0]), 1.0)

    def test_boundary_is_inclusive(self):
        rng = np.random.default_rng(8)
        A = PointSet(rng.normal(size=(12, 2)))
        C = PointSet(rng.normal(size=(5, 2)))
        r = directed_dist(A, C)
        assert within_ball(A, C, r)
        assert not within_ball(A, C, r - 1e-9)


class TestEpsilonNet:
    def test_large_eps_gives_singleton(self):
        A = ps([0.0], [0.4], [1.0])
        net = epsilon_net(A, eps=diam(A) + 0.1)
        assert len(net.core) == 1
        assert net.radius <= diam(A)

    def test_example_covering(self):
        A = ps([0.0], [0.4], [1.0])
        net = epsilon_net(A, eps=0.5)
        assert net.radius <= 0.5
        assert directed_dist(A, net.core) <= net.radius

    def test_grid_covering(self):
        g = np.linspace(0.0, 1.0, 20)
        A = PointSet(np.array([[x, y] for x in g for y in g]))
        net = epsilon_net(A, eps=0.1)
        assert net.radius <= 0.1
        assert directed_dist(A, net.core) == net.radius

    def test_eps_must_be_positive(self):
        with pytest.raises(DomainError):
            epsilon_net(ps([0.0]), 0.0)


class TestPointSet:
    def test_requires_nonempty(self):
        with pytest.raises(DomainError):
            PointSet(np.empty((0, 2)))

    def test_requires_finite(self):
        with pytest.raises(DomainError):
            PointSet(np.array([[np.nan]]))

    def test_one_dim_vector_promoted(self):
        assert PointSet(np.array([1.0, 2.0, 3.0])).dim == 1

    def test_backing_array_read_only(self):
        A = ps([1.0])
        with pytest.raises(ValueError):
            A.points[0, 0] = 2.0


class TestCsv:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(17)
        A = PointSet(rng.normal(size=(40, 3)))
        path = tmp_path / "cloud.csv"
        save_csv(path, A, {"radius": 1.5e-6, "n": 12})
        loaded, header = load_csv(path)
        assert hausdorff(loaded, A) == 0.0
        assert np.array_equal(loaded.points, A.points)
        assert header["radius"] == "1.5e-06"
        assert float(header["radius"]) == 1.5e-6
        assert header["n"] == "12"

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("# radius=0\n")
        with pytest.raises(DomainError):
            load_csv(path)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(-100, 100), st.floats(-100, 100)),
        min_size=1,
        max_size=12,
    ),
    st.lists(
        st.tuples(st.floats(-100, 100), st.floats(-100, 100)),
        min_size=1,
        max_size=12,
    ),
)
def test_hausdorff_matches_oracle_property(a_rows, b_rows):
    A = PointSet(np.array(a_rows))
    B = PointSet(np.array(b_rows))
    assert hausdorff(A, B) == pytest.approx(
        brute_hausdorff(A.points, B.points), rel=1e-12, abs=1e-12
    )
