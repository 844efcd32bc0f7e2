import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize
from scipy.spatial import ConvexHull

from valkit.complex import TangentPoint, WeightMatrix
from valkit.errors import DimensionError
from valkit.okounkov import (
    ConvexBody,
    GradedSections,
    box_body,
    bump_grid,
    hausdorff_distance,
    lattice_points,
    okounkov_sample,
    sq_distance_to_body,
    sqrt_bracket,
    variation_experiment,
    weak_distance,
)

SQUARE = ((0, 0), (1, 0), (0, 1), (1, 1))
SIMPLEX = ((0, 0), (1, 0), (0, 1))
FLAG = TangentPoint("s", ("z1", "z2"), (1, 0), ((0, 1),))

points_2d = st.lists(st.tuples(st.fractions(-4, 4, max_denominator=3), st.fractions(-4, 4, max_denominator=3)),
                     min_size=1, max_size=12)


def float_sq_distance(p, body):
    """Oracle: minimise |p - V lambda|^2 over the probability simplex with SLSQP."""
    v = np.array([[float(c) for c in q] for q in body.vertices]).T
    x = np.array([float(c) for c in p])
    m = v.shape[1]
    res = minimize(lambda lam: float(np.sum((v @ lam - x) ** 2)), np.full(m, 1.0 / m),
                   jac=lambda lam: 2 * v.T @ (v @ lam - x), method="SLSQP", bounds=[(0, 1)] * m,
                   constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1, "jac": lambda lam: np.ones(m)}],
                   options={"ftol": 1e-14, "maxiter": 500})
    return res.fun


class TestHull:
    @given(points_2d)
    def test_against_scipy(self, pts):
        body = ConvexBody(2, tuple(pts))
        arr = np.array([[float(c) for c in p] for p in body.points])
        if body.full_dimensional and len(body.points) >= 3:
            ref = {tuple(arr[i]) for i in ConvexHull(arr).vertices}
            assert {tuple(float(c) for c in v) for v in body.vertices} == ref
        for p in body.points:
            assert body.contains(p)

    def test_three_dimensional(self):
        cube = box_body((0, 0, 0), (1, 1, 1))
        inner = ConvexBody(3, cube.points + ((Fraction(1, 2),) * 3,))
        assert set(inner.vertices) == set(cube.vertices)

    def test_degenerate(self):
        seg = ConvexBody(2, ((0, 0), (1, 1), (2, 2)))
        assert not seg.full_dimensional and set(seg.vertices) == {(0, 0), (2, 2)}


class TestLatticePoints:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_square_and_simplex(self, n):
        assert sorted(lattice_points(SQUARE, n, 2)) == [(i, j) for i in range(n + 1) for j in range(n + 1)]
        assert sorted(lattice_points(SIMPLEX, n, 2)) == [(i, j) for i in range(n + 1) for j in range(n + 1 - i)]

    def test_rectangle(self):
        assert len(lattice_points(((0, 0), (2, 0), (0, 1), (2, 1)), 3, 2)) == 7 * 4


class TestSample:
    def test_square_flag(self):
        limit = ConvexBody(2, SQUARE)
        for n in range(1, 6):
            assert okounkov_sample(FLAG, GradedSections(2, polytope=SQUARE), 5, n).same_hull(limit)

    def test_single_monomial(self):
        sec = GradedSections(2, explicit={1: ((2, 3),)})
        body = okounkov_sample(FLAG, sec, 1)
        assert body.vertices == ((2, 3),)

    def test_diagonal_scaling(self):
        sec = GradedSections(2, polytope=SIMPLEX)
        w = WeightMatrix("s", ("z1", "z2"), ((2, 0), (0, 3)))
        body = okounkov_sample(w, sec, 4)
        assert set(body.vertices) == {(0, 0), (2, 0), (0, 3)}

    def test_rank_mismatch(self):
        with pytest.raises(DimensionError):
            okounkov_sample(WeightMatrix("s", ("z1", "z2"), ((1,), (1,))), GradedSections(2, polytope=SQUARE), 2)


class TestDistances:
    def test_examples(self):
        sq = box_body((0, 0), (1, 1))
        assert hausdorff_distance(sq, sq).squared == 0
        d = hausdorff_distance(sq, box_body((0, 0), (2, 2)))
        assert d.squared == 2 and d.width <= Fraction(1, 10**9)
        assert d.lower <= math.sqrt(2) <= d.upper
        p, q = ConvexBody(2, ((0, 0),)), ConvexBody(2, ((3, 4),))
        assert hausdorff_distance(p, q).squared == 25

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            hausdorff_distance(ConvexBody(1, ((0,),)), ConvexBody(2, ((0, 0),)))

    @given(st.fractions(0, 1000, max_denominator=97))
    def test_sqrt_bracket(self, s):
        lo, hi = sqrt_bracket(s, Fraction(1, 10**6))
        assert lo * lo <= s <= hi * hi and hi - lo <= Fraction(1, 10**6)

    @given(points_2d, st.tuples(st.fractions(-5, 5, max_denominator=3), st.fractions(-5, 5, max_denominator=3)))
    def test_point_distance_oracle(self, pts, p):
        body = ConvexBody(2, tuple(pts))
        assert abs(float(sq_distance_to_body(p, body)) - float_sq_distance(p, body)) < 1e-4

    @settings(max_examples=60)
    @given(points_2d, points_2d, points_2d)
    def test_metric_axioms(self, a, b, c):
        A, B, C = (ConvexBody(2, tuple(x)) for x in (a, b, c))
        ab, ba = hausdorff_distance(A, B), hausdorff_distance(B, A)
        assert ab.squared == ba.squared
        assert (ab.squared == 0) == A.same_hull(B)
        ac, cb = hausdorff_distance(A, C), hausdorff_distance(C, B)
        assert ab.lower <= ac.upper + cb.upper


class TestWeak:
    bumps = bump_grid((0, 0), (2, 2))

    def test_identical(self):
        a = box_body((0, 0), (1, 1))
        for est in weak_distance(a, a, self.bumps, 20000, seed=1, box=((0, 0), (2, 2))):
            assert est.statistic <= 3 * est.stderr + 1e-12

    def test_shrinking_gap(self):
        base = box_body((0, 0), (1, 1))
        stats = []
        for m in (1, 4, 16):
            other = box_body((0, 0), (1 + Fraction(1, m), 1 + Fraction(1, m)))
            est = weak_distance(base, other, self.bumps, 50000, seed=2, box=((0, 0), (2, 2)))
            stats.append(max(e.statistic for e in est))
        assert stats[0] > stats[1] > stats[2]

    def test_disjoint(self):
        a, b = box_body((0, 0), (1, 1)), box_body((1, 1), (2, 2))
        est = weak_distance(a, b, [bump_grid((0, 0), (1, 1), 1)[0]], 50000, seed=3, box=((0, 0), (2, 2)))
        assert est[0].statistic > 10 * est[0].stderr

    def test_deterministic(self):
        a, b = box_body((0, 0), (1, 1)), box_body((0, 0), (2, 1))
        assert weak_distance(a, b, self.bumps, 1000, seed=9) == weak_distance(a, b, self.bumps, 1000, seed=9)

    def test_degenerate_box(self):
        p = ConvexBody(2, ((0, 0),))
        with pytest.raises(ValueError):
            weak_distance(p, p, self.bumps, 10)


class TestVariation:
    sec = GradedSections(2, polytope=SQUARE)

    def test_constant_path(self):
        rows = variation_experiment([FLAG] * 3, self.sec, 3)
        assert all(r.to_limit.squared == 0 for r in rows)
        assert all(r.to_previous.squared == 0 for r in rows[1:])

    def test_converging_path(self):
        path = [TangentPoint("s", ("z1", "z2"), (1, Fraction(t, 4)), ((0, 1),)) for t in range(4, -1, -1)]
        rows = variation_experiment(path, self.sec, 4)
        dist = [r.to_limit.squared for r in rows]
        assert dist == sorted(dist, reverse=True) and dist[-1] == 0

    def test_wall_crossing(self):
        # the second row turns through the direction (1, 0): the body moves continuously
        path = [WeightMatrix("s", ("z1", "z2"), ((1, Fraction(t, 4)), (0, 1))) for t in range(-2, 3)]
        rows = variation_experiment(path, self.sec, 4)
        assert all(r.to_previous.squared <= Fraction(1, 16) for r in rows[1:])

    def test_mixed_ranks(self):
        with pytest.raises(DimensionError):
            variation_experiment([FLAG, WeightMatrix("s", ("z1", "z2"), ((1,), (1,)))], self.sec, 2)
