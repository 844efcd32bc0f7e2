from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import lex_columns, small_rationals, weight_columns
from valkit.complex import (
    Fan,
    OpenBox,
    TangentPoint,
    WeightMatrix,
    build_dual_complex,
    duality_to_tangent,
    duality_to_weights,
    fan_blp2,
    fan_p1,
    fan_p1xp1,
    fan_p2,
    find_supporting_cone,
    orthant,
    quadrant_complex,
    sigma_open_contains,
    stellar_subdivide,
    supporting_cones,
    tangent_membership,
)
from valkit.errors import ComplexError, IndexMismatchError, InvalidWeightError

EPS = Fraction(1, 100)


def curve_in_orthant(x, ws):
    """Oracle: evaluate x + eps w_1 + eps^2 w_2 + ... at a small rational eps.

    Entries have denominators <= 4 and size <= 5, so the sign of every
    coordinate at eps = 1/100 is decided by its first nonzero term.
    """
    pt = [Fraction(c) for c in x]
    for j, w in enumerate(ws, start=1):
        pt = [p + EPS**j * c for p, c in zip(pt, w)]
    return all(p >= 0 for p in pt)


class TestDualComplex:
    def test_quadrant(self):
        cx = quadrant_complex()
        assert cx.face_ids() == ["0:", "s:z1+z2", "z1:z1", "z2:z2"]
        assert cx.maximal_faces() == ["s:z1+z2"]

    def test_parallel_faces(self):
        cx = build_dual_complex(["D1", "D2"], [{"rays": ["D1", "D2"], "label": "p"}, {"rays": ["D1", "D2"], "label": "q"}])
        assert len(cx) == 5
        assert cx.face("p:D1+D2").rays == cx.face("q:D1+D2").rays

    def test_no_strata(self):
        cx = build_dual_complex(["a", "b", "c"])
        assert sorted(cx.face_ids()) == ["0:", "a:a", "b:b", "c:c"]

    def test_unknown_component(self):
        with pytest.raises(ComplexError):
            build_dual_complex(["a", "b"], [{"rays": ["a", "x"], "label": "s"}])

    def test_face_closure_violation(self):
        # a triple point whose pairwise intersections were not declared
        with pytest.raises(ComplexError):
            build_dual_complex(["a", "b", "c"], [{"rays": ["a", "b", "c"], "label": "t"}])

    def test_parallel_boundary_hint(self):
        strata = [{"rays": ["a", "b"], "label": "p"}, {"rays": ["a", "b"], "label": "q"},
                  {"rays": ["b", "c"], "label": "r"}, {"rays": ["a", "c"], "label": "u"},
                  {"rays": ["a", "b", "c"], "label": "t", "faces": ["q", "r", "u"]}]
        cx = build_dual_complex(["a", "b", "c"], strata)
        assert cx.is_face_of("q:a+b", "t:a+b+c")
        assert not cx.is_face_of("p:a+b", "t:a+b+c")
        cx.check_axioms()


class TestFans:
    def test_builtin_fans(self):
        for fan, n in ((fan_p1(), 2), (fan_p2(), 3), (fan_p1xp1(), 4), (fan_blp2(), 4)):
            assert fan.is_unimodular and fan.is_complete()
            assert len(fan.facet_ids()) == n
            fan.complex.check_axioms()

    def test_subdivide_quadrant(self):
        fine = stellar_subdivide(orthant(2), (1, 1))
        assert fine.facet_ids() == ["0,1|1,1", "1,0|1,1"]
        assert fine.refines(orthant(2))

    def test_subdivide_existing_ray(self):
        assert stellar_subdivide(orthant(2), (1, 0)) == orthant(2)

    def test_subdivide_p2(self):
        assert len(stellar_subdivide(fan_p2(), (1, 1)).facet_ids()) == 4

    def test_subdivide_outside(self):
        with pytest.raises(ComplexError):
            stellar_subdivide(orthant(2), (-1, 1))

    def test_non_unimodular_result(self):
        with pytest.raises(ComplexError):
            stellar_subdivide(stellar_subdivide(orthant(2), (1, 1)), (3, 2))

    def test_incomplete(self):
        assert not orthant(2).is_complete()
        assert not Fan(1, ((1,),), ((0,),)).is_complete()

    def test_dual_basis(self):
        fan = fan_p2()
        for fid in fan.facet_ids():
            vecs = fan.face_vectors(fid)
            for i, m in enumerate(fan.dual_basis(fid)):
                assert [sum(a * b for a, b in zip(m, v)) for v in vecs] == [int(i == j) for j in range(2)]


class TestTangentMembership:
    def test_examples(self):
        assert tangent_membership((1, 0), [(0, 1)])
        assert not tangent_membership((0, 0), [(-1, 0)])
        assert tangent_membership((0, 1), [(0, -1), (1, 0)])

    def test_index_mismatch(self):
        with pytest.raises(IndexMismatchError):
            tangent_membership((1, 0), [(1,)])

    @given(st.integers(1, 4).flatmap(lambda n: st.tuples(
        st.tuples(*[small_rationals] * n), st.lists(st.tuples(*[small_rationals] * n), max_size=3))))
    def test_matches_epsilon_curve(self, data):
        x, ws = data
        assert tangent_membership(x, ws) == curve_in_orthant(x, ws)

    @given(st.lists(small_rationals, min_size=1, max_size=4))
    def test_zero_directions(self, x):
        zeros = [tuple(0 for _ in x)] * 2
        assert tangent_membership(x, zeros) == all(c >= 0 for c in x)


class TestDuality:
    def test_example(self):
        p = duality_to_tangent(WeightMatrix("s", ("x", "y"), ((1, 0), (0, 1))))
        assert p.x == (1, 0) and p.ws == ((0, 1),)

    def test_rank_one(self):
        p = duality_to_tangent(WeightMatrix("s", ("x", "y"), ((2,), (3,))))
        assert p.x == (2, 3) and p.ws == ()

    def test_negative_column(self):
        with pytest.raises(InvalidWeightError):
            WeightMatrix("s", ("x", "y"), ((0, -1), (1, 0)))
        with pytest.raises(InvalidWeightError):
            duality_to_weights(TangentPoint("s", ("x",), (0,), ((-1,),)))

    @given(weight_columns())
    def test_round_trip(self, data):
        n, k, cols = data
        w = WeightMatrix("s", tuple(f"z{i}" for i in range(n)), cols)
        p = duality_to_tangent(w)
        assert tangent_membership(p.x, p.ws)
        assert duality_to_weights(p) == w
        assert duality_to_tangent(duality_to_weights(p)) == p


class TestSupportingCone:
    fine = stellar_subdivide(orthant(2), (1, 1))

    def test_examples(self):
        fid, local = find_supporting_cone(self.fine, TangentPoint("s", ("x", "y"), (1, 1), ((1, 2),)))
        assert fid == "0,1|1,1"
        assert tangent_membership(local.x, local.ws)
        fid, _ = find_supporting_cone(self.fine, TangentPoint("s", ("x", "y"), (1, 1), ((1, 1),)))
        assert fid == "1,1"

    def test_interior_point(self):
        fid, _ = find_supporting_cone(self.fine, TangentPoint("s", ("x", "y"), (3, 1), ((5, -7),)))
        assert fid == "1,0|1,1"

    def test_base_fan_coordinates(self):
        # the same point given in the coordinates of a P^2 facet
        p2 = fan_p2()
        fine = stellar_subdivide(p2, (1, 1))
        fid, local = find_supporting_cone(fine, TangentPoint("0,1|1,0", ("0,1", "1,0"), (1, 1), ((2, 1),)), base=p2)
        assert fid == "0,1|1,1"

    @given(st.integers(2, 3).flatmap(lambda d: st.tuples(
        st.just(d), st.lists(lex_columns(3), min_size=d, max_size=d), st.randoms())))
    def test_invariance(self, data):
        d, cols, rnd = data
        x = tuple(c[0] for c in cols)
        ws = [tuple(c[j] for c in cols) for j in (1, 2)]
        tower = [orthant(d)]
        for _ in range(2):
            fid = rnd.choice(tower[-1].facet_ids())
            vecs = rnd.sample(list(tower[-1].face_vectors(fid)), 2)
            tower.append(stellar_subdivide(tower[-1], tuple(a + b for a, b in zip(*vecs))))
        hits = supporting_cones(tower[-1], x, ws)
        assert hits
        fid, local = find_supporting_cone(tower[-1], TangentPoint("s", tuple(map(str, range(d))), x, ws))
        assert fid in hits and tangent_membership(local.x, local.ws)

    @given(st.lists(st.tuples(small_rationals, small_rationals), min_size=3, max_size=3))
    def test_membership_equivalence(self, vecs):
        fine = stellar_subdivide(stellar_subdivide(orthant(2), (1, 1)), (2, 1))
        x, w1, w2 = vecs
        assert tangent_membership(x, [w1, w2]) == bool(supporting_cones(fine, x, [w1, w2]))


class TestOpens:
    fine = stellar_subdivide(orthant(2), (1, 1))

    def test_everything(self):
        big = {fid: [((-100,) * 4, (100,) * 4)] for fid in self.fine.facet_ids()}
        assert sigma_open_contains(self.fine, big, (1, 1), [(1, 2)])

    def test_empty(self):
        assert not sigma_open_contains(self.fine, {}, (1, 1), [(1, 2)])

    def test_flanking_cone(self):
        # the point sits on the new ray; its curve enters 0,1|1,1 only
        box = {"0,1|1,1": [((-1, 0, -2, -2), (1, 2, 2, 2))]}
        assert sigma_open_contains(self.fine, box, (1, 1), [(1, 2)])
        box = {"1,0|1,1": [((-1, 0, -2, -2), (1, 2, 2, 2))]}
        assert not sigma_open_contains(self.fine, box, (1, 1), [(1, 2)])

    def test_malformed_box(self):
        with pytest.raises(ValueError):
            OpenBox((0, 1), (1, 1))
