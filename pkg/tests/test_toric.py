import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valkit.complex import BUILTIN_FANS, Fan, fan_p1, fan_p1xp1, fan_p2, orthant, stellar_subdivide
from valkit.errors import ComplexError
from valkit.order import Antichain, is_coherent, min_cw, project_family
from valkit.series import MonomialSeries, invert_unit, mul
from valkit.toric import (
    ConewiseLinear,
    choose_parameters,
    character_vars,
    conewise_to_family,
    convex_split,
    initial_ell,
    local_expand,
    polytope_vertices,
    random_coherent_family,
    shift_factor,
    standard_convex_function,
    to_local,
    toric_construct,
    verify,
    wall_margins,
)
from valkit.valuation import TropicalFunction, trop_eval


def p1_family(plus=2, minus=1):
    return project_family({"1": Antichain(("1",), ((plus,),)), "-1": Antichain(("-1",), ((minus,),))}, fan_p1())


def cross_equal(a, b):
    (n1, d1), (n2, d2) = a, b
    return mul(n1, d2) == mul(n2, d1)


class TestConstruct:
    def test_p1_closed_form(self):
        # lambda_1 t^2 / (1 + t)^4 + lambda_2 t^-1 / (1 + t^-1)^4 with lambda = (1, 1)
        t = character_vars(1)
        spec_num = MonomialSeries(t, {(2,): 1, (3,): 1})
        spec_den = MonomialSeries(t, {(0,): 1, (1,): 4, (2,): 6, (3,): 4, (4,): 1})
        for mode in ("polytope", "dual_simplex"):
            c = toric_construct(fan_p1(), p1_family(), 4, {"1": 1, "-1": 1}, mode)
            assert cross_equal(c.as_fraction(), (spec_num, spec_den))

    def test_zero_family_is_a_unit(self):
        fan = fan_p2()
        fam = project_family({f: min_cw([(0, 0)], fan.face(f).rays) for f in fan.facet_ids()}, fan)
        assert initial_ell(fan, fam) == 3
        res = choose_parameters(fan, fam)
        assert res.passed and res.ell == 3 and len(res.attempts) == 1

    def test_incomplete_fan(self):
        fan = Fan(1, ((1,),), ((0,),))
        fam = project_family({"1": Antichain(("1",), ((0,),))}, fan)
        with pytest.raises(ComplexError):
            toric_construct(fan, fam, 2, {"1": 1})

    def test_incoherent_family(self):
        fan = fan_p2()
        fam = dict(project_family({f: min_cw([(1, 1)], fan.face(f).rays) for f in fan.facet_ids()}, fan))
        fam["0,1"] = Antichain(("0,1",), ((0,),))
        with pytest.raises(ValueError):
            toric_construct(fan, fam, 6, {f: 1 for f in fan.facet_ids()})

    def test_ample_polytope(self):
        verts = polytope_vertices(fan_p2())
        assert len(set(verts.values())) == 3


class TestExpansion:
    c = toric_construct(fan_p1(), p1_family(), 4, {"1": 1, "-1": 1})

    def test_p1_local_expansions(self):
        plus = local_expand(self.c, "1", (6,))
        assert plus.coefficient((2,)) == 1 and min(plus.support()) == (2,)
        minus = local_expand(self.c, "-1", (6,))
        assert min(minus.support()) == (1,)

    def test_empty_box(self):
        assert local_expand(self.c, "1", (0,)).is_zero()

    @pytest.mark.parametrize("name", ["P2", "P1xP1", "BlP2"])
    def test_matches_direct_inversion(self, name):
        # the Euler recurrence route against N / z^gamma times a directly inverted unit
        fan = BUILTIN_FANS[name]()
        fam = random_coherent_family(fan, random.Random(name))
        c = toric_construct(fan, fam, initial_ell(fan, fam), {f: i + 2 for i, f in enumerate(fan.facet_ids())})
        num, den = c.as_fraction()
        box = (4, 4)
        for tau in fan.facet_ids():
            gamma, unit = shift_factor(to_local(den, fan, tau))
            shifted = to_local(num, fan, tau).shift(tuple(-g for g in gamma)).as_polynomial()
            direct = mul(shifted, invert_unit(unit, box)).truncate(box)
            assert local_expand(c, tau, box) == direct


class TestVerify:
    def test_p1_fixture(self):
        rep = verify(toric_construct(fan_p1(), p1_family(), 4, {"1": 1, "-1": 1}), p1_family())
        assert rep.passed and len(rep.faces) == 3 and rep.output_coherent
        assert all(f.crosscheck_total == 32 == f.crosscheck_agree for f in rep.faces.values() if f.crosscheck_total)

    def test_ell_too_small(self):
        rep = verify(toric_construct(fan_p1(), p1_family(), 2, {"1": 1, "-1": 1}), p1_family())
        assert not rep.passed
        assert rep.faces["1"].computed.elements == ((1,),)
        assert "1" in rep.failing_faces()

    def test_cancelling_lambda(self):
        fam = p1_family(2, 2)
        rep = verify(toric_construct(fan_p1(), fam, 4, {"1": 1, "-1": -1}), fam)
        assert not rep.passed
        res = choose_parameters(fan_p1(), fam, ell=4, lam={"1": 1, "-1": -1})
        assert res.passed and res.attempts[0]["status"] == "fail"

    def test_choose_parameters_p1(self):
        res = choose_parameters(fan_p1(), p1_family())
        assert res.passed and res.ell == 6 and len(res.attempts) == 1

    def test_fixed_ell_failure_is_reported(self):
        res = choose_parameters(fan_p1(), p1_family(), ell=2, max_rounds=1)
        assert res.status == "fail" and res.ell == 2

    @pytest.mark.parametrize("name", list(BUILTIN_FANS))
    def test_pipeline(self, name):
        fan = BUILTIN_FANS[name]()
        rng = random.Random(f"pipeline-{name}")
        for _ in range(2):
            fam = random_coherent_family(fan, rng)
            res = choose_parameters(fan, fam, seed=rng.randrange(2**32))
            assert res.passed, res.attempts
            computed = project_family({f: res.report.faces[f].computed for f in fan.facet_ids()}, fan)
            assert is_coherent(computed, fan)[0]
            assert dict(computed) == dict(fam)

    @settings(max_examples=30)
    @given(st.randoms(use_true_random=False), st.sampled_from(["P1", "P2", "P1xP1", "BlP2"]))
    def test_random_families_are_coherent(self, rnd, name):
        fan = BUILTIN_FANS[name]()
        fam = random_coherent_family(fan, rnd)
        assert is_coherent(fam, fan)[0]
        assert all(len(a) <= 3 and a.max_coordinate() <= 3 for a in fam.values())


DIAG = stellar_subdivide(stellar_subdivide(fan_p1xp1(), (1, 1)), (-1, -1))


def rational_points(rnd, n):
    return [(Fraction(rnd.randint(-20, 20), rnd.randint(1, 5)), Fraction(rnd.randint(-20, 20), rnd.randint(1, 5)))
            for _ in range(n)]


class TestConvexSplit:
    G = standard_convex_function(fan_p1xp1(), DIAG)

    def test_standard_function(self):
        assert all(m >= 1 for *_, m in wall_margins(self.G, fan_p1xp1()))
        quad = stellar_subdivide(orthant(2), (1, 1))
        g = standard_convex_function(orthant(2), quad)
        assert {r: g.ray_value(r) for r in ("1,0", "0,1", "1,1")} == {"1,0": 1, "0,1": 1, "1,1": 3}
        assert g.pieces == {"1,0|1,1": (1, 2), "0,1|1,1": (2, 1)}

    def test_linear_f(self):
        F = ConewiseLinear(DIAG, {f: (Fraction(1), Fraction(0)) for f in DIAG.facet_ids()})
        ell, F1, F2 = convex_split(F, self.G, fan_p1xp1())
        assert ell == 1 and F1 == F + self.G

    def test_minus_g(self):
        ell, F1, F2 = convex_split(self.G.scale(-1), self.G, fan_p1xp1())
        assert ell == 2 and F1 == self.G

    def test_max(self):
        rays = [DIAG.face(f).rays[0] for f in DIAG.face_ids() if len(DIAG.face(f).rays) == 1]
        F = ConewiseLinear.from_ray_values(DIAG, {r: max(map(int, r.split(","))) for r in rays})
        # max(x, y) is concave-across the diagonal walls, so it is not a min of its pieces
        assert any(m < 0 for *_, m in wall_margins(F, fan_p1xp1()))
        ell, F1, F2 = convex_split(F, self.G, fan_p1xp1())
        assert ell == 2
        assert all(m > 0 for *_, m in wall_margins(F1, fan_p1xp1()))

    def test_not_strictly_convex(self):
        lin = ConewiseLinear(DIAG, {f: (Fraction(1), Fraction(0)) for f in DIAG.facet_ids()})
        with pytest.raises(ValueError):
            convex_split(self.G, lin, fan_p1xp1())

    @settings(max_examples=40)
    @given(st.randoms(use_true_random=False))
    def test_split_identity(self, rnd):
        rays = [DIAG.face(f).rays[0] for f in DIAG.face_ids() if len(DIAG.face(f).rays) == 1]
        F = ConewiseLinear.from_ray_values(DIAG, {r: rnd.randint(-6, 6) for r in rays})
        ell, F1, F2 = convex_split(F, self.G, fan_p1xp1())
        for x in rational_points(rnd, 25):
            assert F1(x) - F2(x) == F(x)
        for H in (F1, F2):
            assert all(m > 0 for *_, m in wall_margins(H, fan_p1xp1()))
            fam = conewise_to_family(H, fan_p1xp1())
            T = TropicalFunction(fan_p1xp1(), fam)
            for x in rational_points(rnd, 10):
                cf = fan_p1xp1().facet_containing(x)
                coords = fan_p1xp1().cone_coordinates(cf, x)
                assert trop_eval(T, cf, coords) == H(x)
