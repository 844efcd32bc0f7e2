from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from strategies import exponents, polynomials
from valkit.errors import EmptyAntichainError, IndexMismatchError, NotAUnitError
from valkit.order import antichain_project, antichain_sum, antichain_union_min, min_cw
from valkit.series import (
    AdmissibleExpansion,
    MonomialSeries,
    RationalFunctionRep,
    add,
    invert_unit,
    mul,
    mul_truncated,
    shift_factor,
    support_min,
    unit_power,
)

Z1 = ("z1",)
Z12 = ("z1", "z2")


def series(vars, **kw):
    return MonomialSeries(vars, kw.pop("terms"), **kw)


@st.composite
def units(draw, n):
    f = draw(polynomials(n, max_terms=4, max_exp=2))
    c = draw(st.sampled_from([1, 2, -3, Fraction(1, 2)]))
    return add(f, MonomialSeries.constant(f.vars, c - f.constant_term()))


class TestSupportMin:
    def test_examples(self):
        assert set(support_min(series(Z12, terms={(2, 1): 1, (5, 0): 1}))) == {(2, 1), (5, 0)}
        assert support_min(series(Z12, terms={(0, 0): 1, (3, 0): 1})).elements == ((0, 0),)
        assert support_min(series(Z12, terms={(2, 1): 1, (2, 3): 1})).elements == ((2, 1),)

    def test_errors(self):
        with pytest.raises(EmptyAntichainError):
            support_min(MonomialSeries.zero(Z1))
        with pytest.raises(ValueError):
            support_min(series(Z1, terms={(-1,): 1}, laurent=True))


class TestArithmetic:
    def test_examples(self):
        one_plus = series(Z1, terms={(0,): 1, (1,): 1})
        one_minus = series(Z1, terms={(0,): 1, (1,): -1})
        assert mul(one_plus, one_minus) == series(Z1, terms={(0,): 1, (2,): -1})
        assert add(one_plus, one_plus.scale(-1)).is_zero()
        s = series(Z12, terms={(1, 0): 1, (0, 1): 1})
        assert mul(s, s) == series(Z12, terms={(2, 0): 1, (1, 1): 2, (0, 2): 1})

    def test_no_zero_coefficients(self):
        f = series(Z1, terms={(0,): 0, (1,): 3})
        assert list(f.support()) == [(1,)]

    def test_index_mismatch(self):
        with pytest.raises(IndexMismatchError):
            add(MonomialSeries.constant(Z1), MonomialSeries.constant(Z12))

    def test_negative_exponent_needs_laurent(self):
        with pytest.raises(ValueError):
            series(Z1, terms={(-1,): 1})

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(polynomials(n), polynomials(n), polynomials(n))))
    def test_ring_laws(self, fgh):
        f, g, h = fgh
        assert mul(f, g) == mul(g, f)
        assert mul(f, add(g, h)) == add(mul(f, g), mul(f, h))
        assert mul(mul(f, g), h) == mul(f, mul(g, h))

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(polynomials(n, 5, 3), polynomials(n, 5, 3),
                                                           exponents(n, 3))))
    def test_truncated_product(self, data):
        f, g, box = data
        assert mul_truncated(f, g, box) == mul(f, g).truncate(box)


class TestShiftFactor:
    def test_examples(self):
        gamma, g = shift_factor(series(Z1, terms={(-1,): 1, (0,): 1}, laurent=True))
        assert gamma == (-1,) and g == series(Z1, terms={(0,): 1, (1,): 1})
        gamma, g = shift_factor(series(Z12, terms={(2, 1): 1, (3, 3): 1}))
        assert gamma == (2, 1)
        gamma, g = shift_factor(series(Z12, terms={(1, -2): 1, (3, 0): 1}, laurent=True))
        assert gamma == (1, -2) and g == series(Z12, terms={(0, 0): 1, (2, 2): 1})

    def test_zero(self):
        with pytest.raises(EmptyAntichainError):
            shift_factor(MonomialSeries.zero(Z1))

    @given(polynomials(2))
    def test_factorisation(self, f):
        gamma, g = shift_factor(f)
        assert g.shift(gamma) == f
        assert all(min(e[i] for e in g.support()) == 0 for i in range(2))


class TestInversion:
    def test_geometric_series(self):
        inv = invert_unit(series(Z1, terms={(0,): 1, (1,): 1}), (3,))
        assert inv == series(Z1, terms={(0,): 1, (1,): -1, (2,): 1, (3,): -1})

    def test_constant(self):
        assert invert_unit(MonomialSeries.constant(Z12, 2), (4, 1)) == MonomialSeries.constant(Z12, Fraction(1, 2))

    def test_two_variables(self):
        u = series(Z12, terms={(0, 0): 1, (1, 0): 1, (0, 1): 1})
        inv = invert_unit(u, (2, 2))
        assert mul(u, inv).truncate((2, 2)) == MonomialSeries.constant(Z12, 1)
        # coefficient of z1 z2 in sum (-1)^k (z1+z2)^k is 2
        assert inv.coefficient((1, 1)) == 2

    def test_not_a_unit(self):
        with pytest.raises(NotAUnitError):
            invert_unit(series(Z1, terms={(1,): 1}), (3,))

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(units(n), exponents(n, 4))))
    def test_round_trip(self, data):
        u, box = data
        assert mul(u, invert_unit(u, box)).truncate(box) == MonomialSeries.constant(u.vars, 1)

    @given(st.integers(1, 2).flatmap(lambda n: st.tuples(units(n), exponents(n, 4), st.integers(-4, 4))))
    def test_unit_power_two_routes(self, data):
        # Euler recurrence against repeated multiplication / inversion
        u, box, k = data
        if k >= 0:
            direct = MonomialSeries.constant(u.vars, 1)
            for _ in range(k):
                direct = mul(direct, u)
            direct = direct.truncate(box)
        else:
            direct = invert_unit(u.pow(-k), box)
        assert unit_power(u, k, box) == direct


class TestRational:
    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalFunctionRep(MonomialSeries.constant(Z1), MonomialSeries.zero(Z1))


class TestAntichainLaws:
    @given(st.integers(1, 4).flatmap(lambda n: st.tuples(polynomials(n), st.lists(exponents(n, 2), min_size=5, max_size=5),
                                                           st.lists(st.integers(0, 7), min_size=5, max_size=5))))
    def test_rewriting_invariance(self, data):
        f, deltas, picks = data
        target = support_min(f)
        exp = AdmissibleExpansion.from_series(f)
        for delta, pick in zip(deltas, picks):
            if not any(delta):
                continue
            try:
                exp = exp.rewrite(pick % len(exp.terms), delta)
            except NotAUnitError:
                continue
            assert exp.expand() == f
            assert min_cw(exp.support(), f.vars) == target

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(polynomials(n), units(n))))
    def test_unit_invariance(self, data):
        f, u = data
        assert support_min(mul(u, f)) == support_min(f)

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(polynomials(n), polynomials(n))))
    def test_sum_law(self, fg):
        f, g = fg
        s = add(f, g)
        assume(not s.is_zero())
        af, ag = support_min(f), support_min(g)
        assert min_cw(support_min(s).elements + af.elements + ag.elements, f.vars) == antichain_union_min(af, ag)

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(
        polynomials(n), polynomials(n), st.lists(st.integers(0, 5), min_size=n, max_size=n))))
    def test_product_law(self, fgw):
        f, g, w = fgw
        bound = antichain_sum(support_min(f), support_min(g))
        prod = support_min(mul(f, g))
        assert min_cw(prod.elements + bound.elements, f.vars) == bound
        # cancellation can drop elements of the bound (e.g. (z2+z3)(z3-z2)), but every
        # monomial valuation sees the same minimum on both sides
        def low(a):
            return min(sum(wi * bi for wi, bi in zip(w, b)) for b in a.elements)
        assert low(prod) == low(bound)

    def test_product_bound_not_always_attained(self):
        f = MonomialSeries(("z2", "z3"), {(1, 0): -3, (0, 1): -3})
        g = MonomialSeries(("z2", "z3"), {(1, 0): 3, (0, 1): -3})
        assert support_min(mul(f, g)).elements == ((0, 2), (2, 0))
        assert len(antichain_sum(support_min(f), support_min(g))) == 3

    @given(st.integers(2, 4).flatmap(lambda n: st.tuples(polynomials(n), st.sets(st.integers(0, n - 1)))))
    def test_face_compatibility(self, data):
        # away from the face the other variables are units; substituting 1 for them restricts f
        f, keep = data
        keep = sorted(keep)
        rays = tuple(f.vars[i] for i in keep)
        projected = antichain_project(support_min(f), rays)
        restricted = at_one(f, keep)
        if not restricted.is_zero():
            # cancellation after substitution can only raise the restricted antichain
            assert min_cw(support_min(restricted).elements + projected.elements, rays) == projected
        generic = at_one(MonomialSeries(f.vars, {e: Fraction(1) for e in f.support()}), keep)
        assert support_min(generic) == projected


def at_one(f, keep):
    out = {}
    for e, c in f.items():
        k = tuple(e[i] for i in keep)
        out[k] = out.get(k, 0) + c
    return MonomialSeries(tuple(f.vars[i] for i in keep), out)
