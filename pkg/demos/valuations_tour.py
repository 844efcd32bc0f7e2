"""A short walk through quasi-monomial valuations.

Run with ``python3 demos/valuations_tour.py``.  Everything is exact; the
printed values are lexicographic tuples of fractions.
"""

from fractions import Fraction

from valkit import (
    MonomialSeries,
    RationalFunctionRep,
    WeightMatrix,
    analytic_eval,
    duality_to_tangent,
    flag_eval,
    qm_eval_rational,
    qm_eval_series,
    quadrant_complex,
    support_min,
    tropicalize,
)

V = ("z1", "z2")

# z1^2 z2 + z1^5: both monomials sit on the minimal antichain
f = MonomialSeries(V, {(2, 1): 1, (5, 0): 1})
print("f =", f)
print("minimal exponents:", support_min(f).elements)

# A rank-two weight matrix: first compare by (1, 0), break ties by (0, 1)
w = WeightMatrix("s:z1+z2", V, ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))))
print("v_w(f) =", qm_eval_series(w, f))

# The same point seen as a tangent vector; the analytic route agrees
p = duality_to_tangent(w)
print("tangent point x =", p.x, "w_1 =", p.ws[0])
print("analytic value =", analytic_eval(p, f))

# Rational functions are evaluated as a difference
r = RationalFunctionRep(MonomialSeries(V, {(1, 0): 1, (0, 1): 1}), MonomialSeries(V, {(1, 0): 1}))
print("v_w((z1 + z2) / z1) =", qm_eval_rational(w, r))

# Flag valuations are quasi-monomial valuations in disguise
print("flag (z2, z1) on f:", flag_eval(["z2", "z1"], f))

# Tropicalization records one antichain per face of the quadrant complex
trop = tropicalize(f, quadrant_complex())
for face, a in sorted(trop.family.items()):
    print(f"  face {face or 'origin'!r:>10}: {a.elements}")
