"""Realizing an antichain family by one rational function on P^1.

The family asks for order 2 at one fixed point and order 1 at the other.
We build the candidate, inspect it, then watch what happens when the
exponent ``ell`` is too small.
"""

from fractions import Fraction

from valkit import Antichain, choose_parameters, toric_construct
from valkit.complex import fan_p1
from valkit.order import project_family

fan = fan_p1()
family = project_family({"1": Antichain(("1",), ((2,),)), "-1": Antichain(("-1",), ((1,),))}, fan)

cand = toric_construct(fan, family, 2, {"1": Fraction(1), "-1": Fraction(1)})
num, den = cand.as_fraction()
print("candidate numerator:  ", num)
print("candidate denominator:", den)

res = choose_parameters(fan, family, seed=0)
print(f"search: {res.status} at ell={res.ell}")
for fid, face in sorted(res.report.faces.items()):
    print(f"  face {fid!r:>9}: computed {face.computed.elements if face.computed else None}, cross-checks {face.crosscheck_agree}/{face.crosscheck_total}")

low = choose_parameters(fan, family, seed=0, ell=2, max_rounds=1)
print(f"fixed ell=2: {low.status}; failing faces {low.attempts[0]['detail']}")
