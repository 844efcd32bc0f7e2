"""Higher-rank quasi-monomial valuations on rational cone complexes.

Exact rational arithmetic throughout: antichains and tropicalization,
tangent-cone duality, flag valuations, toric weak approximation,
retractions and Newton-Okounkov bodies.
"""

from .complex import (
    BUILTIN_FANS,
    ConeComplex,
    Fan,
    TangentPoint,
    WeightMatrix,
    build_dual_complex,
    duality_to_tangent,
    duality_to_weights,
    find_supporting_cone,
    orthant,
    orthant_complex,
    quadrant_complex,
    sigma_open_contains,
    stellar_subdivide,
    tangent_membership,
)
from .okounkov import ConvexBody, GradedSections, hausdorff_distance, okounkov_sample, weak_distance
from .order import (
    Antichain,
    AntichainFamily,
    antichain_project,
    antichain_sum,
    antichain_union_min,
    cw_leq,
    is_coherent,
    lex_cmp,
    min_cw,
)
from .series import MonomialSeries, RationalFunctionRep, invert_unit, shift_factor, support_min
from .toric import choose_parameters, convex_split, local_expand, toric_construct, verify
from .valuation import (
    INFINITY,
    TropicalFunction,
    analytic_eval,
    directional_derivative,
    flag_eval,
    flag_matches_duality,
    qm_eval_rational,
    qm_eval_series,
    retract,
    retract_toric,
    trop_eval,
    tropicalize,
)

__version__ = "0.1.0"
