"""Invariant suites behind ``valkit check``.

Each suite draws seeded random data, checks one module's invariants and
returns ``CheckResult`` rows.  Sizes are modest so ``--suite all`` finishes
in well under a minute; the test suite runs the full-size versions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .complex import (
    BUILTIN_FANS,
    TangentPoint,
    build_dual_complex,
    duality_to_tangent,
    duality_to_weights,
    fan_p1,
    fan_p2,
    find_supporting_cone,
    orthant,
    quadrant_complex,
    tangent_membership,
)
from .errors import NotAUnitError
from .okounkov import ConvexBody, GradedSections, box_body, hausdorff_distance, lattice_points, okounkov_sample
from .order import Antichain, antichain_project, antichain_sum, antichain_union_min, is_coherent, min_cw, project_family
from .sampling import random_flag, random_polynomial, random_stellar_tower, random_tangent_point, random_weight_matrix
from .series import AdmissibleExpansion, MonomialSeries, RationalFunctionRep, add, invert_unit, mul, support_min
from .toric import choose_parameters, random_coherent_family
from .valuation import (
    analytic_eval,
    flag_matches_duality,
    qm_eval_rational,
    qm_eval_series,
    retract_toric,
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _run(suite, name, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, not a crashed runner
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(suite, name, bool(ok), detail)


def _points(rng, n, count, high=4):
    return [tuple(rng.randint(0, high) for _ in range(n)) for _ in range(count)]


def suite_core_order(rng):
    def idempotent():
        for _ in range(200):
            pts = _points(rng, rng.randint(1, 4), rng.randint(1, 10))
            a = min_cw(pts)
            if min_cw(a.elements, a.index_set) != a:
                return False, f"not idempotent on {pts}"
        return True, "200 sets"

    def composes():
        for _ in range(200):
            n = rng.randint(1, 5)
            names = tuple(f"r{i}" for i in range(n))
            a = min_cw(_points(rng, n, rng.randint(1, 8)), names)
            mid = tuple(sorted(rng.sample(names, rng.randint(0, n)), key=names.index))
            low = tuple(sorted(rng.sample(mid, rng.randint(0, len(mid))), key=names.index))
            if antichain_project(antichain_project(a, mid), low) != antichain_project(a, low):
                return False, f"projection does not compose for {a}"
        return True, "200 chains"

    def sum_laws():
        for _ in range(100):
            n = rng.randint(1, 3)
            a, b, c = (min_cw(_points(rng, n, rng.randint(1, 5))) for _ in range(3))
            if antichain_sum(a, b) != antichain_sum(b, a):
                return False, "sum not commutative"
            if antichain_sum(antichain_sum(a, b), c) != antichain_sum(a, antichain_sum(b, c)):
                return False, "sum not associative"
            if antichain_sum(a, min_cw([(0,) * n])) != a:
                return False, "zero is not neutral"
            if antichain_union_min(a, a) != a:
                return False, "union not idempotent"
        return True, "100 triples"

    return [_run("core_order", n, f) for n, f in
            [("min_cw idempotent", idempotent), ("projection composes", composes), ("sum/union laws", sum_laws)]]


def suite_cone_complex(rng):
    def round_trip():
        for _ in range(300):
            n, k = rng.randint(1, 4), rng.randint(1, 4)
            w = random_weight_matrix(rng, "s", [f"z{i}" for i in range(n)], k, positive=False)
            p = duality_to_tangent(w)
            if not tangent_membership(p.x, p.ws) or duality_to_weights(p) != w:
                return False, f"round trip failed on {w}"
        return True, "300 matrices"

    def invariance():
        for _ in range(100):
            d = rng.choice([2, 3])
            tower = random_stellar_tower(rng, orthant(d), rng.randint(1, 3))
            p = random_tangent_point(rng, [str(i) for i in range(d)], rng.randint(1, 3))
            fid, local = find_supporting_cone(tower[-1], p)
            if not tangent_membership(local.x, local.ws):
                return False, f"supporting cone {fid} does not contain {p}"
        return True, "100 points"

    def axioms():
        build_dual_complex(["a", "b"], [{"rays": ["a", "b"], "label": "p"}, {"rays": ["a", "b"], "label": "q"}]).check_axioms()
        quadrant_complex().check_axioms()
        return True, "dual complexes satisfy the face axioms"

    return [_run("cone_complex", n, f) for n, f in
            [("duality round trip", round_trip), ("subdivision invariance", invariance), ("complex axioms", axioms)]]


def suite_series_local(rng):
    def inverse():
        for _ in range(50):
            n = rng.randint(1, 3)
            u = random_polynomial(rng, [f"z{i}" for i in range(n)], 4, 2)
            u = add(u, MonomialSeries.constant(u.vars, 1 - u.constant_term() + rng.randint(1, 3)))
            box = tuple(rng.randint(0, 4) for _ in range(n))
            if mul(u, invert_unit(u, box)).truncate(box) != MonomialSeries.constant(u.vars, 1):
                return False, f"u * u^-1 != 1 for {u}"
        return True, "50 units"

    def unit_rewrite():
        for _ in range(100):
            n = rng.randint(1, 4)
            f = random_polynomial(rng, [f"z{i}" for i in range(n)])
            exp = AdmissibleExpansion.from_series(f)
            for _ in range(3):
                delta = tuple(rng.randint(0, 2) for _ in range(n))
                if not any(delta):
                    continue
                try:
                    exp = exp.rewrite(rng.randrange(len(exp.terms)), delta)
                except NotAUnitError:
                    continue
                if min_cw(exp.support(), f.vars) != support_min(f):
                    return False, f"antichain changed under rewriting {f}"
        return True, "100 polynomials"

    def laws():
        for _ in range(100):
            names = [f"z{i}" for i in range(rng.randint(1, 3))]
            f, g = random_polynomial(rng, names), random_polynomial(rng, names)
            af, ag = support_min(f), support_min(g)
            s = add(f, g)
            if not s.is_zero():
                lhs = min_cw(support_min(s).elements + af.elements + ag.elements, f.vars)
                if lhs != antichain_union_min(af, ag):
                    return False, "sum law"
            bound = antichain_sum(af, ag)
            if min_cw(support_min(mul(f, g)).elements + bound.elements, f.vars) != bound:
                return False, "product law"
        return True, "100 pairs"

    return [_run("series_local", n, f) for n, f in
            [("invert_unit round trip", inverse), ("unit rewriting invariance", unit_rewrite), ("sum/product laws", laws)]]


def suite_valuation_engine(rng):
    def axioms():
        for _ in range(200):
            names = [f"z{i}" for i in range(rng.randint(1, 4))]
            w = random_weight_matrix(rng, "s", names, rng.randint(1, 4), positive=False)
            f, g = random_polynomial(rng, names), random_polynomial(rng, names)
            if qm_eval_series(w, mul(f, g)) != tuple(a + b for a, b in zip(qm_eval_series(w, f), qm_eval_series(w, g))):
                return False, "not multiplicative"
            s = add(f, g)
            if not s.is_zero() and qm_eval_series(w, s) < min(qm_eval_series(w, f), qm_eval_series(w, g)):
                return False, "ultrametric inequality fails"
        return True, "200 triples"

    def analytic():
        for _ in range(200):
            names = [f"z{i}" for i in range(rng.randint(1, 4))]
            p = random_tangent_point(rng, names, rng.randint(1, 4))
            r = RationalFunctionRep(random_polynomial(rng, names), random_polynomial(rng, names))
            if analytic_eval(p, r) != qm_eval_rational(duality_to_weights(p), r):
                return False, f"mismatch at {p}"
        return True, "200 cases"

    def flags():
        for _ in range(200):
            names = [f"z{i}" for i in range(rng.randint(1, 4))]
            f = random_polynomial(rng, names)
            if not flag_matches_duality(random_flag(rng, names), f):
                return False, f"flag mismatch on {f}"
        return True, "200 flags"

    def towers():
        for _ in range(50):
            base = rng.choice([orthant(2), fan_p2()])
            tower = random_stellar_tower(rng, base, 3)
            top = tower[-1]
            fid = rng.choice(top.facet_ids())
            w = random_weight_matrix(rng, fid, top.face(fid).rays, rng.randint(1, 3))
            direct = retract_toric(w, base)
            if retract_toric(retract_toric(w, tower[1]), base) != direct:
                return False, "retractions do not compose"
        return True, "50 towers"

    return [_run("valuation_engine", n, f) for n, f in
            [("valuation axioms", axioms), ("analytic = combinatorial", analytic),
             ("flag = quasi-monomial", flags), ("retraction towers", towers)]]


def suite_toric_approx(rng):
    def fixture():
        fan = fan_p1()
        fam = project_family({"1": Antichain(("1",), ((2,),)), "-1": Antichain(("-1",), ((1,),))}, fan)
        res = choose_parameters(fan, fam, ell=4, max_rounds=1)
        return res.passed, f"ell={res.ell}"

    def pipeline():
        count = 0
        for name in ("P1", "P2", "P1xP1", "BlP2"):
            fan = BUILTIN_FANS[name]()
            for _ in range(2):
                fam = random_coherent_family(fan, rng)
                res = choose_parameters(fan, fam, seed=rng.randrange(2**32))
                if not res.passed:
                    return False, f"{name}: {res.status}"
                count += 1
        return True, f"{count} families"

    def coherent_families():
        fan = fan_p2()
        fam = random_coherent_family(fan, rng)
        return is_coherent(fam, fan)[0], "random family is coherent"

    return [_run("toric_approx", n, f) for n, f in
            [("P1 fixture", fixture), ("pipeline on built-in fans", pipeline), ("family generator", coherent_families)]]


def suite_okounkov_lab(rng):
    def baseline():
        polys = {"square": ((0, 0), (1, 0), (0, 1), (1, 1)), "simplex": ((0, 0), (1, 0), (0, 1))}
        flag = TangentPoint("s", ("z1", "z2"), (1, 0), ((0, 1),))
        for name, verts in polys.items():
            sec = GradedSections(2, polytope=verts)
            limit = ConvexBody(2, tuple(tuple(Fraction(c) for c in v) for v in verts))
            for n in range(1, 6):
                body = okounkov_sample(flag, sec, n, n)
                oracle = ConvexBody(2, tuple(tuple(Fraction(c, n) for c in p) for p in lattice_points(verts, n, 2)))
                if not body.same_hull(oracle):
                    return False, f"{name} n={n}"
                if hausdorff_distance(body, limit).upper > Fraction(2, n):
                    return False, f"{name} n={n} too far"
        return True, "square and simplex, n <= 5"

    def symmetric():
        for _ in range(30):
            a = box_body((0, 0), (rng.randint(1, 3), rng.randint(1, 3)))
            b = box_body((rng.randint(-1, 1), 0), (2, rng.randint(1, 4)))
            if hausdorff_distance(a, b).squared != hausdorff_distance(b, a).squared:
                return False, "asymmetric"
        return True, "30 pairs"

    return [_run("okounkov_lab", n, f) for n, f in [("toric baseline", baseline), ("metric symmetry", symmetric)]]


SUITES = {
    "core_order": suite_core_order,
    "cone_complex": suite_cone_complex,
    "series_local": suite_series_local,
    "valuation_engine": suite_valuation_engine,
    "toric_approx": suite_toric_approx,
    "okounkov_lab": suite_okounkov_lab,
}


def run_suites(names, seed):
    out = []
    for name in names:
        out.extend(SUITES[name](random.Random(f"{seed}:{name}")))
    return out
