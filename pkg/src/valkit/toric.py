"""Constructive weak approximation on complete unimodular toric fans.

Given a coherent antichain family ``{A^tau}`` on a complete unimodular fan,
build

    f = sum_sigma lambda_sigma * sum_{a in A^sigma} chi^{sum a_j m_j} * u_sigma^ell

and check that its local antichain at every face is ``A^tau``.  Here
``m_j`` is the dual basis of the facet ``sigma`` and ``u_sigma`` is a
rational function that is a unit at the torus-fixed point of ``sigma`` and
vanishes along every divisor not in ``sigma``.

The default ``u_sigma`` is ``chi^{v_sigma} / Q`` with ``Q`` the sum of the
vertex characters of an ample lattice polytope whose normal fan is the given
fan.  ``denominator="dual_simplex"`` selects ``1 / (1 + sum_j chi^{m_j})``
instead, which only works when that polynomial happens to factor as a
monomial times a unit at every fixed point (true for P^1 and P^2 but not for
P^1 x P^1, where :class:`NotAUnitError` is raised).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from . import _linalg
from .complex import Fan, WeightMatrix, parse_ray_id, ray_id
from .errors import ComplexError, NonRegularCandidateError, NotAUnitError
from .order import (
    Antichain,
    AntichainFamily,
    antichain_project,
    is_coherent,
    min_cw,
    project_family,
)
from .series import MonomialSeries, mul, mul_truncated, shift_factor, support_min, unit_power
from .sampling import random_weight_matrix
from .valuation import INFINITY, monomial_value


def character_vars(dim):
    return tuple(f"x{i + 1}" for i in range(dim))


def _chars(dim, terms):
    return MonomialSeries(character_vars(dim), terms, laurent=True)


# ---------------------------------------------------------------------------
# ample polytope


def _pairing_rows(fan: Fan, sigma_fid):
    """Rows expressing the vertex ``v_sigma`` as a linear map of the support numbers."""
    dual = fan.dual_basis(sigma_fid)
    vecs = fan.face_vectors(sigma_fid)
    idx = [fan.rays.index(v) for v in vecs]
    # v_sigma = -sum_i b_{rho_i} m_i
    rows = []
    for c in range(fan.dim):
        row = [Fraction(0)] * len(fan.rays)
        for i, m in zip(idx, dual):
            row[i] -= Fraction(m[c])
        rows.append(row)
    return rows


def _vertex(fan, sigma_fid, b):
    return tuple(sum((r[i] * b[i] for i in range(len(b))), Fraction(0)) for r in _pairing_rows(fan, sigma_fid))


@lru_cache(maxsize=64)
def ample_support(fan: Fan) -> Tuple[int, ...]:
    """Integer support numbers ``b`` of a lattice polytope with normal fan ``fan``.

    The polytope is ``{m : <m, n_rho> >= -b_rho}``.  A small integer solution
    of the strict convexity inequalities is found with a MILP and re-checked
    in exact arithmetic.
    """
    if not fan.is_complete():
        raise ComplexError("an ample polytope needs a complete fan")
    if not fan.is_unimodular:
        raise ComplexError("fan is not unimodular")
    n = len(fan.rays)
    facets = fan.facet_ids()
    rows, lows = [], []
    for fid in facets:
        vrows = _pairing_rows(fan, fid)
        inside = set(fan.face_vectors(fid))
        for j, rho in enumerate(fan.rays):
            if rho in inside:
                continue
            # <v_sigma, n_rho> + b_rho >= 1
            row = [sum((vrows[c][i] * rho[c] for c in range(fan.dim)), Fraction(0)) for i in range(n)]
            row[j] += 1
            rows.append([float(v) for v in row])
            lows.append(1.0)
    fixed = [fan.rays.index(v) for v in fan.face_vectors(facets[0])]
    lb = np.full(n, -100.0)
    ub = np.full(n, 100.0)
    lb[fixed] = 0.0
    ub[fixed] = 0.0
    res = milp(
        c=np.ones(n),
        constraints=[LinearConstraint(np.array(rows), np.array(lows), np.inf)],
        integrality=np.ones(n),
        bounds=Bounds(lb, ub),
    )
    if not res.success:
        raise ComplexError(f"no ample support function found: {res.message}")
    b = tuple(int(round(v)) for v in res.x)
    check_ample(fan, b)
    return b


def check_ample(fan: Fan, b) -> None:
    b = [Fraction(v) for v in b]
    for fid in fan.facet_ids():
        v = _vertex(fan, fid, b)
        inside = set(fan.face_vectors(fid))
        for j, rho in enumerate(fan.rays):
            gap = _linalg.dot(v, rho) + b[j]
            if rho in inside and gap != 0:
                raise AssertionError(f"vertex of {fid} misses the facet of {rho}")
            if rho not in inside and gap < 1:
                raise AssertionError(f"support numbers are not strictly convex at ({fid}, {rho})")


def polytope_vertices(fan: Fan, b=None) -> Dict[str, Tuple[int, ...]]:
    if b is None:
        b = ample_support(fan)
    out = {}
    for fid in fan.facet_ids():
        v = _vertex(fan, fid, [Fraction(x) for x in b])
        out[fid] = tuple(int(c) for c in v)
    return out


# ---------------------------------------------------------------------------
# candidate


@dataclass(frozen=True)
class ToricTerm:
    facet: str
    lam: Fraction
    numerator: MonomialSeries  # Laurent polynomial in the characters
    base: MonomialSeries  # the denominator is base ** ell


@dataclass(frozen=True)
class ToricCandidate:
    fan: Fan
    ell: int
    lam: Dict[str, Fraction]
    terms: Tuple[ToricTerm, ...]
    denominator: str = "polytope"

    def as_fraction(self):
        """Global ``(N, D)`` with ``f = N / D``, both Laurent in the characters."""
        bases = []
        for t in self.terms:
            if t.base not in bases:
                bases.append(t.base)
        powers = [b.pow(self.ell) for b in bases]
        den = _chars(self.fan.dim, {(0,) * self.fan.dim: 1})
        for p in powers:
            den = mul(den, p)
        num = _chars(self.fan.dim, {})
        for t in self.terms:
            part = t.numerator.scale(t.lam)
            for b, p in zip(bases, powers):
                if b != t.base:
                    part = mul(part, p)
            num = num + part
        return num, den


def toric_construct(fan: Fan, family: Mapping[str, Antichain], ell: int, lam: Mapping[str, object],
                    denominator: str = "polytope") -> ToricCandidate:
    if not fan.is_complete():
        raise ComplexError("the fan is not complete")
    if not fan.is_unimodular:
        raise ComplexError("the fan is not unimodular")
    ok, bad = is_coherent(family, fan)
    if not ok:
        raise ValueError(f"incoherent family: {bad[:5]}")
    if ell < 1:
        raise ValueError("ell must be positive")
    lam = {k: Fraction(v) for k, v in lam.items()}
    if any(v == 0 for v in lam.values()):
        raise ValueError("lambda must be nonzero")
    d = fan.dim
    zero = (0,) * d
    if denominator == "polytope":
        verts = polytope_vertices(fan)
        q = _chars(d, {v: 1 for v in set(verts.values())})
    elif denominator != "dual_simplex":
        raise ValueError(f"unknown denominator mode {denominator!r}")
    terms = []
    for fid in fan.facet_ids():
        if fid not in lam:
            raise KeyError(f"no lambda for facet {fid}")
        dual = fan.dual_basis(fid)
        num = {}
        for a in family[fid]:
            m = tuple(sum(ai * mi[c] for ai, mi in zip(a, dual)) for c in range(d))
            num[m] = 1
        numerator = _chars(d, num)
        if denominator == "polytope":
            numerator = numerator.shift(tuple(ell * c for c in verts[fid]))
            base = q
        else:
            base = _chars(d, {zero: 1, **{tuple(m): 1 for m in dual}})
        terms.append(ToricTerm(fid, lam[fid], numerator, base))
    return ToricCandidate(fan, int(ell), dict(sorted(lam.items())), tuple(terms), denominator)


def to_local(f: MonomialSeries, fan: Fan, fid) -> MonomialSeries:
    """Rewrite a Laurent polynomial in characters in the coordinates of face ``fid``."""
    vecs = fan.face_vectors(fid)
    out = {}
    for m, c in f.items():
        e = tuple(sum(a * b for a, b in zip(m, v)) for v in vecs)
        out[e] = out.get(e, Fraction(0)) + c
    return MonomialSeries(fan.face(fid).rays, out, laurent=True)


@lru_cache(maxsize=256)
def _cached_power(unit: MonomialSeries, ell: int, box: Tuple[int, ...]):
    return unit_power(unit, -ell, box)


def _unit_part(base_local: MonomialSeries, facet, tau):
    gamma, unit = shift_factor(base_local)
    if unit.constant_term() == 0:
        raise NotAUnitError(f"denominator of facet {facet} is not a monomial times a unit at {tau}")
    return gamma, unit


def local_expand(c: ToricCandidate, tau, box) -> MonomialSeries:
    """Truncation to ``[0, box]`` of the local expansion of ``c`` at the facet ``tau``."""
    box = tuple(int(b) for b in box)
    rays = c.fan.face(tau).rays
    total = MonomialSeries.zero(rays)
    for t in c.terms:
        gamma, unit = _unit_part(to_local(t.base, c.fan, tau), t.facet, tau)
        num = to_local(t.numerator, c.fan, tau).shift(tuple(-c.ell * g for g in gamma))
        for e in num.support():
            if min(e, default=0) < 0:
                raise NonRegularCandidateError(
                    f"term of facet {t.facet} has a pole at {tau} (exponent {e}); ell={c.ell} is too small"
                )
        part = mul_truncated(num.as_polynomial(), _cached_power(unit, c.ell, box), box)
        total = total + part.scale(t.lam)
    return total


def default_box(c: ToricCandidate, family) -> Tuple[int, ...]:
    top = max((a.max_coordinate() for a in family.values()), default=0)
    pair = 0
    for fid in c.fan.facet_ids():
        for m in c.fan.dual_basis(fid):
            for r in c.fan.rays:
                pair = max(pair, abs(int(_linalg.dot(m, r))))
    b = top + c.ell * c.fan.dim * pair
    return (b,) * c.fan.dim


@dataclass
class FaceReport:
    face: str
    target: Antichain
    computed: Optional[Antichain]
    equal: bool
    box: Optional[Tuple[int, ...]] = None
    numerator_route: Optional[Antichain] = None
    crosscheck_total: int = 0
    crosscheck_agree: int = 0
    from_facets: Tuple[str, ...] = ()

    @property
    def passed(self):
        return self.equal and self.crosscheck_agree == self.crosscheck_total


@dataclass
class VerificationReport:
    ell: int
    lam: Dict[str, Fraction]
    seed: int
    faces: Dict[str, FaceReport] = field(default_factory=dict)
    output_coherent: bool = False
    denominator: str = "polytope"

    @property
    def passed(self):
        return self.output_coherent and all(f.passed for f in self.faces.values())

    def failing_faces(self):
        return [fid for fid, f in self.faces.items() if not f.passed]


def _lexmin_over(a: Antichain, w: WeightMatrix):
    k = w.rank
    best = None
    for beta in a:
        v = tuple(sum((b * col[j] for b, col in zip(beta, w.columns)), Fraction(0)) for j in range(k))
        if best is None or v < best:
            best = v
    return best


def verify(c: ToricCandidate, family: Mapping[str, Antichain], box=None, samples=32, seed=0) -> VerificationReport:
    """Check ``A_f^tau == A^tau`` on every face of the fan.

    Facets are checked three ways: the truncated local expansion, the exact
    numerator after dividing out the unit part of the global denominator, and
    the quasi-monomial value of ``N / D`` at ``samples`` random weight
    matrices (no truncation involved).  Lower faces are checked by projecting
    the computed facet antichains.
    """
    fan = c.fan
    rng = random.Random(seed)
    box = tuple(box) if box is not None else default_box(c, family)
    report = VerificationReport(c.ell, dict(c.lam), seed, denominator=c.denominator)
    num, den = c.as_fraction()
    computed = {}
    for tau in fan.facet_ids():
        target = family[tau]
        expansion = local_expand(c, tau, box)
        got = support_min(expansion) if not expansion.is_zero() else None
        computed[tau] = got
        # exact route: D = z^gamma * unit locally, so A_f is the antichain of N / z^gamma
        n_loc = to_local(num, fan, tau)
        d_loc = to_local(den, fan, tau)
        gamma, _ = _unit_part(d_loc, "*", tau)
        shifted = n_loc.shift(tuple(-g for g in gamma))
        exact = None
        if not shifted.is_zero() and all(x >= 0 for e in shifted.support() for x in e):
            exact = support_min(shifted.as_polynomial())
        agree = 0
        rays = fan.face(tau).rays
        for _ in range(samples):
            w = random_weight_matrix(rng, tau, rays)
            nv = monomial_value(w, n_loc)
            dv = monomial_value(w, d_loc)
            if nv is not INFINITY and tuple(a - b for a, b in zip(nv, dv)) == _lexmin_over(target, w):
                agree += 1
        report.faces[tau] = FaceReport(
            tau, target, got, got == target and exact == target, box, exact, samples, agree, (tau,)
        )
    for fid in fan.face_ids():
        if fid in report.faces:
            continue
        target = family[fid]
        rays = fan.face(fid).rays
        sources = [s for s in fan.facet_ids() if fid in fan.proper_faces(s)]
        projections = [antichain_project(computed[s], rays) if computed[s] is not None else None for s in sources]
        got = projections[0] if projections else None
        equal = all(p == target for p in projections)
        report.faces[fid] = FaceReport(fid, target, got, equal, from_facets=tuple(sources))
    if all(v is not None for v in computed.values()):
        ok, _ = is_coherent(project_family(computed, fan), fan)
        report.output_coherent = ok
    return report


# ---------------------------------------------------------------------------
# parameter search

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def initial_ell(fan: Fan, family) -> int:
    top = max((a.max_coordinate() for a in family.values()), default=0)
    return len(fan.facets) * (1 + top)


@dataclass
class ApproxResult:
    status: str  # "pass", "fail" (single fixed attempt), "non-regular" or "inconclusive"
    ell: int
    lam: Dict[str, Fraction]
    report: Optional[VerificationReport]
    attempts: list

    @property
    def passed(self):
        return self.status == "pass"


def choose_parameters(fan: Fan, family, seed=0, ell=None, max_rounds=4, samples=32,
                      denominator="polytope", lam=None) -> ApproxResult:
    """Search ``(ell, lambda)`` until :func:`verify` passes.

    Starts at ``ell_0 = #facets * (1 + max entry)`` with distinct small primes
    for ``lambda`` (unless ``ell`` or ``lam`` are given); on failure doubles
    ``ell`` and re-draws ``lambda`` from a widening range.  Exhausting the
    rounds is reported as inconclusive.
    """
    rng = random.Random(seed)
    facets = fan.facet_ids()
    ell = int(ell) if ell is not None else initial_ell(fan, family)
    if lam is None:
        lam = {f: Fraction(p) for f, p in zip(facets, SMALL_PRIMES)}
    attempts = []
    report = None
    for rnd in range(max_rounds):
        cand = toric_construct(fan, family, ell, lam, denominator)
        try:
            report = verify(cand, family, samples=samples, seed=rng.randrange(2**32))
            status = "pass" if report.passed else "fail"
            detail = report.failing_faces()
        except NonRegularCandidateError as exc:
            report, status, detail = None, "non-regular", str(exc)
        attempts.append({"ell": ell, "lam": dict(lam), "status": status, "detail": detail})
        if status == "pass":
            return ApproxResult("pass", ell, lam, report, attempts)
        if rnd == max_rounds - 1:
            break
        ell *= 2
        span = 10 * (rnd + 2) * len(facets)
        values = rng.sample([v for v in range(-span, span + 1) if v], len(facets))
        lam = {f: Fraction(v) for f, v in zip(facets, values)}
    # a single fixed attempt reports its own verdict; an exhausted search is inconclusive
    final = attempts[-1]["status"] if max_rounds == 1 else "inconclusive"
    return ApproxResult(final, ell, lam, report, attempts)


def random_coherent_family(fan: Fan, rng: random.Random, max_entry=3, max_elements=3) -> AntichainFamily:
    """Random coherent family on a fan whose lower faces are rays and the origin.

    Every ray gets a value ``c_rho``; each facet antichain has coordinates in
    ``[c_rho, max_entry]`` and attains ``c_rho`` in every coordinate, so all
    projections to a ray agree.
    """
    if fan.dim > 2:
        raise NotImplementedError("random families are drawn for fans of dimension <= 2")
    ray_value = {fan.face(fid).rays[0]: rng.randint(0, max_entry) for fid in fan.face_ids()
                 if len(fan.face(fid).rays) == 1}
    entries = {}
    for fid in fan.facet_ids():
        rays = fan.face(fid).rays
        lows = [ray_value[r] for r in rays]
        while True:
            size = rng.randint(1, max_elements)
            pts = [tuple(rng.randint(lo, max_entry) for lo in lows) for _ in range(size)]
            a = min_cw(pts, rays)
            if all(min(e[i] for e in a) == lows[i] for i in range(len(rays))):
                break
        entries[fid] = a
    return project_family(entries, fan)


# ---------------------------------------------------------------------------
# convex splitting


@dataclass(frozen=True)
class ConewiseLinear:
    """Function on a complete fan that is linear on every facet."""

    fan: Fan
    pieces: Dict[str, Tuple[Fraction, ...]]

    @classmethod
    def from_ray_values(cls, fan: Fan, values: Mapping[str, object]):
        pieces = {}
        for fid in fan.facet_ids():
            dual = fan.dual_basis(fid)
            rays = fan.face(fid).rays
            vec = [Fraction(0)] * fan.dim
            for r, m in zip(rays, dual):
                for c in range(fan.dim):
                    vec[c] += Fraction(values[r]) * m[c]
            pieces[fid] = tuple(vec)
        return cls(fan, pieces)

    def ray_value(self, rid):
        v = parse_ray_id(rid)
        vals = {_linalg.dot(self.pieces[f], v) for f in self.fan.facet_ids() if rid in self.fan.face(f).rays}
        if len(vals) != 1:
            raise ValueError(f"pieces disagree on ray {rid}")
        return vals.pop()

    def __call__(self, x):
        return _linalg.dot(self.pieces[self.fan.facet_containing(x)], x)

    def __add__(self, other):
        return ConewiseLinear(self.fan, {f: tuple(a + b for a, b in zip(v, other.pieces[f]))
                                         for f, v in self.pieces.items()})

    def scale(self, c):
        return ConewiseLinear(self.fan, {f: tuple(Fraction(c) * a for a in v) for f, v in self.pieces.items()})


def internal_walls(coarse: Fan, fine: Fan):
    """Pairs of adjacent fine facets inside one coarse facet, with their off-wall rays."""
    host = {}
    for fid in fine.facet_ids():
        vecs = fine.face_vectors(fid)
        host[fid] = next(c for c in coarse.facet_ids() if all(coarse.contains(c, v) for v in vecs))
    out = []
    for f1, f2 in itertools.combinations(fine.facet_ids(), 2):
        v1, v2 = set(fine.face_vectors(f1)), set(fine.face_vectors(f2))
        if len(v1 & v2) != fine.dim - 1 or host[f1] != host[f2]:
            continue
        (u1,) = v1 - v2
        (u2,) = v2 - v1
        out.append((f1, f2, u1, u2))
    return out


def wall_margins(F: ConewiseLinear, coarse: Fan):
    """``L_1(u_2) - L_2(u_2)`` for every internal wall; positive means strictly min-like."""
    out = []
    for f1, f2, u1, u2 in internal_walls(coarse, F.fan):
        out.append((f1, f2, _linalg.dot(F.pieces[f1], u2) - _linalg.dot(F.pieces[f2], u2)))
        out.append((f2, f1, _linalg.dot(F.pieces[f2], u1) - _linalg.dot(F.pieces[f1], u1)))
    return out


def standard_convex_function(coarse: Fan, fine: Fan) -> ConewiseLinear:
    """Small integral ``G >= 1`` on rays, strictly convex across every internal wall."""
    rids = [fine.face(f).rays[0] for f in fine.face_ids() if len(fine.face(f).rays) == 1]
    pos = {r: i for i, r in enumerate(rids)}
    n = len(rids)
    rows = []
    for f1, f2, u1, u2 in internal_walls(coarse, fine):
        for fa, fb, u in ((f1, f2, u2), (f2, f1, u1)):
            row = [0.0] * n
            for r, m in zip(fine.face(fa).rays, fine.dual_basis(fa)):
                row[pos[r]] += float(_linalg.dot(m, u))
            row[pos[ray_id(u)]] -= 1.0
            rows.append(row)
    cons = [LinearConstraint(np.array(rows), 1.0, np.inf)] if rows else []
    res = milp(c=np.ones(n), constraints=cons, integrality=np.ones(n), bounds=Bounds(np.ones(n), np.full(n, 1000.0)))
    if not res.success:
        raise ComplexError(f"no strictly convex function found: {res.message}")
    values = {r: int(round(res.x[pos[r]])) for r in rids}
    G = ConewiseLinear.from_ray_values(fine, values)
    if any(m < 1 for *_, m in wall_margins(G, coarse)):
        raise AssertionError("solver returned a function that is not strictly convex")
    return G


def convex_split(F: ConewiseLinear, G: ConewiseLinear, coarse: Fan):
    """Return ``(ell, F + ell*G, ell*G)`` with the smallest ``ell >= 1`` that works.

    ``F + ell*G`` must be strictly convex across every internal wall and
    non-negative on every ray; ``G`` must itself be strictly convex and
    non-negative on rays.
    """
    if F.fan != G.fan:
        raise ValueError("F and G must live on the same subdivision")
    gm = wall_margins(G, coarse)
    if any(m <= 0 for *_, m in gm):
        raise ValueError("G is not strictly convex across every internal wall")
    rids = [F.fan.face(f).rays[0] for f in F.fan.face_ids() if len(F.fan.face(f).rays) == 1]
    if any(G.ray_value(r) < 0 for r in rids):
        raise ValueError("G is negative on a ray")
    fm = {(a, b): m for a, b, m in wall_margins(F, coarse)}
    ell = 1
    for a, b, m in gm:
        # need fm + ell * m > 0
        ell = max(ell, int((-fm[(a, b)]) // m) + 1)
    for r in rids:
        fv, gv = F.ray_value(r), G.ray_value(r)
        if fv < 0:
            if gv == 0:
                raise ValueError(f"F is negative on ray {r} where G vanishes")
            ell = max(ell, -((fv) // gv))
    ell = int(ell)
    F1 = F + G.scale(ell)
    assert all(m > 0 for *_, m in wall_margins(F1, coarse))
    assert all(F1.ray_value(r) >= 0 for r in rids)
    return ell, F1, G.scale(ell)


def conewise_to_family(F: ConewiseLinear, coarse: Fan) -> AntichainFamily:
    """Antichain family on ``coarse`` of a convex, ray-non-negative conewise function."""
    entries = {}
    for cfid in coarse.facet_ids():
        vecs = coarse.face_vectors(cfid)
        pts = []
        for fid in F.fan.facet_ids():
            if all(coarse.contains(cfid, v) for v in F.fan.face_vectors(fid)):
                beta = tuple(_linalg.dot(F.pieces[fid], n) for n in vecs)
                if any(b.denominator != 1 or b < 0 for b in beta):
                    raise ValueError(f"piece on {fid} is not a non-negative integral exponent: {beta}")
                pts.append(tuple(int(b) for b in beta))
        entries[cfid] = min_cw(pts, coarse.face(cfid).rays)
    return project_family(entries, coarse)
