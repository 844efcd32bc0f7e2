"""Quasi-monomial valuations, tropicalization, flag valuations and retractions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import _linalg
from .complex import (
    Fan,
    TangentPoint,
    WeightMatrix,
    orthant_complex,
    parse_ray_id,
    tangent_membership,
)
from .errors import (
    IndexMismatchError,
    InvalidWeightError,
    NoFaceError,
)
from .order import Antichain, AntichainFamily, antichain_project, is_coherent, lex_nonneg, lex_tuple, min_cw
from .series import MonomialSeries, RationalFunctionRep, support_min


class _Infinity:
    """Value of the zero function.  Not a tuple; any arithmetic with it fails."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def _fail(self, *_):
        raise ArithmeticError("the value of the zero function cannot enter arithmetic")

    __add__ = __radd__ = __sub__ = __rsub__ = __neg__ = __lt__ = __le__ = __gt__ = __ge__ = _fail

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return 0


INFINITY = _Infinity()


def _pair(beta, columns, k):
    out = [Fraction(0)] * k
    for b, col in zip(beta, columns):
        if b:
            for j in range(k):
                out[j] += b * col[j]
    return tuple(out)


def _check_vars(w: WeightMatrix, f: MonomialSeries):
    if tuple(f.vars) != tuple(w.index_set):
        raise IndexMismatchError(f"series variables {f.vars} differ from weight index set {w.index_set}")


def monomial_value(w: WeightMatrix, f: MonomialSeries):
    """Lex-minimum of ``sum beta_i alpha_i`` over the full (possibly Laurent) support."""
    _check_vars(w, f)
    if f.is_zero():
        return INFINITY
    return min(_pair(beta, w.columns, w.rank) for beta in f.support())


def qm_eval_series(w: WeightMatrix, f: MonomialSeries):
    """Quasi-monomial valuation: lex-minimum of ``sum beta_i alpha_i`` over ``A_f``."""
    _check_vars(w, f)
    if f.is_zero():
        return INFINITY
    return min(_pair(beta, w.columns, w.rank) for beta in support_min(f))


def qm_eval_rational(w: WeightMatrix, r: RationalFunctionRep):
    num = qm_eval_series(w, r.num)
    if num is INFINITY:
        return INFINITY
    den = qm_eval_series(w, r.den)
    return tuple(a - b for a, b in zip(num, den))


# ---------------------------------------------------------------------------
# tropical functions


@dataclass(frozen=True)
class TropicalFunction:
    """Coherent antichain family, optionally minus a second one."""

    complex: object
    family: AntichainFamily
    negative: Optional[AntichainFamily] = None

    def __post_init__(self):
        for fam in (self.family, self.negative):
            if fam is None:
                continue
            ok, bad = is_coherent(fam, self.complex)
            if not ok:
                raise AssertionError(f"incoherent family, violations {bad[:5]}")

    def _antichain(self, fam, face):
        try:
            return fam[face]
        except KeyError:
            raise NoFaceError(f"face {face!r} is not in the family") from None


def _linear(beta, x):
    return sum((b * Fraction(v) for b, v in zip(beta, x)), Fraction(0))


def trop_eval(F: TropicalFunction, face, x) -> Fraction:
    """``min_{beta in A^face} <x, beta>`` minus the same for the negative family."""
    a = F._antichain(F.family, face)
    if len(x) != len(a.index_set):
        raise IndexMismatchError("point does not match the face")
    val = min(_linear(beta, x) for beta in a)
    if F.negative is not None:
        val -= min(_linear(beta, x) for beta in F._antichain(F.negative, face))
    return val


def _derivative(a: Antichain, p: TangentPoint):
    return min(tuple(_linear(beta, v) for v in (p.x,) + p.ws) for beta in a)


def derivative_witness(a: Antichain, p: TangentPoint):
    """An exponent attaining the lex-minimum (the coordinate-wise lex-smallest on ties)."""
    return min(a, key=lambda beta: (tuple(_linear(beta, v) for v in (p.x,) + p.ws), beta))


def directional_derivative(F: TropicalFunction, p: TangentPoint):
    """Iterated directional derivative of ``F`` at ``(x; w_1, ..., w_{k-1})``."""
    a = F._antichain(F.family, p.face)
    if a.index_set != p.index_set:
        raise IndexMismatchError(f"tangent point on {p.index_set}, family on {a.index_set}")
    val = _derivative(a, p)
    if F.negative is not None:
        neg = _derivative(F._antichain(F.negative, p.face), p)
        val = tuple(u - v for u, v in zip(val, neg))
    return val


def _support_projection(f: MonomialSeries, rays):
    idx = [f.vars.index(r) for r in rays]
    return [tuple(e[i] for i in idx) for e in f.support()]


def _family_of(f: MonomialSeries, cx, assignment):
    missing = [c for c in _all_rays(cx) if c not in f.vars]
    if missing:
        raise IndexMismatchError(f"series lacks variables for components {missing}")
    entries = {}
    for fid in cx.face_ids():
        rays = cx.face(fid).rays
        local = assignment.get(fid) if assignment else None
        if local is not None:
            if local.vars != rays:
                raise IndexMismatchError(f"local series on {fid} must use variables {rays}")
            entries[fid] = support_min(local)
        else:
            entries[fid] = min_cw(_support_projection(f, rays), rays)
    # faces carrying an assignment propagate to their sub-faces
    if assignment:
        for fid in assignment:
            for tau in cx.proper_faces(fid):
                if tau not in assignment:
                    entries[tau] = antichain_project(entries[fid], cx.face(tau).rays)
    return AntichainFamily(entries)


def _all_rays(cx):
    out = []
    for fid in cx.face_ids():
        for r in cx.face(fid).rays:
            if r not in out:
                out.append(r)
    return out


def tropicalize(f, cx, assignment: Optional[Mapping[str, MonomialSeries]] = None) -> TropicalFunction:
    """Tropicalization of a polynomial or rational function on a cone complex.

    ``f`` is written in one variable per component (extra variables are
    allowed and ignored by every face).  At a face the variables of other
    components are units, so the antichain there is the coordinate-wise
    minimum of the projected support.  ``assignment`` optionally supplies
    local series for chosen faces, e.g. to tell parallel faces apart.
    """
    if isinstance(f, RationalFunctionRep):
        if f.num.is_zero():
            raise ValueError("the zero function has no tropicalization")
        num_a = assignment.get("num") if assignment else None
        den_a = assignment.get("den") if assignment else None
        return TropicalFunction(cx, _family_of(f.num, cx, num_a), _family_of(f.den, cx, den_a))
    if f.is_zero():
        raise ValueError("the zero function has no tropicalization")
    return TropicalFunction(cx, _family_of(f, cx, assignment))


def _local_tropical(r, index_set):
    """Tropicalize at a single face given by its ray names."""
    cx = orthant_complex(index_set)
    return cx, tropicalize(r, cx)


def analytic_eval(p: TangentPoint, r):
    """``D^{k-1} trop(r)`` at the tangent point ``p``."""
    if isinstance(r, MonomialSeries):
        r = RationalFunctionRep.from_series(r)
    if r.vars != p.index_set:
        raise IndexMismatchError(f"function variables {r.vars} differ from the face rays {p.index_set}")
    if not tangent_membership(p.x, p.ws):
        raise InvalidWeightError("tangent point is outside the tangent cone")
    if r.num.is_zero():
        return INFINITY
    cx, F = _local_tropical(r, p.index_set)
    top = cx.maximal_faces()[0]
    return directional_derivative(F, TangentPoint(top, p.index_set, p.x, p.ws))


# ---------------------------------------------------------------------------
# flag valuations


def flag_eval(flag: Sequence, f: MonomialSeries):
    """Iterated order of vanishing along the coordinate flag ``z_{i_1}, z_{i_2}, ...``.

    ``flag`` holds variable names or positions.
    """
    if f.is_zero():
        return INFINITY
    order = [f.vars.index(i) if isinstance(i, str) else int(i) for i in flag]
    if len(set(order)) != len(order) or any(i < 0 or i >= len(f.vars) for i in order):
        raise IndexMismatchError(f"invalid flag {flag!r} for {f.vars}")
    terms = dict(f.items())
    out = []
    for i in order:
        assert terms, "intermediate series vanished"
        a = min(e[i] for e in terms)
        out.append(Fraction(a))
        # keep the terms of minimal order; dividing by z_i^a and setting z_i = 0 zeroes that slot
        kept = {}
        for e, c in terms.items():
            if e[i] == a:
                e2 = e[:i] + (0,) + e[i + 1:]
                kept[e2] = kept.get(e2, Fraction(0)) + c
        terms = {e: c for e, c in kept.items() if c != 0}
    return tuple(out)


def flag_tangent_point(flag, index_set, face="flag") -> TangentPoint:
    index_set = tuple(index_set)
    idx = [index_set.index(i) if isinstance(i, str) else int(i) for i in flag]
    basis = [tuple(int(j == i) for j in range(len(index_set))) for i in idx]
    return TangentPoint(face, index_set, basis[0], tuple(basis[1:]))


def flag_matches_duality(flag, f: MonomialSeries) -> bool:
    p = flag_tangent_point(flag, f.vars)
    return flag_eval(flag, f) == analytic_eval(p, f)


# ---------------------------------------------------------------------------
# retraction


def retract(values: Mapping[str, Sequence], target, face: Optional[str] = None) -> WeightMatrix:
    """Quasi-monomial valuation on ``target`` with prescribed values on the components.

    Components missing from ``values`` get value zero.  The center is the face
    whose rays are exactly the components of positive value; with parallel
    faces the caller picks one through ``face``.
    """
    comps = list(target.components)
    vals = {}
    k = None
    for name, v in values.items():
        if str(name) not in comps:
            raise IndexMismatchError(f"unknown component {name!r}")
        t = lex_tuple(v)
        if k is not None and len(t) != k:
            raise IndexMismatchError("values of different ranks")
        k = len(t)
        if not lex_nonneg(t):
            raise InvalidWeightError(f"value on {name} is negative")
        vals[str(name)] = t
    positive = {c for c, t in vals.items() if any(t)}
    cands = [fid for fid in target.face_ids() if set(target.face(fid).rays) == positive]
    if face is not None:
        if face not in cands:
            raise NoFaceError(f"face {face!r} does not carry the positive support {sorted(positive)}")
        cands = [face]
    if not cands:
        raise NoFaceError(f"components {sorted(positive)} span no face: the valuation has no center here")
    if len(cands) > 1:
        raise NoFaceError(f"parallel faces {cands} carry the same support; pass face=")
    fid = cands[0]
    rays = target.face(fid).rays
    return WeightMatrix(fid, rays, tuple(vals[r] for r in rays))


def toric_point(fan: Fan, w: WeightMatrix):
    """Ambient vector ``sum alpha_j n_j`` with ``Q^k`` entries (one k-tuple per coordinate)."""
    vecs = [parse_ray_id(r) for r in w.index_set]
    k = w.rank
    return tuple(
        tuple(sum((Fraction(col[j]) * v[c] for col, v in zip(w.columns, vecs)), Fraction(0)) for j in range(k))
        for c in range(fan.dim)
    )


def retract_toric(w: WeightMatrix, coarse: Fan) -> WeightMatrix:
    """Retract a toric valuation given on a face of a refinement onto ``coarse``."""
    vecs = [parse_ray_id(r) for r in w.index_set]
    k = w.rank
    p = toric_point(coarse, w)
    # a coarse facet containing the whole fine face hosts the center
    host = None
    for fid in coarse.facet_ids():
        if all(coarse.contains(fid, v) for v in vecs):
            host = fid
            break
    if host is None:
        raise NoFaceError("fine face is not contained in a facet of the coarse fan")
    dual = coarse.dual_basis(host)
    values = {}
    for rid, m in zip(coarse.face(host).rays, dual):
        values[rid] = tuple(sum((Fraction(m[c]) * p[c][j] for c in range(coarse.dim)), Fraction(0)) for j in range(k))
    return retract(values, coarse.complex)


def pullback_series(f: MonomialSeries, coarse: Fan, coarse_face, fine: Fan, fine_face) -> MonomialSeries:
    """Rewrite a series in the coordinates of a coarse facet as one on a fine face.

    ``z^beta`` is the character ``chi^m`` with ``m = sum beta_i m_i``; on the fine
    face its exponent is ``<m, n'_j>``.
    """
    dual = coarse.dual_basis(coarse_face)
    fine_vecs = fine.face_vectors(fine_face)
    out = {}
    for beta, c in f.items():
        m = [sum((Fraction(b) * mi[j] for b, mi in zip(beta, dual)), Fraction(0)) for j in range(coarse.dim)]
        e = tuple(int(_linalg.dot(m, v)) for v in fine_vecs)
        out[e] = out.get(e, Fraction(0)) + c
    laurent = any(x < 0 for e in out for x in e)
    return MonomialSeries(fine.face(fine_face).rays, out, laurent)


__all__ = [
    "INFINITY",
    "TropicalFunction",
    "analytic_eval",
    "derivative_witness",
    "directional_derivative",
    "flag_eval",
    "flag_matches_duality",
    "flag_tangent_point",
    "monomial_value",
    "pullback_series",
    "qm_eval_rational",
    "qm_eval_series",
    "retract",
    "retract_toric",
    "toric_point",
    "tropicalize",
    "trop_eval",
]
