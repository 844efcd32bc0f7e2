"""Cone complexes, embedded simplicial fans and their tangent cones.

Two kinds of complexes live here:

* :class:`ConeComplex` is the abstract simplicial complex attached to an SNC
  divisor.  Every face is a copy of ``R_+^I`` with lattice ``Z^I`` and
  parallel faces (several faces over one ray set) are allowed.
* :class:`Fan` is a simplicial rational fan embedded in ``R^d``; it exposes
  the same face interface through :attr:`Fan.complex` and adds the geometry
  needed by the toric algorithms (ray vectors, dual bases, subdivision).

Tangent points ``(x; w_1, ..., w_{k-1})`` and weight matrices are the two
sides of the duality between rank-``k`` quasi-monomial valuations and
``TC^{k-1}``: column ``i`` of the weight matrix is ``(x_i, w_{1,i}, ...)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Optional, Sequence, Tuple

from . import _linalg
from .errors import (
    ComplexError,
    DimensionError,
    IndexMismatchError,
    InvalidWeightError,
    NoFaceError,
)
from .order import lex_nonneg, lex_tuple

ORIGIN_LABEL = "0"


@dataclass(frozen=True)
class Face:
    id: str
    rays: Tuple[str, ...]
    label: str
    # immediate codimension-one faces
    boundary: FrozenSet[str] = frozenset()

    @property
    def dim(self):
        return len(self.rays)


def face_id(label, rays) -> str:
    return f"{label}:{'+'.join(rays)}"


class ConeComplex:
    """Abstract simplicial cone complex with explicit face maps."""

    def __init__(self, components: Sequence[str], faces: Dict[str, Face]):
        self.components = tuple(components)
        self._faces = dict(sorted(faces.items()))
        self._below = {}
        for fid in self._faces:
            self._closure(fid)

    def _closure(self, fid):
        if fid not in self._below:
            below = set()
            for b in self._faces[fid].boundary:
                below.add(b)
                below |= self._closure(b)
            self._below[fid] = frozenset(below)
        return self._below[fid]

    def face_ids(self):
        return list(self._faces)

    def face(self, fid) -> Face:
        try:
            return self._faces[fid]
        except KeyError:
            raise NoFaceError(f"no face {fid!r}") from None

    def __contains__(self, fid):
        return fid in self._faces

    def __len__(self):
        return len(self._faces)

    def proper_faces(self, fid):
        """All faces of ``fid`` other than itself (the face relation is a partial order)."""
        return sorted(self._below[fid])

    def is_face_of(self, tau, sigma) -> bool:
        return tau == sigma or tau in self._below[sigma]

    def faces_with_rays(self, rays):
        rays = tuple(rays)
        return [fid for fid, f in self._faces.items() if set(f.rays) == set(rays)]

    def maximal_faces(self):
        above = set()
        for fid in self._faces:
            above |= self._below[fid]
        return [fid for fid in self._faces if fid not in above]

    def check_axioms(self):
        """Machine-check face closure and intersection-as-union-of-faces."""
        for fid, f in self._faces.items():
            if len(f.boundary) != len(f.rays):
                raise ComplexError(f"face {fid} has {len(f.boundary)} boundary faces, expected {len(f.rays)}")
            seen = set()
            for b in f.boundary:
                if b not in self._faces:
                    raise ComplexError(f"face {fid} refers to unknown face {b}")
                rb = self._faces[b].rays
                if len(rb) != len(f.rays) - 1 or not set(rb) <= set(f.rays):
                    raise ComplexError(f"face {b} is not a facet of {fid}")
                seen.add(frozenset(rb))
            if len(seen) != len(f.rays):
                raise ComplexError(f"face {fid} has two boundary faces over one ray set")
            # every subset of rays is realised by exactly one face of fid
            below = [self._faces[g] for g in self._below[fid]] + [f]
            for r in range(len(f.rays) + 1):
                for subset in itertools.combinations(f.rays, r):
                    hits = [g for g in below if set(g.rays) == set(subset)]
                    if len(hits) != 1:
                        raise ComplexError(f"face {fid} has {len(hits)} faces over rays {subset}")
        ids = list(self._faces)
        for a, b in itertools.combinations(ids, 2):
            common = (self._below[a] | {a}) & (self._below[b] | {b})
            for c in common:
                if not self._below[c] <= common:
                    raise ComplexError(f"intersection of {a} and {b} is not a union of faces")
        return True


def build_dual_complex(components, strata=()) -> ConeComplex:
    """Dual cone complex of an SNC arrangement.

    ``strata`` is a list of dicts ``{"rays": [...], "label": str}`` describing
    the connected components of intersections of at least two components.
    Components themselves and the origin are implicit.  When several strata
    share a ray set (parallel faces) a stratum above them must name its
    boundary with an optional ``"faces": [labels]`` entry.
    """
    components = tuple(str(c) for c in components)
    if len(set(components)) != len(components):
        raise ComplexError("repeated component name")
    order = {c: i for i, c in enumerate(components)}
    faces: Dict[str, Face] = {}
    origin = face_id(ORIGIN_LABEL, ())
    faces[origin] = Face(origin, (), ORIGIN_LABEL)
    by_label = {ORIGIN_LABEL: origin}
    for c in components:
        fid = face_id(c, (c,))
        faces[fid] = Face(fid, (c,), c, frozenset({origin}))
        by_label[c] = fid

    parsed = []
    for n, s in enumerate(strata):
        rays = s["rays"]
        unknown = [r for r in rays if str(r) not in order]
        if unknown:
            raise ComplexError(f"stratum {n} references unknown components {unknown}")
        rays = tuple(sorted({str(r) for r in rays}, key=order.__getitem__))
        if len(rays) < 2:
            raise ComplexError(f"stratum {n} must meet at least two components")
        label = str(s.get("label", n))
        if label in by_label:
            raise ComplexError(f"duplicate stratum label {label!r}")
        fid = face_id(label, rays)
        by_label[label] = fid
        parsed.append((rays, label, fid, s.get("faces")))

    pending = {fid: (rays, label, hint) for rays, label, fid, hint in parsed}
    for rays, label, fid, hint in sorted(parsed, key=lambda t: len(t[0])):
        boundary = set()
        for drop in rays:
            sub = tuple(r for r in rays if r != drop)
            if len(sub) == 1:
                boundary.add(by_label[sub[0]])
                continue
            if hint is not None:
                cands = [by_label[h] for h in hint if h in by_label
                         and set(pending.get(by_label[h], ((),))[0]) == set(sub)]
            else:
                cands = [g for g, (r, _, _) in pending.items() if set(r) == set(sub)]
            if len(cands) != 1:
                raise ComplexError(
                    f"face-closure violation: stratum {label!r} needs exactly one face over {sub}, found {len(cands)}"
                )
            boundary.add(cands[0])
        faces[fid] = Face(fid, rays, label, frozenset(boundary))
    cx = ConeComplex(components, faces)
    cx.check_axioms()
    return cx


def quadrant_complex(names=("z1", "z2")) -> ConeComplex:
    """Two components crossing once: faces ``0``, two rays and the square."""
    return build_dual_complex(names, [{"rays": list(names), "label": "s"}])


def orthant_complex(names) -> ConeComplex:
    """Dual complex of ``r`` coordinate hyperplanes: the single cone ``R_+^r``."""
    names = [str(n) for n in names]
    strata = []
    for r in range(2, len(names) + 1):
        for sub in itertools.combinations(names, r):
            strata.append({"rays": list(sub), "label": "s" if r == len(names) else "<" + "+".join(sub) + ">"})
    return build_dual_complex(names, strata)


# ---------------------------------------------------------------------------
# embedded fans


def ray_id(v) -> str:
    return ",".join(str(int(c)) for c in v)


def parse_ray_id(rid):
    return tuple(int(c) for c in rid.split(","))


FAN_ORIGIN = "origin"


def fan_face_id(vectors) -> str:
    if not vectors:
        return FAN_ORIGIN
    return "|".join(ray_id(v) for v in sorted(tuple(v) for v in vectors))


def _primitive(v):
    return math.gcd(*v) == 1


def _is_unimodular(vectors, dim) -> bool:
    if not vectors:
        return True
    if len(vectors) == dim:
        return abs(_linalg.det(vectors)) == 1
    g = 0
    for cols in itertools.combinations(range(dim), len(vectors)):
        g = math.gcd(g, int(_linalg.det([[v[c] for c in cols] for v in vectors])))
    return g == 1


@dataclass(frozen=True)
class Fan:
    """Simplicial fan in ``R^dim`` given by primitive rays and maximal cones."""

    dim: int
    rays: Tuple[Tuple[int, ...], ...]
    facets: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rays = tuple(tuple(int(c) for c in r) for r in self.rays)
        facets = tuple(sorted(tuple(sorted({int(i) for i in f}, key=lambda i: rays[i])) for f in self.facets))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "facets", facets)
        if len(set(rays)) != len(rays):
            raise ComplexError("repeated ray")
        for n, r in enumerate(rays):
            if len(r) != self.dim:
                raise ComplexError(f"ray {n} has wrong dimension")
            if not _primitive(r):
                raise ComplexError(f"ray {r} is not primitive")
        for f in facets:
            if any(i < 0 or i >= len(rays) for i in f):
                raise ComplexError(f"facet {f} references a missing ray")
            if _linalg.rank([rays[i] for i in f]) != len(f):
                raise ComplexError(f"facet {f} is not simplicial")

    # -- faces ------------------------------------------------------------
    @cached_property
    def _face_vectors(self) -> Dict[str, Tuple[Tuple[int, ...], ...]]:
        out = {}
        for f in self.facets:
            vecs = [self.rays[i] for i in f]
            for r in range(len(vecs) + 1):
                for sub in itertools.combinations(vecs, r):
                    fid = fan_face_id(sub)
                    out[fid] = tuple(sorted(sub))
        return dict(sorted(out.items()))

    @cached_property
    def complex(self) -> ConeComplex:
        faces = {}
        for fid, vecs in self._face_vectors.items():
            rids = tuple(ray_id(v) for v in vecs)
            boundary = frozenset(fan_face_id([w for w in vecs if w != v]) for v in vecs)
            faces[fid] = Face(fid, rids, fid, boundary)
        return ConeComplex(tuple(ray_id(r) for r in sorted(self.rays)), faces)

    def face_ids(self):
        return self.complex.face_ids()

    def face(self, fid):
        return self.complex.face(fid)

    def proper_faces(self, fid):
        return self.complex.proper_faces(fid)

    def facet_ids(self):
        return sorted(fan_face_id([self.rays[i] for i in f]) for f in self.facets)

    def face_vectors(self, fid):
        try:
            return self._face_vectors[fid]
        except KeyError:
            raise NoFaceError(f"no face {fid!r} in fan") from None

    @property
    def is_unimodular(self) -> bool:
        return all(_is_unimodular([self.rays[i] for i in f], self.dim) for f in self.facets)

    def is_complete(self) -> bool:
        """Pure full-dimensional fan whose walls each bound exactly two facets."""
        if not self.facets or any(len(f) != self.dim for f in self.facets):
            return False
        if self.dim == 1:
            return sorted(self.rays) == [(-1,), (1,)]
        walls = {}
        for f in self.facets:
            for sub in itertools.combinations(f, self.dim - 1):
                walls.setdefault(sub, []).append(f)
        if any(len(v) != 2 for v in walls.values()):
            return False
        # adjacent facets must lie on opposite sides of their common wall
        for sub, (f1, f2) in walls.items():
            base = [self.rays[i] for i in sub]
            u1 = [self.rays[i] for i in f1 if i not in sub][0]
            u2 = [self.rays[i] for i in f2 if i not in sub][0]
            if _linalg.det(base + [u1]) * _linalg.det(base + [u2]) >= 0:
                return False
        return True

    # -- coordinates --------------------------------------------------------
    def to_ambient(self, fid, coords):
        vecs = self.face_vectors(fid)
        if len(coords) != len(vecs):
            raise IndexMismatchError(f"{len(coords)} coordinates for a face with {len(vecs)} rays")
        return tuple(sum((Fraction(c) * v[j] for c, v in zip(coords, vecs)), Fraction(0)) for j in range(self.dim))

    def cone_coordinates(self, fid, point):
        """Coordinates of an ambient vector in the ray basis of a face, or None."""
        return _linalg.solve_coordinates(self.face_vectors(fid), point)

    def contains(self, fid, point) -> bool:
        c = self.cone_coordinates(fid, point)
        return c is not None and all(v >= 0 for v in c)

    def facet_containing(self, point):
        for fid in self.facet_ids():
            if self.contains(fid, point):
                return fid
        raise NoFaceError(f"point {tuple(point)} is outside the support")

    def dual_basis(self, fid):
        """Dual basis ``m_i`` of a full-dimensional face: ``<m_i, n_j> = delta_ij``."""
        vecs = self.face_vectors(fid)
        if len(vecs) != self.dim:
            raise ComplexError(f"face {fid} is not full-dimensional")
        inv = _linalg.inverse(vecs)  # rows are rays; inverse columns are the dual basis
        out = []
        for i in range(self.dim):
            m = tuple(inv[j][i] for j in range(self.dim))
            out.append(tuple(int(c) if c.denominator == 1 else c for c in m))
        return tuple(out)

    def smallest_face_containing(self, point):
        best = None
        for fid in self.face_ids():
            if self.contains(fid, point):
                if best is None or len(self.face_vectors(fid)) < len(self.face_vectors(best)):
                    best = fid
        if best is None:
            raise NoFaceError(f"point {tuple(point)} is outside the support")
        return best

    def refines(self, coarse: Fan) -> bool:
        """Every facet of ``self`` lies inside some facet of ``coarse``."""
        for fid in self.facet_ids():
            vecs = self.face_vectors(fid)
            if not any(all(coarse.contains(c, v) for v in vecs) for c in coarse.facet_ids()):
                return False
        return True


def stellar_subdivide(fan: Fan, ray) -> Fan:
    """Star subdivision of a unimodular fan at a primitive vector in its support."""
    v = tuple(int(c) for c in ray)
    if len(v) != fan.dim:
        raise DimensionError("ray has the wrong dimension")
    if not _primitive(v):
        raise ComplexError(f"{v} is not primitive")
    if v in fan.rays:
        return fan
    rays = list(fan.rays) + [v]
    new = len(rays) - 1
    facets = []
    inside = False
    for f in fan.facets:
        vecs = [fan.rays[i] for i in f]
        coords = _linalg.solve_coordinates(vecs, v)
        if coords is None or any(c < 0 for c in coords):
            facets.append(f)
            continue
        inside = True
        support = [i for i, c in zip(f, coords) if c > 0]
        for t in support:
            facets.append(tuple(i for i in f if i != t) + (new,))
    if not inside:
        raise ComplexError(f"{v} lies outside the support of the fan")
    out = Fan(fan.dim, tuple(rays), tuple(facets))
    if not out.is_unimodular:
        raise ComplexError(f"subdividing at {v} produces a non-unimodular fan")
    return out


def orthant(dim) -> Fan:
    rays = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
    return Fan(dim, rays, (tuple(range(dim)),))


def fan_p1() -> Fan:
    return Fan(1, ((1,), (-1,)), ((0,), (1,)))


def fan_p2() -> Fan:
    return Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (2, 0)))


def fan_p1xp1() -> Fan:
    return Fan(2, ((1, 0), (0, 1), (-1, 0), (0, -1)), ((0, 1), (1, 2), (2, 3), (3, 0)))


def fan_blp2() -> Fan:
    return stellar_subdivide(fan_p2(), (1, 1))


BUILTIN_FANS = {
    "P1": fan_p1,
    "P2": fan_p2,
    "P1xP1": fan_p1xp1,
    "BlP2": fan_blp2,
}


# ---------------------------------------------------------------------------
# tangent points and weight matrices


@dataclass(frozen=True)
class TangentPoint:
    """Point ``(x; w_1, ..., w_{k-1})`` of the tangent cone bundle over a face."""

    face: str
    index_set: Tuple[str, ...]
    x: Tuple[Fraction, ...]
    ws: Tuple[Tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "index_set", tuple(str(i) for i in self.index_set))
        object.__setattr__(self, "x", lex_tuple(self.x))
        object.__setattr__(self, "ws", tuple(lex_tuple(w) for w in self.ws))
        n = len(self.index_set)
        if len(self.x) != n or any(len(w) != n for w in self.ws):
            raise IndexMismatchError("tangent vectors must be indexed by the face's rays")

    @property
    def rank(self) -> int:
        return 1 + len(self.ws)

    def columns(self):
        return [tuple([self.x[i]] + [w[i] for w in self.ws]) for i in range(len(self.index_set))]


@dataclass(frozen=True)
class WeightMatrix:
    """Weights ``alpha_i`` in ``Q^k`` attached to the rays of a face."""

    face: str
    index_set: Tuple[str, ...]
    columns: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "index_set", tuple(str(i) for i in self.index_set))
        cols = tuple(lex_tuple(c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if len(cols) != len(self.index_set):
            raise IndexMismatchError("one weight column per ray is required")
        if len({len(c) for c in cols}) > 1:
            raise DimensionError("weight columns of different ranks")
        for name, c in zip(self.index_set, cols):
            if not lex_nonneg(c):
                raise InvalidWeightError(f"column for {name} is lexicographically negative: {c}")

    @property
    def rank(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    def column(self, name):
        return self.columns[self.index_set.index(name)]


def tangent_membership(x, ws=()) -> bool:
    """``(x; w_1, ..., w_r)`` lies in the tangent cone of ``R_+^I``.

    Equivalent to every coordinate column ``(x_i, w_{1,i}, ...)`` being
    lexicographically non-negative.
    """
    n = len(x)
    if any(len(w) != n for w in ws):
        raise IndexMismatchError("all tangent vectors must have the face's length")
    return all(lex_nonneg([x[i]] + [w[i] for w in ws]) for i in range(n))


def duality_to_tangent(w: WeightMatrix) -> TangentPoint:
    k = w.rank
    n = len(w.index_set)
    x = tuple(w.columns[i][0] for i in range(n))
    ws = tuple(tuple(w.columns[i][j] for i in range(n)) for j in range(1, k))
    return TangentPoint(w.face, w.index_set, x, ws)


def duality_to_weights(p: TangentPoint) -> WeightMatrix:
    if not tangent_membership(p.x, p.ws):
        raise InvalidWeightError("tangent point is not in the tangent cone of its face")
    return WeightMatrix(p.face, p.index_set, tuple(p.columns()))


# ---------------------------------------------------------------------------
# subdivision invariance and the tropical topology basis


def _tangent_in_face(fan: Fan, fid, x, ws):
    cx = fan.cone_coordinates(fid, x)
    if cx is None:
        return None
    cws = []
    for w in ws:
        c = fan.cone_coordinates(fid, w)
        if c is None:
            return None
        cws.append(c)
    if not tangent_membership(cx, cws):
        return None
    return TangentPoint(fid, fan.face(fid).rays, cx, tuple(cws))


def supporting_cones(subdivision: Fan, x, ws=()):
    """All faces ``tau`` of the subdivision with ``(x; ws)`` in ``TC tau``.

    ``x`` and ``ws`` are ambient vectors.  Returns a dict face id -> the point
    expressed in that face's coordinates.
    """
    out = {}
    for fid in subdivision.face_ids():
        tp = _tangent_in_face(subdivision, fid, x, ws)
        if tp is not None:
            out[fid] = tp
    return out


def find_supporting_cone(subdivision: Fan, point, base: Optional[Fan] = None):
    """Minimal face of ``subdivision`` whose tangent cone contains ``point``.

    ``point`` is a :class:`TangentPoint`; its coordinates are read in the ray
    basis of ``point.face`` in ``base`` when given, otherwise as ambient
    coordinates (the usual situation for the standard orthant).
    Returns ``(face_id, TangentPoint in that face's coordinates)``.
    """
    if base is not None:
        x = base.to_ambient(point.face, point.x)
        ws = [base.to_ambient(point.face, w) for w in point.ws]
    else:
        x, ws = point.x, point.ws
    if len(x) != subdivision.dim:
        raise DimensionError("point and subdivision live in different dimensions")
    hits = supporting_cones(subdivision, x, ws)
    if not hits:
        raise AssertionError("tangent point is not supported by any cone of the subdivision")
    least = min(len(subdivision.face_vectors(f)) for f in hits)
    minimal = [f for f in hits if len(subdivision.face_vectors(f)) == least]
    assert len(minimal) == 1, f"several minimal supporting cones: {minimal}"
    return minimal[0], hits[minimal[0]]


@dataclass(frozen=True)
class OpenBox:
    """Open box ``lower < coords < upper`` in flattened ``(x, w_1, ...)`` coordinates."""

    lower: Tuple[Fraction, ...]
    upper: Tuple[Fraction, ...]

    def __post_init__(self):
        lo, hi = lex_tuple(self.lower), lex_tuple(self.upper)
        if len(lo) != len(hi):
            raise DimensionError("box bounds of different lengths")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError(f"malformed box: lower {lo} is not below upper {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def contains(self, coords) -> bool:
        return len(coords) == len(self.lower) and all(
            a < c < b for a, c, b in zip(self.lower, coords, self.upper)
        )


def sigma_open_contains(subdivision: Fan, opens, x, ws=()) -> bool:
    """Membership in a finite union of per-cone open boxes.

    ``opens`` maps face ids of the subdivision to lists of :class:`OpenBox`
    (or ``(lower, upper)`` pairs) in that face's tangent coordinates.
    """
    boxes = {fid: [b if isinstance(b, OpenBox) else OpenBox(*b) for b in bs] for fid, bs in opens.items()}
    for fid, bs in boxes.items():
        if not bs:
            continue
        tp = _tangent_in_face(subdivision, fid, x, ws)
        if tp is None:
            continue
        flat = tuple(tp.x) + tuple(c for w in tp.ws for c in w)
        if any(b.contains(flat) for b in bs):
            return True
    return False
