"""Newton-Okounkov bodies of monomial graded data and convex-body metrics.

Bodies are exact: points are tuples of ``Fraction`` and hulls in dimensions
1 and 2 are computed with rational arithmetic.  Hausdorff distances are exact
squared rationals whose square roots are bracketed by rationals.  The weak
(integral) distance is a seeded Monte Carlo estimate.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _linalg
from .complex import TangentPoint, WeightMatrix, duality_to_weights
from .errors import DimensionError

Point = Tuple[Fraction, ...]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(points: List[Point]) -> List[Point]:
    # Andrew's monotone chain; strict turns drop collinear points
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def _generalized_normal(diffs, d):
    """Vector orthogonal to ``d - 1`` difference vectors (cofactor expansion)."""
    out = []
    for j in range(d):
        minor = [[row[c] for c in range(d) if c != j] for row in diffs]
        out.append((-1) ** j * _linalg.det(minor))
    return tuple(out)


def halfspaces(vertices: Sequence[Point], d: int):
    """Facet inequalities ``<a, x> >= b`` of a full-dimensional polytope, exact."""
    verts = [tuple(Fraction(c) for c in v) for v in vertices]
    if d == 1:
        lo, hi = min(v[0] for v in verts), max(v[0] for v in verts)
        return [((Fraction(1),), lo), ((Fraction(-1),), -hi)]
    if d == 2:
        hull = _hull_2d(verts)
        out = []
        for a, b in zip(hull, hull[1:] + hull[:1]):
            # interior lies to the left of a->b
            normal = (-(b[1] - a[1]), b[0] - a[0])
            out.append((normal, _linalg.dot(normal, a)))
        return out
    out = set()
    for subset in itertools.combinations(verts, d):
        diffs = [tuple(p[c] - subset[0][c] for c in range(d)) for p in subset[1:]]
        normal = _generalized_normal(diffs, d)
        if not any(normal):
            continue
        off = _linalg.dot(normal, subset[0])
        vals = [_linalg.dot(normal, v) - off for v in verts]
        if all(v >= 0 for v in vals):
            g = normal
        elif all(v <= 0 for v in vals):
            g = tuple(-c for c in normal)
            off = -off
        else:
            continue
        scale = max(abs(c) for c in g)
        out.add((tuple(c / scale for c in g), off / scale))
    return sorted(out)


@dataclass(frozen=True)
class ConvexBody:
    """Convex hull of finitely many rational points."""

    dim: int
    points: Tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(sorted({tuple(Fraction(c) for c in p) for p in self.points}))
        if not pts:
            raise ValueError("a convex body needs at least one point")
        if any(len(p) != self.dim for p in pts):
            raise DimensionError("points of the wrong dimension")
        object.__setattr__(self, "points", pts)

    @property
    def vertices(self) -> Tuple[Point, ...]:
        cached = self.__dict__.get("_vertices")
        if cached is None:
            cached = tuple(_vertices(list(self.points), self.dim))
            object.__setattr__(self, "_vertices", cached)
        return cached

    @property
    def full_dimensional(self) -> bool:
        base = self.points[0]
        diffs = [tuple(p[c] - base[c] for c in range(self.dim)) for p in self.points[1:]]
        return _linalg.rank(diffs) == self.dim if diffs else self.dim == 0

    def contains(self, x) -> bool:
        x = tuple(Fraction(c) for c in x)
        return sq_distance_to_body(x, self) == 0

    def bounding_box(self):
        lo = tuple(min(v[c] for v in self.vertices) for c in range(self.dim))
        hi = tuple(max(v[c] for v in self.vertices) for c in range(self.dim))
        return lo, hi

    def same_hull(self, other: ConvexBody) -> bool:
        return self.dim == other.dim and set(self.vertices) == set(other.vertices)


def _vertices(points, d):
    if d == 1:
        return sorted({min(points), max(points)})
    if d == 2:
        return _hull_2d(points)
    # higher dimensions: scipy proposes candidates, each is confirmed exactly
    from scipy.spatial import ConvexHull

    arr = np.array([[float(c) for c in p] for p in points])
    try:
        cand = [points[i] for i in ConvexHull(arr).vertices]
    except Exception:
        cand = points
    return sorted(set(cand))


def box_body(lower, upper) -> ConvexBody:
    lower = [Fraction(c) for c in lower]
    upper = [Fraction(c) for c in upper]
    return ConvexBody(len(lower), tuple(itertools.product(*zip(lower, upper))))


# ---------------------------------------------------------------------------
# distances


def _sq(v):
    return sum((c * c for c in v), Fraction(0))


def _sq_dist_segment(p, a, b):
    ab = tuple(y - x for x, y in zip(a, b))
    ap = tuple(y - x for x, y in zip(a, p))
    denom = _sq(ab)
    if denom == 0:
        return _sq(ap)
    t = _linalg.dot(ap, ab) / denom
    t = min(Fraction(1), max(Fraction(0), t))
    return _sq(tuple(pc - (ac + t * bc) for pc, ac, bc in zip(p, a, ab)))


def sq_distance_to_body(p: Point, body: ConvexBody) -> Fraction:
    """Exact squared Euclidean distance from a point to a body of dimension <= 2."""
    verts = body.vertices
    if body.dim == 1:
        lo, hi = verts[0][0], verts[-1][0]
        x = p[0]
        return (lo - x) ** 2 if x < lo else (x - hi) ** 2 if x > hi else Fraction(0)
    if body.dim != 2:
        raise NotImplementedError("exact distances are implemented for dimensions 1 and 2")
    if len(verts) == 1:
        return _sq(tuple(a - b for a, b in zip(p, verts[0])))
    if len(verts) == 2:
        return _sq_dist_segment(p, verts[0], verts[1])
    edges = list(zip(verts, verts[1:] + verts[:1]))
    if all(_cross(a, b, p) >= 0 for a, b in edges):
        return Fraction(0)
    return min(_sq_dist_segment(p, a, b) for a, b in edges)


def sqrt_bracket(s: Fraction, tol=Fraction(1, 10**9)):
    """Rationals ``lo <= sqrt(s) <= hi`` with ``hi - lo <= tol``."""
    s = Fraction(s)
    if s < 0:
        raise ValueError("negative square")
    n = 1
    while Fraction(1, n) > tol:
        n *= 2
    scaled = s * n * n
    a = scaled.numerator // scaled.denominator
    r = math.isqrt(a)
    lo = Fraction(r, n)
    hi = lo if r * r == scaled else Fraction(r + 1, n)
    return lo, hi


@dataclass(frozen=True)
class DistanceBracket:
    squared: Fraction
    lower: Fraction
    upper: Fraction

    @property
    def width(self):
        return self.upper - self.lower

    def __float__(self):
        return float((self.lower + self.upper) / 2)


def hausdorff_distance(c1: ConvexBody, c2: ConvexBody, tol=Fraction(1, 10**9)) -> DistanceBracket:
    """Hausdorff distance of two polytopes (maximum over vertices of the distance to the other body)."""
    if c1.dim != c2.dim:
        raise DimensionError(f"bodies of dimension {c1.dim} and {c2.dim}")
    sq = max(
        max(sq_distance_to_body(v, c2) for v in c1.vertices),
        max(sq_distance_to_body(v, c1) for v in c2.vertices),
    )
    lo, hi = sqrt_bracket(sq, tol)
    return DistanceBracket(sq, lo, hi)


# ---------------------------------------------------------------------------
# weak distance


@dataclass(frozen=True)
class Bump:
    center: Tuple[float, ...]
    radius: float

    def __call__(self, x: np.ndarray) -> np.ndarray:
        r2 = np.sum((x - np.asarray(self.center)) ** 2, axis=1) / self.radius**2
        out = np.zeros(len(x))
        inside = r2 < 1
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
        return out


def bump_grid(lower, upper, per_axis=3, radius=None) -> List[Bump]:
    """Bumps centred on a regular grid of the box, overlapping neighbours."""
    lower = [float(v) for v in lower]
    upper = [float(v) for v in upper]
    axes = [np.linspace(a, b, per_axis + 2)[1:-1] for a, b in zip(lower, upper)]
    step = max((b - a) / (per_axis + 1) for a, b in zip(lower, upper))
    radius = radius or 1.5 * step
    return [Bump(tuple(float(c) for c in p), radius) for p in itertools.product(*axes)]


def _float_halfspaces(body: ConvexBody):
    hs = halfspaces(body.vertices, body.dim)
    a = np.array([[float(c) for c in n] for n, _ in hs])
    b = np.array([float(o) for _, o in hs])
    return a, b


def _indicator(body: ConvexBody, x: np.ndarray) -> np.ndarray:
    if not body.full_dimensional:
        return np.zeros(len(x))
    a, b = _float_halfspaces(body)
    return np.all(x @ a.T >= b - 1e-12, axis=1).astype(float)


@dataclass(frozen=True)
class WeakEstimate:
    difference: float
    stderr: float

    @property
    def statistic(self):
        return abs(self.difference)


def weak_distance(c1: ConvexBody, c2: ConvexBody, bumps: Sequence[Callable], n_samples=100_000, seed=0,
                  box=None) -> List[WeakEstimate]:
    """Monte Carlo estimates of ``int_{C1} f - int_{C2} f`` for each test function."""
    if c1.dim != c2.dim:
        raise DimensionError("bodies of different dimensions")
    if box is None:
        l1, h1 = c1.bounding_box()
        l2, h2 = c2.bounding_box()
        box = ([min(a, b) for a, b in zip(l1, l2)], [max(a, b) for a, b in zip(h1, h2)])
    lo = np.array([float(v) for v in box[0]])
    hi = np.array([float(v) for v in box[1]])
    if np.any(hi <= lo):
        raise ValueError("degenerate bounding box")
    rng = np.random.default_rng(seed)
    x = lo + (hi - lo) * rng.random((n_samples, c1.dim))
    vol = float(np.prod(hi - lo))
    diff = _indicator(c1, x) - _indicator(c2, x)
    out = []
    for f in bumps:
        g = f(x) * diff
        out.append(WeakEstimate(vol * float(g.mean()), vol * float(g.std(ddof=1)) / math.sqrt(n_samples)))
    return out


# ---------------------------------------------------------------------------
# graded sections and sampling


@dataclass(frozen=True)
class GradedSections:
    """Monomial graded data: ``H_n = nP`` lattice points, or explicit exponent sets."""

    dim: int
    polytope: Optional[Tuple[Tuple[int, ...], ...]] = None
    explicit: Optional[Dict[int, Tuple[Tuple[int, ...], ...]]] = None

    def __post_init__(self):
        if (self.polytope is None) == (self.explicit is None):
            raise ValueError("give exactly one of polytope and explicit")
        if self.polytope is not None:
            verts = tuple(tuple(int(c) for c in v) for v in self.polytope)
            if any(len(v) != self.dim for v in verts):
                raise DimensionError("polytope vertex of the wrong dimension")
            object.__setattr__(self, "polytope", verts)
        else:
            ex = {int(n): tuple(sorted({tuple(int(c) for c in e) for e in es})) for n, es in self.explicit.items()}
            for n, es in ex.items():
                if n >= 1 and not es:
                    raise ValueError(f"H_{n} is empty")
            object.__setattr__(self, "explicit", ex)

    def sections(self, n) -> List[Tuple[int, ...]]:
        if self.explicit is not None:
            return list(self.explicit.get(n, ()))
        return lattice_points(self.polytope, n, self.dim)


def lattice_points(vertices, n, d) -> List[Tuple[int, ...]]:
    """Integer points of ``n * conv(vertices)`` by box enumeration and exact facet tests."""
    scaled = [tuple(n * c for c in v) for v in vertices]
    body = ConvexBody(d, tuple(scaled))
    lo = [min(v[c] for v in scaled) for c in range(d)]
    hi = [max(v[c] for v in scaled) for c in range(d)]
    if body.full_dimensional:
        hs = halfspaces(body.vertices, d)
        test = lambda p: all(_linalg.dot(a, p) >= b for a, b in hs)  # noqa: E731
    else:
        test = lambda p: body.contains(p)  # noqa: E731
    return [p for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))) if test(p)]


def _as_weights(point) -> WeightMatrix:
    if isinstance(point, TangentPoint):
        return duality_to_weights(point)
    return point


def valuation_of_character(w: WeightMatrix, m) -> Point:
    k = w.rank
    return tuple(sum((Fraction(mi) * col[j] for mi, col in zip(m, w.columns)), Fraction(0)) for j in range(k))


def okounkov_sample(point, sections: GradedSections, n_max: int, n_min: int = 1) -> ConvexBody:
    """Hull of ``nu(chi^m) / n`` over ``m in H_n`` for ``n_min <= n <= n_max``."""
    w = _as_weights(point)
    d = sections.dim
    if w.rank != d or len(w.index_set) != d:
        raise DimensionError(f"valuation of rank {w.rank} on {len(w.index_set)} coordinates, sections of dim {d}")
    pts = []
    for n in range(n_min, n_max + 1):
        for m in sections.sections(n):
            v = valuation_of_character(w, m)
            pts.append(tuple(c / n for c in v))
    return ConvexBody(d, tuple(pts))


@dataclass(frozen=True)
class VariationRow:
    step: int
    to_previous: Optional[DistanceBracket]
    to_limit: DistanceBracket


def variation_experiment(path: Sequence, sections: GradedSections, n_max: int, limit=None) -> List[VariationRow]:
    """Hausdorff distances along a path of tangent points (a continuity probe)."""
    ranks = {_as_weights(p).rank for p in path}
    if len(ranks) > 1:
        raise DimensionError(f"mixed ranks {sorted(ranks)} along the path")
    bodies = [okounkov_sample(p, sections, n_max) for p in path]
    target = okounkov_sample(limit, sections, n_max) if limit is not None else bodies[-1]
    rows = []
    for i, b in enumerate(bodies):
        prev = hausdorff_distance(bodies[i - 1], b) if i else None
        rows.append(VariationRow(i, prev, hausdorff_distance(b, target)))
    return rows


def variation_csv(rows: Sequence[VariationRow]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["step", "prev_sq", "prev_lo_float", "prev_hi_float", "limit_sq", "limit_lo_float", "limit_hi_float"])
    for r in rows:
        p = r.to_previous
        wr.writerow([
            r.step,
            "" if p is None else f"{p.squared.numerator}/{p.squared.denominator}",
            "" if p is None else repr(float(p.lower)),
            "" if p is None else repr(float(p.upper)),
            f"{r.to_limit.squared.numerator}/{r.to_limit.squared.denominator}",
            repr(float(r.to_limit.lower)),
            repr(float(r.to_limit.upper)),
        ])
    return buf.getvalue()


def body_svg(body: ConvexBody, size=240, margin=20) -> str:
    """Static SVG of a planar body: axes and the hull polygon."""
    if body.dim != 2:
        raise DimensionError("SVG output is for planar bodies only")
    (x0, y0), (x1, y1) = body.bounding_box()
    x0, y0 = min(x0, 0), min(y0, 0)
    span = max(x1 - x0, y1 - y0, Fraction(1))
    scale = Fraction(size - 2 * margin) / span

    def tx(p):
        return float(margin + (p[0] - x0) * scale), float(size - margin - (p[1] - y0) * scale)

    ox, oy = tx((Fraction(0), Fraction(0)))
    poly = " ".join(f"{a:.3f},{b:.3f}" for a, b in (tx(v) for v in body.vertices))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n'
        f'  <line x1="0" y1="{oy:.3f}" x2="{size}" y2="{oy:.3f}" stroke="#888"/>\n'
        f'  <line x1="{ox:.3f}" y1="0" x2="{ox:.3f}" y2="{size}" stroke="#888"/>\n'
        f'  <polygon points="{poly}" fill="#8ab6d6" fill-opacity="0.6" stroke="#1f4e79"/>\n'
        "</svg>\n"
    )
