"""Lexicographic tuples, the coordinate-wise order and antichain calculus.

Values of a rank-``k`` valuation are plain tuples of ``Fraction``; Python
already compares tuples lexicographically, so :func:`lex_cmp` only adds the
length check.  Exponents are tuples of ints indexed by a ray set, and an
:class:`Antichain` is a canonically sorted set of pairwise incomparable
exponents over a common index set.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .errors import DimensionError, EmptyAntichainError, IndexMismatchError

LexTuple = Tuple[Fraction, ...]
Exponent = Tuple[int, ...]


def lex_tuple(values) -> LexTuple:
    return tuple(Fraction(v) for v in values)


def lex_cmp(a, b) -> int:
    """Compare two value tuples lexicographically; returns -1, 0 or 1."""
    if len(a) != len(b):
        raise DimensionError(f"cannot compare tuples of length {len(a)} and {len(b)}")
    for x, y in zip(a, b):
        if x < y:
            return -1
        if x > y:
            return 1
    return 0


def lex_nonneg(a) -> bool:
    """True iff ``a`` is lexicographically >= 0 (first nonzero entry positive)."""
    for v in a:
        if v != 0:
            return v > 0
    return True


def cw_leq(beta, gamma) -> bool:
    if len(beta) != len(gamma):
        raise IndexMismatchError("exponents over different index sets")
    return all(b <= g for b, g in zip(beta, gamma))


def _minimal(points: Iterable[Exponent]) -> list[Exponent]:
    # sorting lexicographically guarantees every dominator of a point comes
    # before it, so a single pass against the kept list suffices
    kept: list[Exponent] = []
    for p in sorted(set(points)):
        if not any(all(k <= v for k, v in zip(q, p)) for q in kept):
            kept.append(p)
    return kept


def _check_antichain(elements) -> None:
    for i, p in enumerate(elements):
        for q in elements[i + 1:]:
            if cw_leq(p, q) or cw_leq(q, p):
                raise AssertionError(f"antichain elements {p} and {q} are comparable")


@dataclass(frozen=True)
class Antichain:
    """Finite antichain of exponents under the coordinate-wise order.

    Use :func:`min_cw` or :meth:`from_points` to build one from arbitrary
    points; the constructor itself only accepts data that already is a
    non-empty antichain.
    """

    index_set: Tuple[str, ...]
    elements: Tuple[Exponent, ...]

    def __post_init__(self):
        index_set = tuple(str(i) for i in self.index_set)
        if len(set(index_set)) != len(index_set):
            raise IndexMismatchError(f"repeated index in {index_set}")
        elements = tuple(sorted({tuple(int(c) for c in e) for e in self.elements}))
        if not elements:
            raise EmptyAntichainError("an antichain must be non-empty")
        for e in elements:
            if len(e) != len(index_set):
                raise IndexMismatchError(f"exponent {e} does not match index set {index_set}")
        _check_antichain(elements)
        object.__setattr__(self, "index_set", index_set)
        object.__setattr__(self, "elements", elements)

    @classmethod
    def from_points(cls, index_set, points) -> Antichain:
        return min_cw(points, index_set)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, item):
        return tuple(item) in self.elements

    def max_coordinate(self) -> int:
        return max((max(e) for e in self.elements if e), default=0)


def min_cw(points, index_set=None) -> Antichain:
    """Coordinate-wise minimal elements of a finite non-empty set of exponents."""
    pts = [tuple(int(c) for c in p) for p in points]
    if not pts:
        raise EmptyAntichainError("min_cw of an empty set (the zero function) is undefined")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise IndexMismatchError("exponents of different lengths")
    if index_set is None:
        index_set = tuple(str(i) for i in range(n))
    return Antichain(tuple(index_set), tuple(_minimal(pts)))


def antichain_project(a: Antichain, target) -> Antichain:
    """Project ``a`` onto the sub-index-set ``target`` and keep minimal elements."""
    target = tuple(str(t) for t in target)
    position = {name: i for i, name in enumerate(a.index_set)}
    missing = [t for t in target if t not in position]
    if missing:
        raise IndexMismatchError(f"indices {missing} are not in {a.index_set}")
    idx = [position[t] for t in target]
    return min_cw((tuple(e[i] for i in idx) for e in a.elements), target)


def _same_index(a: Antichain, b: Antichain) -> None:
    if a.index_set != b.index_set:
        raise IndexMismatchError(f"{a.index_set} != {b.index_set}")


def antichain_sum(a: Antichain, b: Antichain) -> Antichain:
    """Minimal elements of the Minkowski sum (bound for the product of two functions)."""
    _same_index(a, b)
    return min_cw(
        (tuple(x + y for x, y in zip(p, q)) for p in a.elements for q in b.elements),
        a.index_set,
    )


def antichain_union_min(a: Antichain, b: Antichain) -> Antichain:
    """Minimal elements of the union (bound for the sum of two functions)."""
    _same_index(a, b)
    return min_cw(a.elements + b.elements, a.index_set)


class AntichainFamily(Mapping):
    """Antichains indexed by face identifiers of a cone complex."""

    def __init__(self, entries: Mapping[str, Antichain]):
        self._entries = dict(sorted(entries.items()))

    def __getitem__(self, face_id):
        return self._entries[face_id]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, AntichainFamily):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __repr__(self):
        return f"AntichainFamily({self._entries!r})"


def project_family(facet_antichains: Mapping[str, Antichain], cx) -> AntichainFamily:
    """Extend antichains given on some faces to every face by projection.

    Each face takes the projection from the first listed face containing it;
    use :func:`is_coherent` to check that the choice did not matter.
    """
    entries = {}
    for fid, a in facet_antichains.items():
        entries[fid] = a
    for fid, a in facet_antichains.items():
        for tau in cx.proper_faces(fid):
            if tau not in entries:
                entries[tau] = antichain_project(a, cx.face(tau).rays)
    return AntichainFamily(entries)


def is_coherent(family: Mapping[str, Antichain], cx):
    """Check ``A^tau == min_cw(pr(A^sigma))`` for every face pair ``tau < sigma``.

    Returns ``(ok, violations)`` where violations are ``(tau, sigma)`` pairs.
    """
    missing = [fid for fid in cx.face_ids() if fid not in family]
    if missing:
        raise KeyError(f"family has no entry for faces {missing}")
    violations = []
    for sigma in cx.face_ids():
        a_sigma = family[sigma]
        if a_sigma.index_set != cx.face(sigma).rays:
            raise IndexMismatchError(f"antichain on {sigma} uses index set {a_sigma.index_set}")
        for tau in cx.proper_faces(sigma):
            if family[tau] != antichain_project(a_sigma, cx.face(tau).rays):
                violations.append((tau, sigma))
    return not violations, violations
