"""Finite monomial series over a named index set.

A :class:`MonomialSeries` is a finite map exponent -> nonzero rational.  It
stands in for an admissible expansion: every nonzero rational coefficient is
a unit at the deepest stratum, so the coordinate-wise minimal elements of the
support are exactly the antichain of the function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .errors import EmptyAntichainError, IndexMismatchError, NotAUnitError
from .order import Antichain, Exponent, min_cw


class MonomialSeries:
    """Immutable finite sum ``sum c_beta z^beta`` with exact rational coefficients."""

    __slots__ = ("vars", "laurent", "_terms", "_hash")

    def __init__(self, vars, terms=None, laurent=False):
        self.vars = tuple(str(v) for v in vars)
        if len(set(self.vars)) != len(self.vars):
            raise IndexMismatchError(f"repeated variable in {self.vars}")
        n = len(self.vars)
        acc: Dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise IndexMismatchError(f"exponent {e} does not match variables {self.vars}")
            if not laurent and any(x < 0 for x in e):
                raise ValueError(f"negative exponent {e} in a non-Laurent series")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}
        self.laurent = bool(laurent)
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, vars, c=1, laurent=False):
        return cls(vars, {(0,) * len(tuple(vars)): c}, laurent)

    @classmethod
    def monomial(cls, vars, exponent, c=1, laurent=False):
        return cls(vars, {tuple(exponent): c}, laurent)

    @classmethod
    def zero(cls, vars, laurent=False):
        return cls(vars, {}, laurent)

    # mapping-like access
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self):
        return list(self._terms)

    def coefficient(self, e):
        return self._terms.get(tuple(e), Fraction(0))

    def constant_term(self):
        return self.coefficient((0,) * len(self.vars))

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, MonomialSeries):
            return NotImplemented
        return self.vars == other.vars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(f"{v}^{k}" if k != 1 else v for v, k in zip(self.vars, e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)

    # arithmetic
    def _check(self, other):
        if self.vars != other.vars:
            raise IndexMismatchError(f"{self.vars} != {other.vars}")

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return add(self, other.scale(-1))

    def __mul__(self, other):
        if isinstance(other, MonomialSeries):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        return MonomialSeries(self.vars, {e: v * Fraction(c) for e, v in self._terms.items()}, self.laurent)

    def shift(self, gamma, laurent=None):
        """Multiply by ``z^gamma``."""
        gamma = tuple(gamma)
        out = {tuple(a + b for a, b in zip(e, gamma)): c for e, c in self._terms.items()}
        return MonomialSeries(self.vars, out, self.laurent if laurent is None else laurent)

    def truncate(self, box):
        return MonomialSeries(
            self.vars,
            {e: c for e, c in self._terms.items() if all(0 <= x <= b for x, b in zip(e, box))},
            self.laurent,
        )

    def as_laurent(self):
        return MonomialSeries(self.vars, self._terms, True)

    def as_polynomial(self):
        return MonomialSeries(self.vars, self._terms, False)

    def pow(self, n):
        out = MonomialSeries.constant(self.vars, 1, self.laurent)
        base = self
        while n:
            if n & 1:
                out = mul(out, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return out

    def restrict(self, names):
        """Set every variable outside ``names`` to zero and drop it."""
        names = tuple(str(n) for n in names)
        idx = [self.vars.index(n) for n in names]
        keep = [i for i in range(len(self.vars)) if i not in idx]
        out = {}
        for e, c in self._terms.items():
            if all(e[i] == 0 for i in keep):
                out[tuple(e[i] for i in idx)] = c
        return MonomialSeries(names, out, self.laurent)


def add(f: MonomialSeries, g: MonomialSeries) -> MonomialSeries:
    f._check(g)
    acc = dict(f._terms)
    for e, c in g._terms.items():
        acc[e] = acc.get(e, Fraction(0)) + c
    return MonomialSeries(f.vars, acc, f.laurent or g.laurent)


def mul(f: MonomialSeries, g: MonomialSeries) -> MonomialSeries:
    f._check(g)
    acc: Dict[Exponent, Fraction] = {}
    for e1, c1 in f._terms.items():
        for e2, c2 in g._terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            acc[e] = acc.get(e, Fraction(0)) + c1 * c2
    return MonomialSeries(f.vars, acc, f.laurent or g.laurent)


def mul_truncated(f: MonomialSeries, g: MonomialSeries, box) -> MonomialSeries:
    f._check(g)
    acc: Dict[Exponent, Fraction] = {}
    for e1, c1 in f._terms.items():
        for e2, c2 in g._terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            if all(0 <= x <= b for x, b in zip(e, box)):
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
    return MonomialSeries(f.vars, acc, f.laurent or g.laurent)


def support_min(f: MonomialSeries) -> Antichain:
    """Antichain of coordinate-wise minimal exponents of a nonzero polynomial."""
    if f.is_zero():
        raise EmptyAntichainError("the zero series has no antichain")
    if f.laurent and any(x < 0 for e in f.support() for x in e):
        raise ValueError("support_min needs a non-Laurent series; apply shift_factor first")
    return min_cw(f.support(), f.vars)


def shift_factor(f: MonomialSeries):
    """Write ``f = z^gamma * g`` with ``gamma`` the coordinate-wise minimum of the support."""
    if f.is_zero():
        raise EmptyAntichainError("cannot factor the zero series")
    supp = f.support()
    gamma = tuple(min(e[i] for e in supp) for i in range(len(f.vars)))
    g = MonomialSeries(f.vars, {tuple(a - b for a, b in zip(e, gamma)): c for e, c in f.items()}, False)
    return gamma, g


def _box_points(box):
    # product() enumerates in lexicographic order, so beta - gamma is always visited before beta
    return itertools.product(*(range(b + 1) for b in box))


def invert_unit(u: MonomialSeries, box) -> MonomialSeries:
    """Truncation to ``[0, box]`` of the power-series inverse of a unit."""
    box = tuple(int(b) for b in box)
    if len(box) != len(u.vars):
        raise IndexMismatchError("box does not match the variables")
    if any(b < 0 for b in box):
        raise ValueError("box bounds must be non-negative")
    if u.laurent and any(x < 0 for e in u.support() for x in e):
        raise ValueError("invert_unit needs a non-Laurent series")
    u0 = u.constant_term()
    if u0 == 0:
        raise NotAUnitError(f"constant term of {u!r} is zero")
    rest = [(e, c) for e, c in u.items() if any(e)]
    inv0 = 1 / u0
    g: Dict[Exponent, Fraction] = {}
    for beta in _box_points(box):
        s = Fraction(int(not any(beta)))
        for gam, c in rest:
            prev = tuple(b - x for b, x in zip(beta, gam))
            if min(prev) >= 0:
                v = g.get(prev)
                if v:
                    s -= c * v
        if s:
            g[beta] = s * inv0
    return MonomialSeries(u.vars, g)


def unit_power(u: MonomialSeries, exponent: int, box) -> MonomialSeries:
    """Truncation of ``u ** exponent`` for a unit ``u`` and any integer exponent.

    Uses the Euler-operator identity ``u * E(h) = exponent * h * E(u)`` for
    ``h = u^exponent`` (``E = sum z_i d/dz_i``), which yields a recurrence over
    the box costing one pass per support term of ``u``.
    """
    box = tuple(int(b) for b in box)
    u0 = u.constant_term()
    if u0 == 0:
        raise NotAUnitError(f"constant term of {u!r} is zero")
    rest = [(e, c, sum(e)) for e, c in u.items() if any(e)]
    e_ = Fraction(exponent)
    h: Dict[Exponent, Fraction] = {}
    for beta in _box_points(box):
        deg = sum(beta)
        if deg == 0:
            h[beta] = Fraction(u0) ** exponent
            continue
        s = Fraction(0)
        for gam, c, dg in rest:
            prev = tuple(b - x for b, x in zip(beta, gam))
            if min(prev) >= 0:
                v = h.get(prev)
                if v:
                    # coefficient of z^beta in u*E(h) - exponent*h*E(u)
                    s += c * v * ((deg - dg) - e_ * dg)
        if s:
            h[beta] = -s / (u0 * deg)
    return MonomialSeries(u.vars, h)


@dataclass(frozen=True)
class RationalFunctionRep:
    num: MonomialSeries
    den: MonomialSeries

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("denominator is the zero series")
        if self.num.vars != self.den.vars:
            raise IndexMismatchError("numerator and denominator use different variables")

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def from_series(cls, f: MonomialSeries):
        return cls(f, MonomialSeries.constant(f.vars, 1))


# ---------------------------------------------------------------------------
# admissible expansions with unit coefficients


@dataclass(frozen=True)
class AdmissibleExpansion:
    """Finite expansion ``sum_beta u_beta z^beta`` whose coefficients are units.

    Each coefficient is a polynomial with nonzero constant term.  Rewriting
    ``u z^gamma`` as ``u (1 - z^delta) z^gamma + u z^(gamma + delta)`` changes
    the expansion but not the function, and must not change the antichain.
    """

    vars: Tuple[str, ...]
    terms: Tuple[Tuple[Exponent, MonomialSeries], ...]

    def __post_init__(self):
        for beta, u in self.terms:
            if u.vars != self.vars:
                raise IndexMismatchError("coefficient over a different index set")
            if u.constant_term() == 0:
                raise NotAUnitError(f"coefficient of {beta} is not a unit")

    @classmethod
    def from_series(cls, f: MonomialSeries):
        one = lambda c: MonomialSeries.constant(f.vars, c)  # noqa: E731
        return cls(f.vars, tuple((e, one(c)) for e, c in f.items()))

    def support(self):
        return [beta for beta, _ in self.terms]

    def expand(self) -> MonomialSeries:
        out = MonomialSeries.zero(self.vars)
        for beta, u in self.terms:
            out = add(out, u.shift(beta))
        return out

    def rewrite(self, index, delta) -> AdmissibleExpansion:
        """Split term ``index`` along ``z^delta``; merges terms that land on one exponent."""
        beta, u = self.terms[index]
        delta = tuple(delta)
        if not any(delta) or min(delta) < 0:
            raise ValueError("delta must be a nonzero non-negative exponent")
        one = MonomialSeries.constant(self.vars, 1)
        kept = mul(u, add(one, MonomialSeries.monomial(self.vars, delta, -1)))
        moved = tuple(a + b for a, b in zip(beta, delta))
        merged: Dict[Exponent, MonomialSeries] = {}
        for i, (b, c) in enumerate(self.terms):
            merged[b] = kept if i == index else c
        merged[moved] = add(merged[moved], u) if moved in merged else u
        terms = tuple((b, c) for b, c in sorted(merged.items()) if not c.is_zero())
        return AdmissibleExpansion(self.vars, terms)
