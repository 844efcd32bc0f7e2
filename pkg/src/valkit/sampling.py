"""Seeded random generators for the invariant suites and experiments."""

from __future__ import annotations

import random
from fractions import Fraction

from .complex import Fan, TangentPoint, WeightMatrix, stellar_subdivide
from .series import MonomialSeries


def random_polynomial(rng: random.Random, vars, max_terms=8, max_exp=4, laurent=False) -> MonomialSeries:
    """Nonzero polynomial with small integer coefficients."""
    n = len(vars)
    low = -max_exp if laurent else 0
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = tuple(rng.randint(low, max_exp) for _ in range(n))
            terms[e] = rng.choice([-3, -2, -1, 1, 2, 3, Fraction(1, 2), Fraction(-5, 3)])
        f = MonomialSeries(vars, terms, laurent)
        if not f.is_zero():
            return f


def random_lex_column(rng: random.Random, k, high=5, positive=False):
    while True:
        col = [rng.randint(-high, high) for _ in range(k)]
        first = next((i for i, v in enumerate(col) if v), None)
        if first is None:
            if positive:
                continue
            return tuple(Fraction(0) for _ in col)
        col[first] = abs(col[first])
        if rng.random() < 0.3:
            col[rng.randrange(k)] = Fraction(rng.randint(-7, 7), rng.randint(1, 4))
            first = next((i for i, v in enumerate(col) if v), None)
            if first is None or col[first] < 0:
                continue
        return tuple(Fraction(v) for v in col)


def random_weight_matrix(rng: random.Random, face, index_set, rank=None, high=6, positive=True) -> WeightMatrix:
    k = rank or rng.randint(1, 3)
    cols = tuple(random_lex_column(rng, k, high, positive) for _ in index_set)
    return WeightMatrix(face, tuple(index_set), cols)


def random_tangent_point(rng: random.Random, index_set, rank, face="s", high=4) -> TangentPoint:
    """Tangent point whose weight columns are random lex-non-negative vectors."""
    cols = [random_lex_column(rng, rank, high) for _ in index_set]
    x = tuple(c[0] for c in cols)
    ws = tuple(tuple(c[j] for c in cols) for j in range(1, rank))
    return TangentPoint(face, tuple(index_set), x, ws)


def random_flag(rng: random.Random, vars, k=None):
    k = k or rng.randint(1, len(vars))
    return rng.sample(list(vars), k)


def random_stellar_tower(rng: random.Random, fan: Fan, depth):
    """``[fan, fan_1, ..., fan_depth]`` with each step a unimodular stellar subdivision.

    Subdividing a unimodular cone at the sum of some of its rays keeps the
    fan unimodular, so the new ray is always such a sum.
    """
    tower = [fan]
    for _ in range(depth):
        cur = tower[-1]
        fid = rng.choice(cur.facet_ids())
        vecs = cur.face_vectors(fid)
        size = rng.randint(2, len(vecs)) if len(vecs) >= 2 else 1
        chosen = rng.sample(list(vecs), size)
        v = tuple(sum(r[i] for r in chosen) for i in range(cur.dim))
        tower.append(stellar_subdivide(cur, v))
    return tower
