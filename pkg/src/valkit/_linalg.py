"""Small exact linear algebra over the rationals.

Everything works on lists of ``Fraction`` (or ints) and never touches floats.
The matrices involved here are tiny (fans of dimension <= 4), so plain
Gaussian elimination is all we need.
"""

from fractions import Fraction


def _as_fraction_matrix(rows):
    return [[Fraction(v) for v in row] for row in rows]


def rank(rows):
    m = _as_fraction_matrix(rows)
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c] / m[r][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def det(rows):
    m = _as_fraction_matrix(rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                factor = m[i][c] / m[c][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[c])]
    return result


def solve_coordinates(generators, target):
    """Return coefficients ``c`` with ``sum(c[i] * generators[i]) == target``.

    ``generators`` must be linearly independent.  Returns ``None`` when the
    target is not in their span.
    """
    gens = _as_fraction_matrix(generators)
    n = len(gens)
    t = [Fraction(v) for v in target]
    if n == 0:
        return () if all(v == 0 for v in t) else None
    dim = len(t)
    # augmented system: columns are generators, rows are ambient coordinates
    aug = [[gens[j][i] for j in range(n)] + [t[i]] for i in range(dim)]
    r = 0
    pivots = []
    for c in range(n):
        pivot = next((i for i in range(r, dim) if aug[i][c] != 0), None)
        if pivot is None:
            raise ValueError("generators are linearly dependent")
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(dim):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][n] != 0 for i in range(r, dim)):
        return None
    return tuple(aug[i][n] for i in range(n))


def inverse(rows):
    m = _as_fraction_matrix(rows)
    n = len(m)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))
