"""Small dense linear algebra over exact rationals, with a float fallback.

Matrices are tuples of row tuples.  Exact entries go through fraction-free
(Bareiss) elimination; as soon as a float appears the work is handed to numpy
with a relative singular-value threshold.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NonInvertibleError
from .measure import DEFAULT_TOL, is_exact, to_number

Matrix = tuple  # tuple[tuple[number, ...], ...]


def _all_exact(rows) -> bool:
    return all(is_exact(v) for row in rows for v in row)


def shape(a: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(a)
    return rows, (len(a[0]) if rows else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum((aij * vj for aij, vj in zip(row, v)), 0) for row in a)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*b)) if b else []
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), 0) for col in cols) for row in a)


def transpose(a: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not a:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*a))


def echelon_pivots(a: Sequence[Sequence], tol: float = DEFAULT_TOL) -> tuple[int, ...]:
    """Pivot column indices of a row echelon form of ``a``.

    The number of pivots is the rank.  Exact input uses Bareiss elimination,
    which keeps every intermediate entry an integer multiple of a minor.
    """
    nrows, ncols = shape(a)
    if nrows == 0 or ncols == 0:
        return ()
    if not _all_exact(a):
        return _float_pivots(a, tol)
    # clear denominators row by row so Bareiss runs on integers
    m = []
    for row in a:
        den = math.lcm(*(Fraction(v).denominator for v in row))
        m.append([int(Fraction(v) * den) for v in row])
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        pivots.append(c)
        r += 1
    return tuple(pivots)


def _float_pivots(a, tol: float) -> tuple[int, ...]:
    arr = np.asarray(a, dtype=float)
    rank = int(np.linalg.matrix_rank(arr, rtol=tol)) if arr.size else 0
    # greedy column selection consistent with the numerical rank
    chosen: list[int] = []
    for c in range(arr.shape[1]):
        if len(chosen) == rank:
            break
        trial = arr[:, chosen + [c]]
        if np.linalg.matrix_rank(trial, rtol=tol) == len(chosen) + 1:
            chosen.append(c)
    return tuple(chosen)


def rank(a: Sequence[Sequence], tol: float = DEFAULT_TOL) -> int:
    return len(echelon_pivots(a, tol))


def inverse(a: Sequence[Sequence], tol: float = DEFAULT_TOL) -> Matrix:
    """Inverse of a square matrix; raises NonInvertibleError when singular."""
    n, ncols = shape(a)
    if n != ncols:
        raise NonInvertibleError(f"{n}x{ncols} matrix is not square")
    if n == 0:
        return ()
    if not _all_exact(a):
        arr = np.asarray(a, dtype=float)
        if np.linalg.matrix_rank(arr, rtol=tol) < n:
            raise NonInvertibleError("singular matrix")
        return tuple(tuple(float(v) for v in row) for row in np.linalg.inv(arr))
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise NonInvertibleError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [v / piv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [u - f * v for u, v in zip(aug[i], aug[c])]
    return tuple(tuple(to_number(v) for v in row[n:]) for row in aug)
