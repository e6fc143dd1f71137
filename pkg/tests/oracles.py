"""Brute-force reference computations, written independently of l0mod internals."""

from __future__ import annotations

import itertools
from fractions import Fraction


def grid_points(m: int, values=range(-2, 3)) -> list[tuple]:
    return list(itertools.product(values, repeat=m))


class LubOracle:
    """Least upper bounds on a finite grid by search over all upper bounds.

    Each grid point u gets a bitmask of the grid points v with u <= v
    coordinatewise.  The upper bounds of a family are the AND of its masks;
    the least upper bound is the point whose own mask equals that set, if any.
    """

    def __init__(self, m: int, values=range(-2, 3)):
        self.points = grid_points(m, values)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.up = []
        for u in self.points:
            mask = 0
            for j, v in enumerate(self.points):
                if all(a <= b for a, b in zip(u, v)):
                    mask |= 1 << j
            self.up.append(mask)
        self.by_mask = {mask: self.points[i] for i, mask in enumerate(self.up)}

    def upper_bounds(self, family) -> int:
        mask = (1 << len(self.points)) - 1
        for h in family:
            mask &= self.up[self.index[tuple(h)]]
        return mask

    def lub(self, family):
        return self.by_mask.get(self.upper_bounds(family))


def det(mat) -> Fraction:
    """Leibniz expansion; fine for the tiny matrices used here."""
    n = len(mat)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, p in enumerate(perm):
            term *= Fraction(mat[i][p])
        total += term
    return total


def minor_rank(vectors) -> int:
    """Rank of the matrix whose columns are ``vectors``: largest nonvanishing minor."""
    vectors = [tuple(v) for v in vectors]
    if not vectors or not vectors[0]:
        return 0
    rows, cols = len(vectors[0]), len(vectors)
    for k in range(min(rows, cols), 0, -1):
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                if det([[vectors[c][r] for c in ci] for r in ri]) != 0:
                    return k
    return 0


def grid_lambdas(xa, ya, za, steps: int = 1000, lo: int = 0, hi: int = 1) -> list[Fraction]:
    """All grid values lam = k/steps in [lo, hi] with lam*x + (1-lam)*y == z exactly."""
    out = []
    for k in range(lo * steps, hi * steps + 1):
        lam = Fraction(k, steps)
        if all(lam * Fraction(u) + (1 - lam) * Fraction(v) == Fraction(w) for u, v, w in zip(xa, ya, za)):
            out.append(lam)
    return out


def in_segment_1d(t, a, b, tol: float = 0.0) -> bool:
    lo, hi = min(a, b), max(a, b)
    return lo - tol <= t <= hi + tol
