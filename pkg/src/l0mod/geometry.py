"""L0-line segments and L0-lines.

``[x, y] = {lam x + (1 - lam) y : 0 <= lam <= 1}`` and ``l(x, y)`` drops the
bounds.  Both are solved atom by atom: where x(a) != y(a) the coefficient is
forced, where x(a) == y(a) any coefficient works and we return 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .certificate import Certificate
from .errors import SpaceMismatchError
from .maps import MapSpec, inverse_of
from .measure import RandomScalar, div, is_exact
from .modules import ModuleElement
from .sampling import (DEFAULT_PLAN, SamplingPlan, grid, indicator_mixes, line_lambdas,
                       random_unit_number, segment_lambdas)


def _solve_atom(xa, ya, za, space, bounded: bool):
    """Coefficient at one atom, or None when z(a) is not on the (bounded) line."""
    d = [u - v for u, v in zip(xa, ya)]
    w = [u - v for u, v in zip(za, ya)]
    scale = max((abs(u) for u in d), default=0) + 1
    if all(space.is_zero(u) for u in d):
        return 0 if all(space.is_zero(u, scale) for u in w) else None
    i = max(range(len(d)), key=lambda j: abs(d[j]))
    lam = div(w[i], d[i])
    if not all(space.is_zero(wj - lam * dj, scale) for wj, dj in zip(w, d)):
        return None
    if bounded:
        exact = is_exact(lam)
        lo_ok = lam >= 0 or (not exact and lam >= -space.tol)
        hi_ok = lam <= 1 or (not exact and lam <= 1 + space.tol)
        if not (lo_ok and hi_ok):
            return None
    return lam


def _solve(x: ModuleElement, y: ModuleElement, z: ModuleElement, bounded: bool):
    """(lambda, None) on success, (None, first bad atom) otherwise."""
    if not (x.module == y.module == z.module):
        raise SpaceMismatchError("segment endpoints and point must share a module")
    space = x.space
    lams = []
    for a in space.atoms:
        lam = _solve_atom(x[a], y[a], z[a], space, bounded)
        if lam is None:
            return None, a
        lams.append(lam)
    return RandomScalar(space, tuple(lams)), None


@dataclass(frozen=True)
class Segment:
    x: ModuleElement
    y: ModuleElement

    def solve(self, z: ModuleElement):
        return _solve(self.x, self.y, z, bounded=True)

    def __contains__(self, z: ModuleElement) -> bool:
        return self.solve(z)[0] is not None

    def point(self, lam: RandomScalar) -> ModuleElement:
        return lam * self.x + (1 - lam) * self.y


@dataclass(frozen=True, eq=False)
class Line:
    """l(x, y).  Two lines are equal when they are equal as sets, which is
    decided by mutual membership of the generating points."""

    x: ModuleElement
    y: ModuleElement

    def solve(self, z: ModuleElement):
        return _solve(self.x, self.y, z, bounded=False)

    def __contains__(self, z: ModuleElement) -> bool:
        return self.solve(z)[0] is not None

    def point(self, lam: RandomScalar) -> ModuleElement:
        return lam * self.x + (1 - lam) * self.y

    def same_set(self, other: "Line") -> bool:
        return (other.x in self and other.y in self and self.x in other and self.y in other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Line):
            return NotImplemented
        return self.same_set(other)

    __hash__ = None


def segment_membership(seg: Segment, z: ModuleElement) -> RandomScalar | None:
    return seg.solve(z)[0]


def line_membership(line: Line, z: ModuleElement) -> RandomScalar | None:
    return line.solve(z)[0]


def _symbolic(T: MapSpec, check: str) -> Certificate | None:
    """Atomwise affine maps send lam x + (1-lam) y to lam Tx + (1-lam) Ty for
    every lam, which settles both image equalities without sampling."""
    if T.affine_parts() is None:
        return None
    return Certificate(check, True, evidence={"method": "symbolic", "reason": "atomwise affine"})


def _image_check(T: MapSpec, x, y, lambdas, mus, bounded: bool, check: str, evidence: dict) -> Certificate:
    tx, ty = T(x), T(y)
    inv = inverse_of(T)
    for lam in lambdas:
        z = lam * x + (1 - lam) * y
        tz = T(z)
        mu, bad = _solve(tx, ty, tz, bounded)
        if mu is None:
            return Certificate(check, False, witness={
                "direction": "forward", "x": x, "y": y, "lambda": lam, "point": z,
                "image": tz, "atom": bad}, evidence=evidence)
    for mu in mus:
        w = mu * tx + (1 - mu) * ty
        z = inv(w)
        lam, bad = _solve(x, y, z, bounded)
        if lam is None:
            return Certificate(check, False, witness={
                "direction": "reverse", "x": x, "y": y, "mu": mu, "point": w,
                "preimage": z, "atom": bad}, evidence=evidence)
    return Certificate(check, True, evidence=evidence)


def segment_image_equals(T: MapSpec, x: ModuleElement, y: ModuleElement,
                         plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0,
                         symbolic: bool = True) -> Certificate:
    """Sampled check of T([x, y]) == [T(x), T(y)] in both directions.

    Raises NonInvertibleError when a sampled check is needed and T has no
    inverse in the grammar.
    """
    if symbolic:
        cert = _symbolic(T, "segments")
        if cert is not None:
            return cert
    rng = random.Random(seed)
    space = T.space
    lambdas = segment_lambdas(space, rng, plan)
    if plan.reverse_grid_steps:
        mus = [space.constant(v) for v in grid(plan.reverse_grid_steps)]
        mus += [RandomScalar(space, tuple(random_unit_number(rng, space.mode, plan.max_den)
                                          for _ in space.atoms)) for _ in range(plan.random_lambdas)]
        if plan.indicator_mixes:
            mus += indicator_mixes(space, rng, plan, unit=True)
    else:
        mus = segment_lambdas(space, rng, plan)
    evidence = {"method": "sampled", "seed": seed, "lambdas": len(lambdas), "mus": len(mus)}
    return _image_check(T, x, y, lambdas, mus, True, "segments", evidence)


def line_image_equals(T: MapSpec, x: ModuleElement, y: ModuleElement,
                      plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0,
                      symbolic: bool = True) -> Certificate:
    """Sampled check of T(l(x, y)) == l(T(x), T(y)) in both directions."""
    if symbolic:
        cert = _symbolic(T, "lines")
        if cert is not None:
            return cert
    rng = random.Random(seed)
    lambdas = line_lambdas(T.space, rng, plan)
    mus = line_lambdas(T.space, rng, plan)
    evidence = {"method": "sampled", "seed": seed, "lambdas": len(lambdas), "mus": len(mus)}
    return _image_check(T, x, y, lambdas, mus, False, "lines", evidence)
