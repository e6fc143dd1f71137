"""Mappings between regular modules, built from a small closed grammar.

A map is one of

* ``Atomwise``: atom ``a`` is sent through its own body R^d(a) -> R^d'(a)
  (affine, coordinatewise power, coordinatewise real root, coordinatewise
  polynomial);
* ``Permuted``: the output of an inner map is read at permuted atoms,
  ``(Tx)(a) = inner(x)(perm[a])``;
* ``Composed``: parts applied left to right;
* ``Translated``: an inner map plus a constant offset.

Because the grammar is closed the checkers can settle some questions
structurally (atomwise maps are stable) and fall back to seeded sampling
for the rest.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .certificate import Certificate
from .errors import DimensionError, NonInvertibleError, PreconditionError, SpaceMismatchError
from .measure import RandomScalar, SampleSpace, div, indicator, is_exact, to_number
from .modules import ModuleElement, RegularModule
from .sampling import (DEFAULT_PLAN, SamplingPlan, events, point_pairs, random_element,
                       scalar_samples, structured_points)


# --------------------------------------------------------------------------
# per-atom bodies


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def real_root(v, k: int):
    """Real k-th root for odd k; exact when v is an exact perfect power."""
    if is_exact(v):
        f = Fraction(v)
        sign = -1 if f < 0 else 1
        p, q = abs(f.numerator), f.denominator
        rp, rq = _iroot(p, k), _iroot(q, k)
        if rp ** k == p and rq ** k == q:
            return to_number(Fraction(sign * rp, rq))
        v = float(v)
    return -((-v) ** (1.0 / k)) if v < 0 else v ** (1.0 / k)


@dataclass(frozen=True)
class Affine:
    """v -> matrix @ v + offset."""

    matrix: tuple
    offset: tuple | None = None

    def __post_init__(self):
        matrix = tuple(tuple(row) for row in self.matrix)
        offset = (0,) * len(matrix) if self.offset is None else tuple(self.offset)
        if len(offset) != len(matrix):
            raise DimensionError("offset length must match the matrix row count")
        if len({len(r) for r in matrix}) > 1:
            raise DimensionError("ragged matrix")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def identity(cls, d: int) -> "Affine":
        return cls(linalg.identity(d))

    def in_dim(self, d: int) -> int:
        ncols = len(self.matrix[0]) if self.matrix else d
        if ncols != d:
            raise DimensionError(f"matrix has {ncols} columns, atom dimension is {d}")
        return d

    def out_dim(self, d: int) -> int:
        self.in_dim(d)
        return len(self.matrix)

    def apply(self, v: tuple) -> tuple:
        return tuple(u + b for u, b in zip(linalg.matvec(self.matrix, v), self.offset))

    def inverse(self, tol: float) -> "Affine":
        inv = linalg.inverse(self.matrix, tol)
        return Affine(inv, tuple(-u for u in linalg.matvec(inv, self.offset)))

    @property
    def affine(self):
        return self.matrix, self.offset


@dataclass(frozen=True)
class Power:
    """Coordinatewise v -> v**k.  Bijective exactly when k is odd."""

    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("power must be a positive integer")

    def out_dim(self, d: int) -> int:
        return d

    def apply(self, v: tuple) -> tuple:
        return tuple(u ** self.k for u in v)

    def inverse(self, tol: float):
        if self.k % 2 == 0:
            raise NonInvertibleError(f"even power {self.k} is not injective")
        return Power(1) if self.k == 1 else Root(self.k)

    @property
    def affine(self):
        return None


@dataclass(frozen=True)
class Root:
    """Coordinatewise real k-th root, k odd."""

    k: int

    def __post_init__(self):
        if self.k < 1 or self.k % 2 == 0:
            raise ValueError("root order must be a positive odd integer")

    def out_dim(self, d: int) -> int:
        return d

    def apply(self, v: tuple) -> tuple:
        return tuple(real_root(u, self.k) for u in v)

    def inverse(self, tol: float):
        return Power(self.k)

    @property
    def affine(self):
        return None


@dataclass(frozen=True)
class Poly:
    """Coordinatewise polynomial with coefficients (c0, c1, c2, ...)."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs or (0,))

    def out_dim(self, d: int) -> int:
        return d

    def _eval(self, u):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def apply(self, v: tuple) -> tuple:
        return tuple(self._eval(u) for u in v)

    def inverse(self, tol: float):
        if len(self.coeffs) == 2 and self.coeffs[1] != 0:
            c0, c1 = self.coeffs
            return Poly((-div(c0, c1), div(1, c1)))
        raise NonInvertibleError(f"polynomial {self.coeffs} has no inverse in the grammar")

    @property
    def affine(self):
        return None


def _poly_affine(body: Poly, d: int):
    if len(body.coeffs) > 2:
        return None
    c0 = body.coeffs[0]
    c1 = body.coeffs[1] if len(body.coeffs) == 2 else 0
    return (tuple(tuple(c1 if i == j else 0 for j in range(d)) for i in range(d)), (c0,) * d)


# --------------------------------------------------------------------------
# the map grammar


class MapSpec:
    """Base class.  Subclasses are frozen dataclasses with ``domain`` and
    ``codomain`` modules and an optional explicit ``inverse``."""

    domain: RegularModule
    codomain: RegularModule
    inverse: "MapSpec | None"

    def __call__(self, x: ModuleElement) -> ModuleElement:
        return evaluate(self, x)

    def _eval(self, x: ModuleElement) -> ModuleElement:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def space(self) -> SampleSpace:
        return self.domain.space

    def structurally_stable(self) -> bool:
        return False

    def affine_parts(self):
        """Per-atom (matrix, offset) if the map is atomwise affine by construction."""
        return None

    def _certify_inverse(self) -> None:
        if self.inverse is None:
            return
        inv = self.inverse
        if inv.domain != self.codomain or inv.codomain != self.domain:
            raise DimensionError("explicit inverse has mismatched modules")
        rng = random.Random(0)
        pts = structured_points(self.domain) + [random_element(self.domain, rng) for _ in range(4)]
        for x in pts:
            if not inv(self(x)).equals(x):
                raise NonInvertibleError(f"explicit inverse fails the round trip at {x}")
        qts = structured_points(self.codomain) + [random_element(self.codomain, rng) for _ in range(4)]
        for y in qts:
            if not self(inv(y)).equals(y):
                raise NonInvertibleError(f"explicit inverse fails the round trip at {y}")


@dataclass(frozen=True, eq=False)
class Atomwise(MapSpec):
    domain: RegularModule
    bodies: tuple
    inverse: MapSpec | None = field(default=None, repr=False)
    codomain: RegularModule = field(init=False, repr=False)

    def __post_init__(self):
        bodies = tuple(self.bodies)
        if len(bodies) == 1 and self.domain.space.m > 1:
            bodies = bodies * self.domain.space.m
        if len(bodies) != self.domain.space.m:
            raise DimensionError(f"need one body per atom ({self.domain.space.m}), got {len(bodies)}")
        object.__setattr__(self, "bodies", bodies)
        out = tuple(b.out_dim(d) for b, d in zip(bodies, self.domain.dims))
        object.__setattr__(self, "codomain", RegularModule(self.domain.space, out))
        self._certify_inverse()

    def _eval(self, x):
        vecs = tuple(b.apply(v) for b, v in zip(self.bodies, x.vecs))
        return ModuleElement._trusted(self.codomain, vecs)

    def structurally_stable(self) -> bool:
        return True

    def affine_parts(self):
        parts = []
        for b, d in zip(self.bodies, self.domain.dims):
            p = b.affine if not isinstance(b, Poly) else _poly_affine(b, d)
            if p is None:
                return None
            parts.append(p)
        return tuple(parts)


@dataclass(frozen=True, eq=False)
class Permuted(MapSpec):
    perm: tuple
    inner: MapSpec
    inverse: MapSpec | None = field(default=None, repr=False)
    domain: RegularModule = field(init=False, repr=False)
    codomain: RegularModule = field(init=False, repr=False)

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        m = self.inner.space.m
        if sorted(perm) != list(range(m)):
            raise ValueError(f"{perm} is not a permutation of 0..{m - 1}")
        dims = self.inner.codomain.dims
        for a, p in enumerate(perm):
            if dims[p] != dims[a]:
                raise DimensionError(f"permutation sends atom {a} (dim {dims[a]}) to atom {p} (dim {dims[p]})")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "domain", self.inner.domain)
        object.__setattr__(self, "codomain", self.inner.codomain)
        self._certify_inverse()

    def _eval(self, x):
        y = self.inner(x)
        return ModuleElement(self.codomain, tuple(y[p] for p in self.perm))

    def is_identity_perm(self) -> bool:
        return all(a == p for a, p in enumerate(self.perm))

    def structurally_stable(self) -> bool:
        return self.is_identity_perm() and self.inner.structurally_stable()

    def affine_parts(self):
        return self.inner.affine_parts() if self.is_identity_perm() else None


@dataclass(frozen=True, eq=False)
class Composed(MapSpec):
    parts: tuple
    inverse: MapSpec | None = field(default=None, repr=False)
    domain: RegularModule = field(init=False, repr=False)
    codomain: RegularModule = field(init=False, repr=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("a composition needs at least one part")
        for f, g in zip(parts, parts[1:]):
            if f.codomain != g.domain:
                raise DimensionError("composed parts do not chain")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "domain", parts[0].domain)
        object.__setattr__(self, "codomain", parts[-1].codomain)
        self._certify_inverse()

    def _eval(self, x):
        for part in self.parts:
            x = part(x)
        return x

    def structurally_stable(self) -> bool:
        return all(p.structurally_stable() for p in self.parts)

    def affine_parts(self):
        acc = None
        for p in self.parts:
            nxt = p.affine_parts()
            if nxt is None:
                return None
            if acc is None:
                acc = nxt
                continue
            # (M2, b2) after (M1, b1) is (M2 M1, M2 b1 + b2)
            acc = tuple((linalg.matmul(m2, m1),
                         tuple(u + v for u, v in zip(linalg.matvec(m2, b1), b2)))
                        for (m1, b1), (m2, b2) in zip(acc, nxt))
        return acc


@dataclass(frozen=True, eq=False)
class Translated(MapSpec):
    inner: MapSpec
    offset: ModuleElement
    inverse: MapSpec | None = field(default=None, repr=False)
    domain: RegularModule = field(init=False, repr=False)
    codomain: RegularModule = field(init=False, repr=False)

    def __post_init__(self):
        if self.offset.module != self.inner.codomain:
            raise DimensionError("offset must live in the inner map's codomain")
        object.__setattr__(self, "domain", self.inner.domain)
        object.__setattr__(self, "codomain", self.inner.codomain)
        self._certify_inverse()

    def _eval(self, x):
        return self.inner(x) + self.offset

    def structurally_stable(self) -> bool:
        return self.inner.structurally_stable()

    def affine_parts(self):
        inner = self.inner.affine_parts()
        if inner is None:
            return None
        return tuple((m, tuple(u + v for u, v in zip(b, off)))
                     for (m, b), off in zip(inner, self.offset.vecs))


def identity_map(module: RegularModule) -> Atomwise:
    return Atomwise(module, tuple(Affine.identity(d) for d in module.dims))


def affine_map(module: RegularModule, matrices: Sequence, offset: ModuleElement | None = None) -> MapSpec:
    """Atomwise x(a) -> matrices[a] @ x(a), optionally translated."""
    lin = Atomwise(module, tuple(Affine(mat) for mat in matrices))
    return lin if offset is None else Translated(lin, offset)


def evaluate(T: MapSpec, x: ModuleElement) -> ModuleElement:
    if not isinstance(x, ModuleElement):
        raise TypeError(f"expected a ModuleElement, got {type(x).__name__}")
    if x.module is not T.domain and x.module != T.domain:
        if x.space != T.domain.space:
            raise SpaceMismatchError("element lives on a different sample space than the map")
        raise DimensionError(f"element has dims {x.module.dims}, map expects {T.domain.dims}")
    return T._eval(x)


def inverse_of(T: MapSpec) -> MapSpec:
    """An evaluable inverse of T, certified by a round trip on samples."""
    if T.inverse is not None:
        return T.inverse
    inv = _derive_inverse(T)
    rng = random.Random(0)
    pts = structured_points(T.domain) + [random_element(T.domain, rng) for _ in range(4)]
    for x in pts:
        if not inv(T(x)).equals(x):
            raise NonInvertibleError(f"derived inverse fails the round trip at {x}")
    return inv


def _derive_inverse(T: MapSpec) -> MapSpec:
    if T.inverse is not None:
        return T.inverse
    tol = T.space.tol
    if isinstance(T, Atomwise):
        bodies = []
        for a, b in enumerate(T.bodies):
            try:
                bodies.append(b.inverse(tol))
            except NonInvertibleError as exc:
                raise NonInvertibleError(f"atom {a}: {exc}") from None
        return Atomwise(T.codomain, tuple(bodies))
    if isinstance(T, Permuted):
        back = [0] * len(T.perm)
        for a, p in enumerate(T.perm):
            back[p] = a
        unperm = Permuted(tuple(back), identity_map(T.codomain))
        return Composed((unperm, _derive_inverse(T.inner)))
    if isinstance(T, Composed):
        return Composed(tuple(_derive_inverse(p) for p in reversed(T.parts)))
    if isinstance(T, Translated):
        shift = Translated(identity_map(T.codomain), -T.offset)
        return Composed((shift, _derive_inverse(T.inner)))
    raise NonInvertibleError(f"cannot invert {type(T).__name__}")


def is_invertible(T: MapSpec) -> Certificate:
    try:
        inverse_of(T)
    except NonInvertibleError as exc:
        return Certificate("invertible", False, witness={"reason": str(exc)})
    return Certificate("invertible", True, evidence={"method": "derived inverse, round trip"})


# --------------------------------------------------------------------------
# stability and locality


def is_stable(T: MapSpec, plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0,
              structural: bool = True) -> Certificate:
    """T(I_A x + I_{A^c} y) == I_A T(x) + I_{A^c} T(y) for tested A, x, y."""
    if structural and T.structurally_stable():
        return Certificate("stable", True, evidence={"method": "structural"})
    rng = random.Random(seed)
    evs = events(T.space, rng, plan)
    pairs = point_pairs(T.domain, rng, plan)
    checked = 0
    for x, y in pairs:
        tx, ty = T(x), T(y)
        for ev in evs:
            ia, ic = indicator(ev), indicator(~ev)
            lhs = T(ia * x + ic * y)
            rhs = ia * tx + ic * ty
            checked += 1
            if not lhs.equals(rhs):
                return Certificate("stable", False,
                                   witness={"event": ev, "x": x, "y": y, "lhs": lhs, "rhs": rhs},
                                   evidence={"method": "sampled", "seed": seed, "checked": checked})
    return Certificate("stable", True, evidence={
        "method": "sampled", "seed": seed, "events": len(evs), "pairs": len(pairs), "checked": checked})


def is_local(T: MapSpec, plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0) -> Certificate:
    """I_A T(x) == I_A T(I_A x) for tested A and x."""
    rng = random.Random(seed)
    evs = events(T.space, rng, plan)
    pairs = point_pairs(T.domain, rng, plan)
    points = [p for pair in pairs for p in pair]
    checked = 0
    for x in points:
        tx = T(x)
        for ev in evs:
            ia = indicator(ev)
            lhs = ia * tx
            rhs = ia * T(ia * x)
            checked += 1
            if not lhs.equals(rhs):
                return Certificate("local", False,
                                   witness={"event": ev, "x": x, "lhs": lhs, "rhs": rhs},
                                   evidence={"method": "sampled", "seed": seed, "checked": checked})
    return Certificate("local", True, evidence={
        "method": "sampled", "seed": seed, "events": len(evs), "points": len(points), "checked": checked})


# --------------------------------------------------------------------------
# ring endomorphisms and semilinearity


@dataclass(frozen=True)
class EndoCandidate:
    """phi: L0 -> L0 with phi(xi)(a) = f_{perm[a]}(xi(perm[a]))."""

    space: SampleSpace
    bodies: tuple
    perm: tuple | None = None

    def __post_init__(self):
        bodies = tuple(self.bodies)
        if len(bodies) == 1:
            bodies = bodies * self.space.m
        if len(bodies) != self.space.m:
            raise DimensionError("need one body per atom")
        for b in bodies:
            if b.out_dim(1) != 1:
                raise DimensionError("endomorphism bodies must be scalar")
        object.__setattr__(self, "bodies", bodies)
        if self.perm is not None:
            perm = tuple(int(p) for p in self.perm)
            if sorted(perm) != list(self.space.atoms):
                raise ValueError(f"{perm} is not a permutation")
            object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, space: SampleSpace) -> "EndoCandidate":
        return cls(space, (Affine(((1,),)),))

    def __call__(self, xi: RandomScalar) -> RandomScalar:
        if xi.space != self.space:
            raise SpaceMismatchError("scalar on a different sample space")
        perm = self.perm or tuple(self.space.atoms)
        return RandomScalar(self.space, tuple(self.bodies[p].apply((xi[p],))[0] for p in perm))


def is_semilinear(T: MapSpec, sigma: EndoCandidate, plan: SamplingPlan = DEFAULT_PLAN,
                  seed: int = 0) -> Certificate:
    """T(x+y) == T(x)+T(y) and T(xi x) == sigma(xi) T(x) on samples."""
    zero = T.domain.zero()
    if not T(zero).equals(T.codomain.zero()):
        raise PreconditionError("semilinearity is only checked for maps with T(0) = 0")
    rng = random.Random(seed)
    pairs = point_pairs(T.domain, rng, plan)
    for x, y in pairs:
        lhs, rhs = T(x + y), T(x) + T(y)
        if not lhs.equals(rhs):
            return Certificate("semilinear", False, witness={
                "law": "additive", "x": x, "y": y, "lhs": lhs, "rhs": rhs}, evidence={"seed": seed})
    scalars = list(scalar_samples(T.space, rng, plan))
    points = [x for x, _ in pairs]
    for x in points:
        tx = T(x)
        for xi in scalars:
            lhs, rhs = T(xi * x), sigma(xi) * tx
            if not lhs.equals(rhs):
                return Certificate("semilinear", False, witness={
                    "law": "homogeneous", "xi": xi, "x": x, "lhs": lhs, "rhs": rhs},
                    evidence={"seed": seed})
    return Certificate("semilinear", True, evidence={
        "seed": seed, "pairs": len(pairs), "scalars": len(scalars)})


ENDO_HYPOTHESES = ("local", "additive", "multiplicative", "unital")


def endo_check(phi: EndoCandidate, plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0,
               n_random: int = 16) -> Certificate:
    """Test the four hypotheses of the identity lemma, then its conclusion.

    Every hypothesis is evaluated (the per-hypothesis verdicts are in
    ``evidence["hypotheses"]``); the witness is that of the first failure.
    When all four hold on the samples, phi must agree with the identity on
    every sample.
    """
    space = phi.space
    rng = random.Random(seed)
    samples = list(scalar_samples(space, rng, plan, n_random=n_random))
    evs = events(space, rng, plan)
    verdicts: dict[str, bool] = {}
    witnesses: dict[str, dict] = {}

    def fail(name, **w):
        verdicts[name] = False
        witnesses.setdefault(name, w)

    # indicators first: they are the scalars locality is about
    for xi in [ev.indicator() for ev in evs] + samples:
        fx = phi(xi)
        for ev in evs:
            ia = indicator(ev)
            if not (ia * fx).equals(ia * phi(ia * xi)):
                fail("local", event=ev, xi=xi, lhs=ia * fx, rhs=ia * phi(ia * xi))
                break
        if "local" in witnesses:
            break
    verdicts.setdefault("local", True)

    for xi, eta in itertools.product(samples, repeat=2):
        if not phi(xi + eta).equals(phi(xi) + phi(eta)):
            fail("additive", xi=xi, eta=eta, lhs=phi(xi + eta), rhs=phi(xi) + phi(eta))
            break
    verdicts.setdefault("additive", True)

    for xi, eta in itertools.product(samples, repeat=2):
        if not phi(xi * eta).equals(phi(xi) * phi(eta)):
            fail("multiplicative", xi=xi, eta=eta, lhs=phi(xi * eta), rhs=phi(xi) * phi(eta))
            break
    verdicts.setdefault("multiplicative", True)

    one = space.one()
    if not phi(one).equals(one):
        fail("unital", xi=one, lhs=phi(one), rhs=one)
    verdicts.setdefault("unital", True)

    evidence = {"seed": seed, "samples": len(samples), "events": len(evs),
                "hypotheses": {h: verdicts[h] for h in ENDO_HYPOTHESES}}
    for h in ENDO_HYPOTHESES:
        if not verdicts[h]:
            return Certificate("endomorphism", False, witness={"hypothesis": h, **witnesses[h]},
                               evidence={**evidence, "identity": None})
    for xi in samples:
        if not phi(xi).equals(xi):
            # would contradict the lemma on the sample set
            return Certificate("endomorphism", False,
                               witness={"hypothesis": "identity", "xi": xi, "lhs": phi(xi)},
                               evidence={**evidence, "identity": False})
    return Certificate("endomorphism", True, evidence={**evidence, "identity": True})
