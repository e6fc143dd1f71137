"""Finitely generated regular L0-modules over a finite sample space.

A module is stored in decomposed form: atom ``a`` carries a copy of R^d(a).
Grouping atoms by dimension recovers the direct sum over the rank classes,
and gluing pieces over a partition is just reading each atom from the piece
that owns it, which is why every module here is regular.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real
from typing import Iterable, Sequence

from . import linalg
from .certificate import Certificate
from .errors import DimensionError, EmptyFamilyError, PartitionError, SpaceMismatchError
from .measure import Event, RandomScalar, SampleSpace, div, indicator


@dataclass(frozen=True)
class RegularModule:
    space: SampleSpace
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != self.space.m:
            raise DimensionError(f"need one dimension per atom ({self.space.m}), got {len(dims)}")
        if any(d < 0 for d in dims):
            raise DimensionError("dimensions must be nonnegative")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def free(cls, space: SampleSpace, n: int) -> "RegularModule":
        """L0(F, R^n)."""
        return cls(space, (n,) * space.m)

    def element(self, vecs: Sequence[Sequence]) -> "ModuleElement":
        return ModuleElement(self, tuple(tuple(self.space.num(v) for v in vec) for vec in vecs))

    def zero(self) -> "ModuleElement":
        return ModuleElement(self, tuple((0,) * d for d in self.dims))

    def basis(self, i: int) -> "ModuleElement":
        """e_i: the i-th unit vector on atoms with d(a) > i, zero elsewhere."""
        return ModuleElement(self, tuple(tuple(int(j == i) for j in range(d)) for d in self.dims))

    def unit(self, atom: int, i: int) -> "ModuleElement":
        """Unit vector e_i supported on the single atom ``atom``."""
        return ModuleElement(self, tuple(
            tuple(int(a == atom and j == i) for j in range(d)) for a, d in enumerate(self.dims)))

    def rank_classes(self) -> dict[int, Event]:
        classes: dict[int, set] = {}
        for a, d in enumerate(self.dims):
            classes.setdefault(d, set()).add(a)
        return {d: self.space.event(atoms) for d, atoms in sorted(classes.items())}


@dataclass(frozen=True)
class ModuleElement:
    module: RegularModule
    vecs: tuple

    def __post_init__(self):
        vecs = tuple(tuple(v) for v in self.vecs)
        if len(vecs) != self.module.space.m:
            raise DimensionError(f"need one vector per atom ({self.module.space.m}), got {len(vecs)}")
        for a, (vec, d) in enumerate(zip(vecs, self.module.dims)):
            if len(vec) != d:
                raise DimensionError(f"atom {a}: vector of length {len(vec)}, dimension is {d}")
        object.__setattr__(self, "vecs", vecs)

    @classmethod
    def _trusted(cls, module: RegularModule, vecs: tuple) -> "ModuleElement":
        # shapes already known to match, skip validation on hot paths
        obj = object.__new__(cls)
        object.__setattr__(obj, "module", module)
        object.__setattr__(obj, "vecs", vecs)
        return obj

    @property
    def space(self) -> SampleSpace:
        return self.module.space

    def __getitem__(self, a: int) -> tuple:
        return self.vecs[a]

    def _other(self, other: "ModuleElement") -> "ModuleElement":
        if not isinstance(other, ModuleElement):
            raise TypeError(f"expected a ModuleElement, got {type(other).__name__}")
        if other.module is not self.module and other.module != self.module:
            raise SpaceMismatchError("elements of different modules")
        return other

    def __add__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        other = self._other(other)
        return ModuleElement._trusted(self.module, tuple(
            tuple(u + v for u, v in zip(p, q)) for p, q in zip(self.vecs, other.vecs)))

    def __sub__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        other = self._other(other)
        return ModuleElement._trusted(self.module, tuple(
            tuple(u - v for u, v in zip(p, q)) for p, q in zip(self.vecs, other.vecs)))

    def __neg__(self):
        return ModuleElement._trusted(self.module, tuple(tuple(-u for u in p) for p in self.vecs))

    def __rmul__(self, xi):
        return scalar_action(xi, self)

    def equals(self, other: "ModuleElement") -> bool:
        """Equality up to the space tolerance (exact for exact coordinates)."""
        other = self._other(other)
        sp = self.space
        return all(sp.is_zero(u - v) for p, q in zip(self.vecs, other.vecs) for u, v in zip(p, q))

    def is_zero_at(self, a: int) -> bool:
        return all(self.space.is_zero(u) for u in self.vecs[a])

    def restrict(self, event: Event) -> "ModuleElement":
        return indicator(event) * self

    def has_full_support(self) -> bool:
        return support_of(self).is_full()

    def __repr__(self) -> str:
        return "ModuleElement(" + repr([[str(u) for u in v] for v in self.vecs]) + ")"


def scalar_action(xi, x: ModuleElement) -> ModuleElement:
    """(xi * x)(a) = xi(a) * x(a).  Plain numbers act as constants."""
    if isinstance(xi, RandomScalar):
        if xi.space is not x.space and xi.space != x.space:
            raise SpaceMismatchError("scalar and element on different sample spaces")
        vals = xi.values
    elif isinstance(xi, Real) and not isinstance(xi, bool):
        vals = (xi,) * x.space.m
    else:
        return NotImplemented
    return ModuleElement._trusted(x.module, tuple(tuple(c * u for u in vec) for c, vec in zip(vals, x.vecs)))


def support_of(x: ModuleElement) -> Event:
    """The support [x != 0]: atoms where the vector is nonzero."""
    return x.space.event(a for a in x.space.atoms if not x.is_zero_at(a))


def _dependence(p: tuple, q: tuple, space: SampleSpace):
    """Coefficients (s, t) != (0, 0) with s*p + t*q = 0, or None if independent."""
    if all(space.is_zero(u) for u in p):
        return 1, 0
    if linalg.rank((p, q), space.tol) == 2:
        return None
    # q is a multiple of p: read the factor at the largest coordinate of p
    i = max(range(len(p)), key=lambda j: abs(p[j]))
    return div(q[i], p[i]), -1


def is_independent(x: ModuleElement, y: ModuleElement) -> Certificate:
    """Per-atom linear independence of x and y.

    On failure the witness holds scalars (xi, eta), supported on the first
    violating atom, with xi*x + eta*y = 0.
    """
    x._other(y)
    space = x.space
    for a in space.atoms:
        dep = _dependence(x[a], y[a], space)
        if dep is None:
            continue
        s, t = dep
        ev = space.event([a])
        xi = space.scalar([s if b == a else 0 for b in space.atoms])
        eta = space.scalar([t if b == a else 0 for b in space.atoms])
        return Certificate("independent", False,
                           witness={"atom": a, "xi": xi, "eta": eta, "event": ev},
                           evidence={"atoms_checked": a + 1})
    return Certificate("independent", True, evidence={"atoms_checked": space.m})


@dataclass(frozen=True)
class RankPartition:
    """Atoms grouped by the local rank of a generator family.

    ``classes`` lists (rank, event) pairs with nonempty events in increasing
    rank order.  ``pivots[a]`` holds the indices of generators forming a
    basis of the submodule at atom ``a``.
    """

    classes: tuple
    pivots: tuple

    @property
    def space(self) -> SampleSpace:
        return self.classes[0][1].space

    def rank_at(self, a: int) -> int:
        return len(self.pivots[a])

    def as_dict(self) -> dict[int, frozenset]:
        return {r: ev.atoms for r, ev in self.classes}

    def basis_elements(self, generators: Sequence[ModuleElement], rank: int) -> list[ModuleElement]:
        """A basis of the free rank-``rank`` piece, as elements supported on its event.

        Element j is generator ``pivots[a][j]`` at each atom a of the class.
        """
        event = dict(self.classes).get(rank)
        if event is None:
            return []
        module = generators[0].module
        out = []
        for j in range(rank):
            vecs = tuple(generators[self.pivots[a][j]][a] if a in event else (0,) * module.dims[a]
                         for a in module.space.atoms)
            out.append(ModuleElement(module, vecs))
        return out


def rank_decomposition(generators: Sequence[ModuleElement]) -> RankPartition:
    generators = list(generators)
    if not generators:
        raise EmptyFamilyError("rank decomposition needs at least one generator")
    module = generators[0].module
    for g in generators[1:]:
        if g.module != module:
            raise SpaceMismatchError("generators from different modules")
    space = module.space
    pivots = []
    for a in space.atoms:
        d = module.dims[a]
        # columns are generators, so pivot columns name a basis among them
        cols = linalg.transpose([g[a] for g in generators]) if d else ()
        pivots.append(linalg.echelon_pivots(cols, space.tol))
    by_rank: dict[int, set] = {}
    for a, p in enumerate(pivots):
        by_rank.setdefault(len(p), set()).add(a)
    classes = tuple((r, space.event(atoms)) for r, atoms in sorted(by_rank.items()))
    return RankPartition(classes, tuple(pivots))


def glue(pieces: Iterable[tuple[Event, ModuleElement]]) -> ModuleElement:
    """The unique element agreeing with each piece on its event."""
    pieces = list(pieces)
    if not pieces:
        raise PartitionError("nothing to glue")
    module = pieces[0][1].module
    owner: dict[int, ModuleElement] = {}
    for event, x in pieces:
        if x.module != module:
            raise SpaceMismatchError("pieces from different modules")
        if event.space != module.space:
            raise SpaceMismatchError("event on a different sample space")
        for a in event.atoms:
            if a in owner:
                raise PartitionError(f"atom {a} is covered twice")
            owner[a] = x
    missing = [a for a in module.space.atoms if a not in owner]
    if missing:
        raise PartitionError(f"atoms {missing} are not covered")
    return ModuleElement(module, tuple(owner[a][a] for a in module.space.atoms))
