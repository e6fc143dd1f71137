"""Finite atomic probability spaces and the algebra of random scalars on them.

Every atom carries strictly positive mass, so two random variables agree
almost surely exactly when they agree on every atom.  An equivalence class of
events is therefore just a set of atom indices, and an element of L0 is just
a tuple of per-atom values.

Values are either exact (``int`` or ``gmpy2.mpq``) or floating point.  Exact values
are always compared exactly; floats are compared against the space tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Iterator, Sequence

from gmpy2 import mpq

from .errors import EmptyFamilyError, SpaceMismatchError

MODES = ("rational", "float")
DEFAULT_TOL = 1e-9


def is_exact(v) -> bool:
    return isinstance(v, Rational)


def to_number(v, mode: str = "rational"):
    """Coerce ``v`` into the number type used by ``mode``.

    Strings are parsed exactly (``"1/3"``, ``"0.25"``).  In rational mode a
    float is converted through its shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary approximation.
    """
    if isinstance(v, bool):
        raise TypeError("booleans are not numbers here")
    if mode == "float":
        return float(Fraction(v)) if isinstance(v, str) else float(v)
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        v = Fraction(repr(v))
    elif isinstance(v, str):
        v = Fraction(v.strip())
    if isinstance(v, Rational):
        q = mpq(int(v.numerator), int(v.denominator))
        return int(q.numerator) if q.denominator == 1 else q
    raise TypeError(f"cannot interpret {v!r} as a number")


def div(u, v):
    """u / v, staying exact when both operands are exact."""
    if is_exact(u) and is_exact(v):
        return to_number(mpq(u) / mpq(v))
    return u / v


@dataclass(frozen=True)
class SampleSpace:
    """A finite probability space with no null atoms."""

    atom_probs: tuple
    mode: str = "rational"
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        probs = tuple(to_number(p, self.mode) for p in self.atom_probs)
        object.__setattr__(self, "atom_probs", probs)
        if not probs:
            raise ValueError("a sample space needs at least one atom")
        if any(p <= 0 for p in probs):
            raise ValueError("atom probabilities must be strictly positive")
        total = sum(probs)
        if self.mode == "rational":
            if total != 1:
                raise ValueError(f"atom probabilities sum to {total}, not 1")
        elif abs(total - 1) > self.tol * len(probs):
            raise ValueError(f"atom probabilities sum to {total}, not 1")

    @classmethod
    def uniform(cls, m: int, mode: str = "rational", tol: float = DEFAULT_TOL) -> "SampleSpace":
        return cls(tuple(Fraction(1, m) for _ in range(m)), mode=mode, tol=tol)

    @property
    def m(self) -> int:
        return len(self.atom_probs)

    @property
    def atoms(self) -> range:
        return range(self.m)

    def num(self, v):
        return to_number(v, self.mode)

    def is_zero(self, v, scale=1) -> bool:
        if is_exact(v):
            return v == 0
        return abs(v) <= self.tol * scale

    # constructors for the objects living on this space

    def event(self, atoms: Iterable[int] = ()) -> "Event":
        return Event(self, frozenset(atoms))

    @property
    def omega(self) -> "Event":
        return Event(self, frozenset(self.atoms))

    @property
    def empty(self) -> "Event":
        return Event(self, frozenset())

    def scalar(self, values: Sequence) -> "RandomScalar":
        return RandomScalar(self, tuple(self.num(v) for v in values))

    def constant(self, c) -> "RandomScalar":
        c = self.num(c)
        return RandomScalar(self, (c,) * self.m)

    def zero(self) -> "RandomScalar":
        return self.constant(0)

    def one(self) -> "RandomScalar":
        return self.constant(1)

    def all_events(self) -> Iterator["Event"]:
        """All 2^m events, ordered by size then lexicographically."""
        for k in range(self.m + 1):
            for combo in itertools.combinations(self.atoms, k):
                yield Event(self, frozenset(combo))


@dataclass(frozen=True)
class Event:
    space: SampleSpace
    atoms: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        atoms = frozenset(self.atoms)
        bad = [a for a in atoms if not (isinstance(a, int) and 0 <= a < self.space.m)]
        if bad:
            raise ValueError(f"atom indices {bad} outside 0..{self.space.m - 1}")
        object.__setattr__(self, "atoms", atoms)

    def _check(self, other: "Event") -> None:
        if other.space != self.space:
            raise SpaceMismatchError("events on different sample spaces")

    def complement(self) -> "Event":
        return Event(self.space, frozenset(self.space.atoms) - self.atoms)

    def __invert__(self) -> "Event":
        return self.complement()

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.atoms | other.atoms)

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.atoms & other.atoms)

    def __sub__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.atoms - other.atoms)

    def __contains__(self, a: int) -> bool:
        return a in self.atoms

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.atoms))

    def __len__(self) -> int:
        return len(self.atoms)

    def is_empty(self) -> bool:
        return not self.atoms

    def is_full(self) -> bool:
        return len(self.atoms) == self.space.m

    def prob(self):
        return sum((self.space.atom_probs[a] for a in self.atoms), 0)

    def indicator(self) -> "RandomScalar":
        return indicator(self)

    def __repr__(self) -> str:
        return f"Event({sorted(self.atoms)})"


@dataclass(frozen=True)
class RandomScalar:
    """An element of L0(F): one real value per atom."""

    space: SampleSpace
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != self.space.m:
            raise SpaceMismatchError(
                f"expected {self.space.m} atom values, got {len(values)}")
        object.__setattr__(self, "values", values)

    def __getitem__(self, a: int):
        return self.values[a]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def _coerce(self, other) -> tuple | None:
        if isinstance(other, RandomScalar):
            if other.space is not self.space and other.space != self.space:
                raise SpaceMismatchError("random scalars on different sample spaces")
            return other.values
        if isinstance(other, Real) and not isinstance(other, bool):
            return (other,) * self.space.m
        return None

    def _zip(self, other, op):
        vals = self._coerce(other)
        if vals is None:
            return NotImplemented
        return RandomScalar(self.space, tuple(op(u, v) for u, v in zip(self.values, vals)))

    def __add__(self, other):
        return self._zip(other, lambda u, v: u + v)

    __radd__ = __add__

    def __sub__(self, other):
        return self._zip(other, lambda u, v: u - v)

    def __rsub__(self, other):
        return self._zip(other, lambda u, v: v - u)

    def __mul__(self, other):
        return self._zip(other, lambda u, v: u * v)

    __rmul__ = __mul__

    def __neg__(self):
        return RandomScalar(self.space, tuple(-v for v in self.values))

    def __le__(self, other):
        return leq(self, other)

    def __ge__(self, other):
        return leq(other, self)

    def equals(self, other: "RandomScalar") -> bool:
        """Equality up to the space tolerance (exact for exact values)."""
        return all(self.space.is_zero(u - v) for u, v in zip(self.values, other.values))

    def is_zero(self) -> bool:
        return all(self.space.is_zero(v) for v in self.values)

    def restrict(self, event: Event) -> "RandomScalar":
        return self * indicator(event)

    def map(self, f) -> "RandomScalar":
        return RandomScalar(self.space, tuple(f(v) for v in self.values))

    def __repr__(self) -> str:
        return f"RandomScalar({[str(v) for v in self.values]})"


def indicator(event: Event) -> RandomScalar:
    return RandomScalar(event.space, tuple(1 if a in event.atoms else 0 for a in event.space.atoms))


def support_set(xi: RandomScalar) -> Event:
    """The event [xi != 0]."""
    return Event(xi.space, frozenset(a for a, v in enumerate(xi.values) if not xi.space.is_zero(v)))


def gen_inverse(xi: RandomScalar) -> RandomScalar:
    """Per-atom reciprocal on the support of ``xi``, zero off it."""
    space = xi.space
    out = []
    for v in xi.values:
        if space.is_zero(v):
            out.append(0)
        else:
            out.append(div(1, v))
    return RandomScalar(space, tuple(out))


def leq(xi: RandomScalar, eta: RandomScalar) -> bool:
    if xi.space != eta.space:
        raise SpaceMismatchError("random scalars on different sample spaces")
    sp = xi.space
    return all(u <= v or sp.is_zero(u - v) for u, v in zip(xi.values, eta.values))


def _check_family(family) -> list[RandomScalar]:
    family = list(family)
    if not family:
        raise EmptyFamilyError("essential supremum of an empty family")
    space = family[0].space
    if any(h.space != space for h in family):
        raise SpaceMismatchError("family spans several sample spaces")
    return family


def ess_sup(family: Iterable[RandomScalar]) -> RandomScalar:
    """Least upper bound of a nonempty finite family (pointwise max)."""
    family = _check_family(family)
    return RandomScalar(family[0].space, tuple(max(col) for col in zip(*(h.values for h in family))))


def ess_inf(family: Iterable[RandomScalar]) -> RandomScalar:
    family = _check_family(family)
    return RandomScalar(family[0].space, tuple(min(col) for col in zip(*(h.values for h in family))))
