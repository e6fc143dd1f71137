"""Sampling plans and seeded generators for the property checkers.

All randomness is drawn from a ``random.Random`` owned by the caller, so a
checker run is a pure function of (inputs, plan, seed).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator

from .measure import Event, RandomScalar, SampleSpace, to_number
from .modules import ModuleElement, RegularModule


@dataclass(frozen=True)
class SamplingPlan:
    pairs: int = 128                 # random (x, y) pairs per checker
    coord_bound: int = 10            # coordinates drawn from [-bound, bound]
    max_den: int = 16                # largest denominator of random rationals
    grid_steps: int = 8              # lambda grid {0, 1/steps, ..., 1}
    random_lambdas: int = 64
    cert_lambdas: int = 32           # random lambdas for affine certification
    cert_pairs: int = 4              # random (x, y) pairs for affine certification
    exhaustive_atoms: int = 12       # enumerate all events up to this many atoms
    random_events: int = 256
    reverse_grid_steps: int | None = None   # mu grid for reverse image checks
    line_pairs: int = 16
    bootstrap_k: int = 8
    indicator_mixes: bool = True

    def __post_init__(self):
        for name in ("pairs", "grid_steps", "max_den", "coord_bound", "random_events", "line_pairs",
                     "cert_pairs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    def with_budget(self, budget: int) -> "SamplingPlan":
        return replace(self, pairs=budget, line_pairs=budget, cert_pairs=budget)


DEFAULT_PLAN = SamplingPlan()


def random_number(rng: random.Random, mode: str, bound=10, max_den: int = 16):
    if mode == "float":
        return rng.uniform(-bound, bound)
    q = rng.randint(1, max_den)
    return to_number(Fraction(rng.randint(-bound * q, bound * q), q))


def random_unit_number(rng: random.Random, mode: str, max_den: int = 16):
    """A number in [0, 1]."""
    if mode == "float":
        return rng.random()
    q = rng.randint(1, max_den)
    return to_number(Fraction(rng.randint(0, q), q))


def random_scalar(space: SampleSpace, rng: random.Random, plan: SamplingPlan = DEFAULT_PLAN) -> RandomScalar:
    return RandomScalar(space, tuple(random_number(rng, space.mode, plan.coord_bound, plan.max_den)
                                     for _ in space.atoms))


def random_element(module: RegularModule, rng: random.Random,
                   plan: SamplingPlan = DEFAULT_PLAN) -> ModuleElement:
    mode = module.space.mode
    return ModuleElement(module, tuple(
        tuple(random_number(rng, mode, plan.coord_bound, plan.max_den) for _ in range(d))
        for d in module.dims))


def events(space: SampleSpace, rng: random.Random | None = None,
           plan: SamplingPlan = DEFAULT_PLAN) -> list[Event]:
    """Events to test: all of them on small spaces, else singletons plus a random draw."""
    if space.m <= plan.exhaustive_atoms:
        return list(space.all_events())
    rng = rng or random.Random(0)
    out = [space.empty, space.omega] + [space.event([a]) for a in space.atoms]
    seen = {e.atoms for e in out}
    target = len(out) + plan.random_events  # m > 12 leaves far more than 256 events to draw from
    while len(out) < target:
        ev = space.event(a for a in space.atoms if rng.random() < 0.5)
        if ev.atoms not in seen:
            seen.add(ev.atoms)
            out.append(ev)
    return out


def structured_points(module: RegularModule) -> list[ModuleElement]:
    """Zero and the standard basis elements, tried before random points."""
    n = max(module.dims, default=0)
    return [module.zero()] + [module.basis(i) for i in range(n)]


def point_pairs(module: RegularModule, rng: random.Random,
                plan: SamplingPlan = DEFAULT_PLAN, n: int | None = None) -> list[tuple[ModuleElement, ModuleElement]]:
    """Structured pairs (basis vectors against zero and each other), then random pairs."""
    pts = structured_points(module)
    basis = pts[1:]
    pairs = [(e, pts[0]) for e in basis] + [(pts[0], e) for e in basis]
    pairs += [(e, f) for e, f in itertools.permutations(basis, 2)]
    for _ in range(plan.pairs if n is None else n):
        pairs.append((random_element(module, rng, plan), random_element(module, rng, plan)))
    return pairs


def grid(steps: int) -> list:
    return [to_number(Fraction(k, steps)) for k in range(steps + 1)]


def segment_lambdas(space: SampleSpace, rng: random.Random, plan: SamplingPlan = DEFAULT_PLAN,
                    n_random: int | None = None, steps: int | None = None) -> list[RandomScalar]:
    """Constants on a grid, random [0,1]-valued scalars, and indicator mixes."""
    g = grid(plan.grid_steps if steps is None else steps)
    out = [space.constant(v) for v in g]
    for _ in range(plan.random_lambdas if n_random is None else n_random):
        out.append(RandomScalar(space, tuple(random_unit_number(rng, space.mode, plan.max_den)
                                             for _ in space.atoms)))
    if plan.indicator_mixes:
        out += indicator_mixes(space, rng, plan, unit=True)
    return out


def line_lambdas(space: SampleSpace, rng: random.Random, plan: SamplingPlan = DEFAULT_PLAN) -> list[RandomScalar]:
    """Unconstrained lambdas: integers, a grid, random values and indicator mixes."""
    consts = [0, 1, 2, -1, -2, Fraction(1, 2), Fraction(-1, 3), 3, Fraction(7, 4)]
    out = [space.constant(v) for v in consts]
    for _ in range(plan.random_lambdas):
        out.append(random_scalar(space, rng, plan))
    if plan.indicator_mixes:
        out += indicator_mixes(space, rng, plan, unit=False)
    return out


def indicator_mixes(space: SampleSpace, rng: random.Random, plan: SamplingPlan = DEFAULT_PLAN,
                    unit: bool = True) -> list[RandomScalar]:
    """lambda = I_A l1 + I_{A^c} l2 for each tested event A.

    Each event gets the pure indicator (l1, l2) = (1, 0) plus one random pair
    of constants.
    """
    out = []
    for ev in events(space, rng, plan):
        if ev.is_empty() or ev.is_full():
            continue
        out.append(ev.indicator())
        if unit:
            l1 = random_unit_number(rng, space.mode, plan.max_den)
            l2 = random_unit_number(rng, space.mode, plan.max_den)
        else:
            l1 = random_number(rng, space.mode, plan.coord_bound, plan.max_den)
            l2 = random_number(rng, space.mode, plan.coord_bound, plan.max_den)
        out.append(RandomScalar(space, tuple(l1 if a in ev else l2 for a in space.atoms)))
    return out


def scalar_samples(space: SampleSpace, rng: random.Random, plan: SamplingPlan = DEFAULT_PLAN,
                   n_random: int = 16) -> Iterator[RandomScalar]:
    """Scalars for ring-level checks: a rational grid of constants, singleton
    indicators, random values and indicator mixes."""
    for v in scalar_grid():
        yield space.constant(v)
    for a in space.atoms:
        yield space.event([a]).indicator()
    for _ in range(n_random):
        yield random_scalar(space, rng, plan)
    if plan.indicator_mixes:
        yield from indicator_mixes(space, rng, plan, unit=False)


def scalar_grid() -> list:
    return [0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 3, Fraction(1, 3)]
