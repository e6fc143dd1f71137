"""Certification harness for the affine-geometry theorem on regular L0-modules.

A map that is stable, invertible and sends L0-segments onto L0-segments, on
a module containing a free rank-2 submodule, has to be L0-affine.  The
harness evaluates each hypothesis on a concrete map, extracts a candidate
affine decomposition T = S + b and certifies it, and keeps a gallery of maps
showing that each hypothesis is needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import linalg
from .certificate import Certificate
from .errors import NonInvertibleError, PreconditionError
from .geometry import Line, line_image_equals, segment_image_equals
from .maps import (Affine, Atomwise, Composed, EndoCandidate, MapSpec, Permuted, Power, Translated,
                   affine_map, identity_map, is_invertible, is_local, is_semilinear, is_stable)
from .measure import RandomScalar, SampleSpace
from .modules import ModuleElement, RegularModule
from .sampling import (DEFAULT_PLAN, SamplingPlan, indicator_mixes, line_lambdas, point_pairs,
                       random_element, random_number, random_scalar)


def has_free_rank2(V: RegularModule) -> bool:
    """Two everywhere-independent elements exist iff every atom has dimension >= 2."""
    return all(d >= 2 for d in V.dims)


@dataclass(frozen=True)
class AffineDecomposition:
    linear_part: Atomwise
    offset: ModuleElement
    certification: Certificate

    @property
    def ok(self) -> bool:
        return self.certification.passed

    @property
    def matrices(self) -> tuple:
        return tuple(b.matrix for b in self.linear_part.bodies)


def certification_lambdas(space: SampleSpace, rng: random.Random,
                          plan: SamplingPlan = DEFAULT_PLAN) -> list[RandomScalar]:
    """0, 1, 1/2, every single-atom indicator, random rationals, indicator mixes."""
    out = [space.constant(0), space.constant(1), space.constant(Fraction(1, 2))]
    out += [space.event([a]).indicator() for a in space.atoms]
    out += [random_scalar(space, rng, plan) for _ in range(plan.cert_lambdas)]
    if plan.indicator_mixes:
        out += indicator_mixes(space, rng, plan, unit=False)
    return out


def combination_violation(T: MapSpec, x: ModuleElement, y: ModuleElement,
                          lam: RandomScalar, tx=None, ty=None) -> dict | None:
    """The witness dict if T(lam x + (1-lam) y) != lam T(x) + (1-lam) T(y)."""
    tx = T(x) if tx is None else tx
    ty = T(y) if ty is None else ty
    lhs = T(lam * x + (1 - lam) * y)
    rhs = lam * tx + (1 - lam) * ty
    if lhs.equals(rhs):
        return None
    return {"lambda": lam, "x": x, "y": y, "lhs": lhs, "rhs": rhs}


def affine_decompose(T: MapSpec, plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0,
                     pairs: list | None = None) -> AffineDecomposition:
    """Read off b = T(0) and the per-atom matrices of S = T - T(0), then
    certify T through the lambda-combination identity.

    Failure is reported in ``certification`` with the violating triple, never
    raised.
    """
    dom, cod = T.domain, T.codomain
    space = dom.space
    b = T(dom.zero())
    matrices = []
    for a in space.atoms:
        cols = [(T(dom.unit(a, j)) - b)[a] for j in range(dom.dims[a])]
        rows = cod.dims[a]
        matrices.append(tuple(tuple(col[i] for col in cols) for i in range(rows)))
    linear = Atomwise(dom, tuple(Affine(m, (0,) * cod.dims[a]) for a, m in enumerate(matrices)))

    rng = random.Random(seed)
    if pairs is None:
        pairs = point_pairs(dom, rng, plan, n=plan.cert_pairs)
    lambdas = certification_lambdas(space, rng, plan)
    checked = 0
    evidence: dict[str, Any] = {"seed": seed, "pairs": len(pairs), "lambdas": len(lambdas)}
    for x, y in pairs:
        tx, ty = T(x), T(y)
        for lam in lambdas:
            checked += 1
            w = combination_violation(T, x, y, lam, tx, ty)
            if w is not None:
                return AffineDecomposition(linear, b, Certificate(
                    "affine", False, witness={"law": "combination", **w},
                    evidence={**evidence, "checked": checked}))
        for p in (x, y):
            if not T(p).equals(linear(p) + b):
                return AffineDecomposition(linear, b, Certificate(
                    "affine", False, witness={"law": "decomposition", "x": p, "lhs": T(p),
                                              "rhs": linear(p) + b},
                    evidence={**evidence, "checked": checked}))
    return AffineDecomposition(linear, b, Certificate("affine", True,
                                                      evidence={**evidence, "checked": checked}))


# --------------------------------------------------------------------------
# theorem report

HYPOTHESES = ("rank2", "stable", "invertible", "segments")


@dataclass
class TheoremReport:
    hypotheses: dict[str, Certificate | None]
    decomposition: AffineDecomposition
    lines: Certificate | None = None
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def applies(self) -> bool:
        """All hypotheses certified, so the conclusion is asserted."""
        return all(self.hypotheses[h] is not None and self.hypotheses[h].passed for h in HYPOTHESES)

    @property
    def consistent(self) -> bool:
        return not self.applies or self.decomposition.ok

    def verdicts(self) -> dict[str, bool | None]:
        out = {h: (None if c is None else c.passed) for h, c in self.hypotheses.items()}
        out["lines"] = None if self.lines is None else self.lines.passed
        out["affine"] = self.decomposition.ok
        return out


def _endpoint_pairs(T: MapSpec, rng: random.Random, plan: SamplingPlan):
    return [(x, y) for x, y in point_pairs(T.domain, rng, plan, n=plan.line_pairs) if not x.equals(y)]


def _over_pairs(check, T, pairs, plan, seed, name) -> Certificate | None:
    try:
        for i, (x, y) in enumerate(pairs):
            cert = check(T, x, y, plan, seed + i)
            if not cert.passed:
                return cert
            if cert.evidence.get("method") == "symbolic":
                return cert
    except NonInvertibleError as exc:
        return None if name == "segments" else Certificate(name, False, witness={"reason": str(exc)})
    return Certificate(name, True, evidence={"method": "sampled", "pairs": len(pairs), "seed": seed})


def ftag_check(T: MapSpec, plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0,
               with_lines: bool = True) -> TheoremReport:
    rng = random.Random(seed)
    rank2 = has_free_rank2(T.domain)
    hyps: dict[str, Certificate | None] = {
        "rank2": Certificate("rank2", rank2, evidence={"dims": list(T.domain.dims)}),
        "stable": is_stable(T, plan, seed),
        "invertible": is_invertible(T),
    }
    pairs = _endpoint_pairs(T, rng, plan)
    hyps["segments"] = _over_pairs(segment_image_equals, T, pairs, plan, seed, "segments")
    lines = _over_pairs(line_image_equals, T, pairs, plan, seed, "lines") if with_lines else None
    decomposition = affine_decompose(T, plan, seed)
    return TheoremReport(hyps, decomposition, lines, evidence={"seed": seed})


def line_to_line_check(T: MapSpec, plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0) -> Certificate:
    """Every sampled point of l(x, x+y) lands in l(T(x), T(x+y)).

    Mirrors the staging of the segment-to-line argument: the integer points
    x + k y first, then indicator-mixed and random coefficients.
    """
    if not all(d >= 1 for d in T.domain.dims):
        raise PreconditionError("domain has no element with full support")
    if not is_invertible(T).passed:
        raise PreconditionError("map is not invertible")
    if not is_stable(T, plan, seed).passed:
        raise PreconditionError("map is not stable")
    rng = random.Random(seed)
    space = T.space
    pairs = [(x, y) for x, y in point_pairs(T.domain, rng, plan, n=plan.line_pairs)
             if not y.equals(T.domain.zero())]
    ks = [space.constant(k) for k in range(-plan.bootstrap_k, plan.bootstrap_k + 1)]
    lams = ks + line_lambdas(space, rng, plan)
    checked = 0
    for x, y in pairs:
        line = Line(T(x), T(x + y))
        for lam in lams:
            z = x + lam * y
            checked += 1
            if T(z) not in line:
                return Certificate("line_to_line", False, witness={
                    "x": x, "y": y, "lambda": lam, "point": z, "image": T(z)},
                    evidence={"seed": seed, "checked": checked})
    return Certificate("line_to_line", True, evidence={
        "seed": seed, "pairs": len(pairs), "lambdas": len(lams), "checked": checked})


# --------------------------------------------------------------------------
# counterexample gallery


@dataclass
class GalleryItem:
    name: str
    description: str
    map: MapSpec
    expected: dict[str, bool | None]
    sigma: EndoCandidate | None = None


def swap_map(n: int = 2) -> Permuted:
    """Two equal atoms A, B exchanged by a measure-preserving shift, acting on L0(F, R^n)."""
    space = SampleSpace.uniform(2)
    V = RegularModule.free(space, n)
    return Permuted((1, 0), identity_map(V))


def induced_sigma(T: Permuted) -> EndoCandidate:
    return EndoCandidate(T.space, (Affine(((1,),)),), perm=T.perm)


def cube_map(dims) -> Atomwise:
    space = SampleSpace.uniform(len(dims))
    return Atomwise(RegularModule(space, tuple(dims)), (Power(3),))


def projection_map() -> Atomwise:
    space = SampleSpace.uniform(2)
    V = RegularModule.free(space, 2)
    return Atomwise(V, (Affine(((1, 0), (0, 0))),))


def counterexample_gallery() -> list[GalleryItem]:
    swap = swap_map(2)
    return [
        GalleryItem(
            "swap", "atom swap induced by a measure-preserving shift on two equal atoms; "
            "semilinear, maps lines to lines, not stable",
            swap,
            {"rank2": True, "stable": False, "local": False, "invertible": True, "segments": True,
             "lines": True, "affine": False, "semilinear_induced": True, "semilinear_identity": False},
            sigma=induced_sigma(swap)),
        GalleryItem(
            "cube-rank1", "coordinatewise cube on dims (1, 1): every hypothesis but rank 2",
            cube_map((1, 1)),
            {"rank2": False, "stable": True, "local": True, "invertible": True, "segments": True,
             "lines": True, "affine": False}),
        GalleryItem(
            "projection", "stable affine projection onto the first coordinate: not injective",
            projection_map(),
            {"rank2": True, "stable": True, "local": True, "invertible": False, "segments": True,
             "lines": True, "affine": True}),
        GalleryItem(
            "cube-rank2", "coordinatewise cube on dims (2, 2): stable and invertible, "
            "bends segments",
            cube_map((2, 2)),
            {"rank2": True, "stable": True, "local": True, "invertible": True, "segments": False,
             "lines": False, "affine": False}),
    ]


def observe(item: GalleryItem, plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0) -> dict[str, Any]:
    report = ftag_check(item.map, plan, seed)
    observed = report.verdicts()
    observed["local"] = is_local(item.map, plan, seed).passed
    if item.sigma is not None:
        observed["semilinear_induced"] = is_semilinear(item.map, item.sigma, plan, seed).passed
        observed["semilinear_identity"] = is_semilinear(
            item.map, EndoCandidate.identity(item.map.space), plan, seed).passed
    return {"observed": {k: observed.get(k) for k in item.expected}, "report": report}


def run_gallery(plan: SamplingPlan = DEFAULT_PLAN, seed: int = 0) -> list[dict[str, Any]]:
    out = []
    for item in counterexample_gallery():
        obs = observe(item, plan, seed)
        out.append({"name": item.name, "description": item.description,
                    "expected": item.expected, "observed": obs["observed"],
                    "match": obs["observed"] == item.expected, "report": obs["report"]})
    return out


# --------------------------------------------------------------------------
# randomized theorem-consistency runs


def random_invertible_matrix(d: int, rng: random.Random, plan: SamplingPlan = DEFAULT_PLAN,
                             mode: str = "rational"):
    while True:
        m = tuple(tuple(random_number(rng, mode, 4, 4) for _ in range(d)) for _ in range(d))
        if linalg.rank(m) == d:
            return m


def random_affine_map(module: RegularModule, rng: random.Random,
                      plan: SamplingPlan = DEFAULT_PLAN, max_factors: int = 2) -> MapSpec:
    """A composition of 1..max_factors invertible atomwise-affine maps, each translated."""
    mode = module.space.mode
    parts = []
    for _ in range(rng.randint(1, max_factors)):
        mats = [random_invertible_matrix(d, rng, plan, mode) for d in module.dims]
        parts.append(affine_map(module, mats, random_element(module, rng, plan)))
    return parts[0] if len(parts) == 1 else Composed(tuple(parts))


def fuzz(trials: int, seed: int = 0, dims=(2, 2, 2), plan: SamplingPlan = DEFAULT_PLAN,
         mode: str = "rational") -> dict[str, Any]:
    """Theorem consistency on random affine maps; deterministic for a fixed seed."""
    rng = random.Random(seed)
    space = SampleSpace.uniform(len(dims), mode=mode)
    V = RegularModule(space, tuple(dims))
    passes = recovered = 0
    failures = []
    for t in range(trials):
        T = random_affine_map(V, rng, plan)
        report = ftag_check(T, plan, seed=rng.getrandbits(32), with_lines=False)
        expected = T.affine_parts()
        dec = report.decomposition
        exact = (dec.matrices == tuple(m for m, _ in expected)
                 and dec.offset.vecs == tuple(b for _, b in expected))
        recovered += exact
        if report.applies and report.consistent and exact:
            passes += 1
        else:
            failures.append({"trial": t, "verdicts": report.verdicts(), "recovered": exact})
    return {"trials": trials, "passes": passes, "recovered": recovered,
            "failures": failures, "seed": seed, "dims": list(dims), "mode": mode}
