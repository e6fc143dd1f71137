"""JSON encoding and decoding for spaces, elements, maps and reports.

Integers are JSON integers and other exact rationals are "p/q" strings, so
nothing exact passes through a binary float.  Float-mode values are JSON
numbers.  Input also accepts decimal literals, which are read exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .certificate import Certificate
from .errors import DimensionError, SchemaError
from .ftag import AffineDecomposition, TheoremReport
from .maps import (Affine, Atomwise, Composed, EndoCandidate, MapSpec, Permuted, Poly, Power, Root,
                   Translated, identity_map)
from .measure import Event, RandomScalar, SampleSpace, is_exact
from .modules import ModuleElement, RankPartition, RegularModule


def num_to_json(v):
    if isinstance(v, (bool, int)):
        return v
    if is_exact(v):
        if v.denominator == 1:
            return int(v.numerator)
        return str(v)
    return float(v)


def encode(obj) -> Any:
    """Convert library objects into plain JSON-ready structures."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, float)) or is_exact(obj) or (hasattr(obj, "__float__") and not hasattr(obj, "__len__")):
        return num_to_json(obj)
    if isinstance(obj, SampleSpace):
        out = {"atoms": [num_to_json(p) for p in obj.atom_probs]}
        if obj.mode != "rational":
            out["mode"] = obj.mode
        return out
    if isinstance(obj, Event):
        return {"atoms": sorted(obj.atoms)}
    if isinstance(obj, RandomScalar):
        return {"values": [num_to_json(v) for v in obj.values]}
    if isinstance(obj, ModuleElement):
        return {"vecs": [[num_to_json(u) for u in vec] for vec in obj.vecs]}
    if isinstance(obj, RegularModule):
        return {"dims": list(obj.dims)}
    if isinstance(obj, Certificate):
        return {"check": obj.check, "verdict": obj.verdict,
                "witness": encode(obj.witness), "evidence": encode(obj.evidence)}
    if isinstance(obj, RankPartition):
        return {"classes": [{"rank": r, "atoms": sorted(ev.atoms)} for r, ev in obj.classes],
                "pivots": [list(p) for p in obj.pivots]}
    if isinstance(obj, AffineDecomposition):
        return {"matrices": [[[num_to_json(u) for u in row] for row in m] for m in obj.matrices],
                "offset": encode(obj.offset), "certification": encode(obj.certification)}
    if isinstance(obj, TheoremReport):
        return {"hypotheses": {k: encode(v) for k, v in obj.hypotheses.items()},
                "lines": encode(obj.lines), "decomposition": encode(obj.decomposition),
                "applies": obj.applies, "consistent": obj.consistent,
                "verdicts": obj.verdicts(), "evidence": encode(obj.evidence)}
    if isinstance(obj, MapSpec):
        return encode_map(obj)
    if isinstance(obj, EndoCandidate):
        return {"bodies": [encode_body(b) for b in obj.bodies],
                "perm": None if obj.perm is None else list(obj.perm)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(encode(obj), sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------------------
# maps


def encode_body(b) -> dict:
    if isinstance(b, Affine):
        return {"affine": {"matrix": [[num_to_json(u) for u in row] for row in b.matrix],
                           "offset": [num_to_json(u) for u in b.offset]}}
    if isinstance(b, Power):
        return {"odd_power": b.k} if b.k % 2 else {"power": b.k}
    if isinstance(b, Root):
        return {"root": b.k}
    if isinstance(b, Poly):
        return {"poly": [num_to_json(c) for c in b.coeffs]}
    raise TypeError(f"cannot encode body {b!r}")


def encode_map(T: MapSpec, top: bool = True) -> dict:
    if isinstance(T, Atomwise):
        out = {"kind": "atomwise", "bodies": [encode_body(b) for b in T.bodies]}
    elif isinstance(T, Permuted):
        out = {"kind": "permuted", "perm": list(T.perm), "inner": encode_map(T.inner, False)}
    elif isinstance(T, Composed):
        out = {"kind": "composed", "parts": [encode_map(p, False) for p in T.parts]}
    elif isinstance(T, Translated):
        out = {"kind": "translated", "inner": encode_map(T.inner, False),
               "offset": encode(T.offset)["vecs"]}
    else:
        raise TypeError(f"cannot encode map {type(T).__name__}")
    if T.inverse is not None:
        out["inverse"] = encode_map(T.inverse, False)
    if top:
        out["dims"] = list(T.domain.dims)
    return out


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    return obj[key]


def _matrix(raw, space: SampleSpace, where: str) -> tuple:
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise SchemaError(f"{where}: matrix must be a list of rows")
    return tuple(tuple(_num(v, space, where) for v in row) for row in raw)


def _num(v, space: SampleSpace, where: str):
    if isinstance(v, bool) or not isinstance(v, (int, float, str, Fraction)):
        raise SchemaError(f"{where}: expected a number, got {v!r}")
    try:
        return space.num(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: bad number {v!r} ({exc})") from None


def decode_body(raw: dict, space: SampleSpace, where: str = "body"):
    if not isinstance(raw, dict) or len(raw) != 1:
        raise SchemaError(f"{where}: a body is an object with exactly one key")
    (key, val), = raw.items()
    if key == "affine":
        matrix = _matrix(_require(val, "matrix", where), space, where)
        offset = val.get("offset")
        if offset is not None:
            offset = tuple(_num(v, space, where) for v in offset)
        return Affine(matrix, offset)
    if key in ("odd_power", "power", "root"):
        if not isinstance(val, int) or isinstance(val, bool):
            raise SchemaError(f"{where}: {key} must be an integer")
        if key == "odd_power" and val % 2 == 0:
            raise SchemaError(f"{where}: odd_power must be odd, got {val}")
        return Root(val) if key == "root" else Power(val)
    if key == "poly":
        return Poly(tuple(_num(v, space, where) for v in val))
    raise SchemaError(f"{where}: unknown body kind {key!r}")


def infer_dims(raw: dict, m: int) -> tuple | None:
    kind = raw.get("kind") if isinstance(raw, dict) else None
    if kind == "atomwise":
        bodies = raw.get("bodies") or []
        if len(bodies) == 1:
            bodies = bodies * m
        dims = []
        for b in bodies:
            if not isinstance(b, dict) or "affine" not in b:
                return None
            mat = b["affine"].get("matrix") or []
            if not mat:
                return None
            dims.append(len(mat[0]))
        return tuple(dims) if len(dims) == m else None
    if kind in ("permuted", "translated"):
        return infer_dims(raw.get("inner"), m)
    if kind == "composed":
        parts = raw.get("parts") or []
        return infer_dims(parts[0], m) if parts else None
    return None


def decode_map(raw: dict, space: SampleSpace, domain: RegularModule | None = None,
               where: str = "map") -> MapSpec:
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}: a map is a JSON object")
    if domain is None:
        dims = raw.get("dims")
        if dims is None:
            dims = infer_dims(raw, space.m)
        if dims is None:
            raise SchemaError(f"{where}: cannot infer the domain dimensions; add \"dims\"")
        if not isinstance(dims, (list, tuple)) or not all(isinstance(d, int) for d in dims):
            raise SchemaError(f"{where}: dims must be a list of integers")
        domain = RegularModule(space, tuple(dims))
    kind = _require(raw, "kind", where)
    if kind == "identity":
        T = identity_map(domain)
    elif kind == "atomwise":
        bodies = _require(raw, "bodies", where)
        if not isinstance(bodies, list):
            raise SchemaError(f"{where}: bodies must be a list")
        T0 = tuple(decode_body(b, space, f"{where}.bodies[{i}]") for i, b in enumerate(bodies))
        T = Atomwise(domain, T0)
    elif kind == "permuted":
        inner = decode_map(_require(raw, "inner", where), space, domain, where + ".inner")
        T = Permuted(tuple(_require(raw, "perm", where)), inner)
    elif kind == "composed":
        parts = []
        dom = domain
        for i, p in enumerate(_require(raw, "parts", where)):
            part = decode_map(p, space, dom, f"{where}.parts[{i}]")
            parts.append(part)
            dom = part.codomain
        T = Composed(tuple(parts))
    elif kind == "translated":
        inner = decode_map(_require(raw, "inner", where), space, domain, where + ".inner")
        off = _require(raw, "offset", where)
        if isinstance(off, dict):
            off = _require(off, "vecs", where + ".offset")
        T = Translated(inner, decode_element({"vecs": off}, inner.codomain, where + ".offset"))
    else:
        raise SchemaError(f"{where}: unknown map kind {kind!r}")
    if "inverse" in raw:
        inv = decode_map(raw["inverse"], space, T.codomain, where + ".inverse")
        T = _with_inverse(T, inv)
    return T


def _with_inverse(T: MapSpec, inv: MapSpec) -> MapSpec:
    from dataclasses import fields

    kwargs = {f.name: getattr(T, f.name) for f in fields(T) if f.init}
    kwargs["inverse"] = inv
    return type(T)(**kwargs)


# --------------------------------------------------------------------------
# basic objects


def decode_space(raw: dict, mode: str = "rational", tol: float | None = None) -> SampleSpace:
    atoms = _require(raw, "atoms", "space")
    if not isinstance(atoms, list) or not atoms:
        raise SchemaError("space: atoms must be a nonempty list of probabilities")
    mode = raw.get("mode", mode)
    tol = raw.get("tolerance", tol)
    kwargs = {} if tol is None else {"tol": float(tol)}
    try:
        return SampleSpace(tuple(atoms), mode=mode, **kwargs)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"space: {exc}") from None


def decode_scalar(raw, space: SampleSpace, where: str = "scalar") -> RandomScalar:
    vals = raw.get("values") if isinstance(raw, dict) else raw
    if not isinstance(vals, list) or len(vals) != space.m:
        raise SchemaError(f"{where}: need {space.m} values")
    return RandomScalar(space, tuple(_num(v, space, where) for v in vals))


def decode_event(raw, space: SampleSpace, where: str = "event") -> Event:
    atoms = raw.get("atoms") if isinstance(raw, dict) else raw
    if not isinstance(atoms, list):
        raise SchemaError(f"{where}: atoms must be a list of indices")
    try:
        return space.event(atoms)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def decode_element(raw, module: RegularModule | SampleSpace, where: str = "element") -> ModuleElement:
    """Parse {"vecs": [...]}.  Given a bare space the module is inferred from the vectors."""
    vecs = raw.get("vecs") if isinstance(raw, dict) else raw
    if not isinstance(vecs, list) or not all(isinstance(v, list) for v in vecs):
        raise SchemaError(f"{where}: vecs must be a list of per-atom vectors")
    if isinstance(module, SampleSpace):
        if isinstance(raw, dict) and "dims" in raw:
            module = RegularModule(module, tuple(raw["dims"]))
        else:
            module = RegularModule(module, tuple(len(v) for v in vecs))
    space = module.space
    if len(vecs) != space.m:
        raise DimensionError(f"{where}: {len(vecs)} atom vectors for a {space.m}-atom space")
    return module.element([[_num(u, space, where) for u in v] for v in vecs])


def decode_generators(raw, space: SampleSpace) -> list[ModuleElement]:
    if isinstance(raw, dict):
        gens = _require(raw, "generators", "generators")
        module = RegularModule(space, tuple(raw["dims"])) if "dims" in raw else None
    else:
        gens, module = raw, None
    if not isinstance(gens, list) or not gens:
        raise SchemaError("generators: need a nonempty list")
    first = decode_element(gens[0], module or space, "generators[0]")
    module = first.module
    return [first] + [decode_element(g, module, f"generators[{i}]") for i, g in enumerate(gens[1:], 1)]


def loads(text: str, mode: str = "rational"):
    """json.loads that keeps decimal literals exact in rational mode."""
    return json.loads(text, parse_float=(Fraction if mode == "rational" else float))
