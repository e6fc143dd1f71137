import json
import random
from fractions import Fraction

import pytest

from l0mod import DimensionError, RegularModule, SampleSpace, SchemaError, rank_decomposition
from l0mod.ftag import counterexample_gallery, ftag_check, random_affine_map
from l0mod.sampling import SamplingPlan, random_element
from l0mod.serialize import (decode_element, decode_generators, decode_map, decode_scalar, decode_space,
                             dumps, encode, loads)


def test_rationals_never_become_floats(space3):
    xi = space3.scalar((Fraction(1, 3), 2, Fraction(-7, 4)))
    assert encode(xi) == {"values": ["1/3", 2, "-7/4"]}
    assert decode_scalar(loads(dumps(xi)), space3).equals(xi)


def test_decimal_literals_are_exact():
    sp = decode_space(loads('{"atoms": [0.1, 0.9]}'))
    assert sp.atom_probs[0] == Fraction(1, 10)


def test_space_roundtrip(space3):
    assert decode_space(loads(dumps(space3))) == space3
    fl = SampleSpace.uniform(2, mode="float")
    back = decode_space(loads(dumps(fl), "float"), "float")
    assert back.mode == "float"


def test_element_roundtrip(space3):
    V = RegularModule(space3, (2, 0, 1))
    x = V.element([[Fraction(1, 2), -1], [], [3]])
    y = decode_element(loads(dumps(x)), space3)
    assert y.module == V and y.equals(x)


def test_element_wrong_atom_count(space3):
    with pytest.raises(DimensionError):
        decode_element({"vecs": [[1], [2]]}, space3)


def test_map_roundtrip_random():
    rng = random.Random(2)
    sp = SampleSpace.uniform(3)
    V = RegularModule(sp, (2, 1, 3))
    for _ in range(10):
        T = random_affine_map(V, rng)
        back = decode_map(loads(dumps(T)), sp)
        # re-encoding an emitted map gives the same text
        assert dumps(back) == dumps(T)
        x = random_element(V, rng)
        assert back(x).equals(T(x))


def test_gallery_maps_roundtrip():
    for item in counterexample_gallery():
        T = item.map
        back = decode_map(loads(dumps(T)), T.space)
        assert dumps(back) == dumps(T)


def test_dims_inferred_from_affine_bodies(two_atoms):
    raw = {"kind": "atomwise", "bodies": [{"affine": {"matrix": [[1, 0], [0, 1]]}}]}
    assert decode_map(raw, two_atoms).domain.dims == (2, 2)
    with pytest.raises(SchemaError):
        decode_map({"kind": "atomwise", "bodies": [{"odd_power": 3}]}, two_atoms)
    T = decode_map({"kind": "atomwise", "bodies": [{"odd_power": 3}], "dims": [1, 1]}, two_atoms)
    assert T.domain.dims == (1, 1)


def test_schema_errors(two_atoms):
    bad = [
        {"kind": "nope", "dims": [1, 1]},
        {"bodies": [], "dims": [1, 1]},
        {"kind": "atomwise", "bodies": [{"odd_power": 2}], "dims": [1, 1]},
        {"kind": "atomwise", "bodies": [{"affine": {"matrix": [["x"]]}}], "dims": [1, 1]},
        {"kind": "atomwise", "bodies": [{"affine": {}, "power": 2}], "dims": [1, 1]},
    ]
    for raw in bad:
        with pytest.raises(SchemaError):
            decode_map(raw, two_atoms)
    with pytest.raises(SchemaError):
        decode_space({"atoms": []})
    with pytest.raises(SchemaError):
        decode_space({"atoms": [1, 1]})


def test_generators_and_partition_encoding(space3):
    gens = decode_generators({"generators": [{"vecs": [[1, 0], [1, 0], [0, 0]]},
                                             {"vecs": [[0, 1], [2, 0], [0, 0]]}]}, space3)
    enc = encode(rank_decomposition(gens))
    assert enc["classes"] == [{"rank": 0, "atoms": [2]}, {"rank": 1, "atoms": [1]}, {"rank": 2, "atoms": [0]}]


def test_report_is_plain_json():
    T = counterexample_gallery()[0].map
    text = dumps(ftag_check(T, SamplingPlan(pairs=4, line_pairs=2)))
    data = json.loads(text)
    assert data["verdicts"]["stable"] is False
    assert dumps(data) == text
