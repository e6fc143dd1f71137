from fractions import Fraction

import pytest

from l0mod import (Atomwise, Line, Power, RegularModule, SampleSpace, Segment, SpaceMismatchError,
                   affine_map, identity_map, indicator, line_image_equals, line_membership,
                   segment_image_equals, segment_membership)
from l0mod.sampling import SamplingPlan

from oracles import grid_lambdas


@pytest.fixture
def xy(V22):
    return V22.element([[1, 2], [0, 3]]), V22.element([[-1, 0], [4, 3]])


def test_endpoint_gives_one(xy):
    x, y = xy
    lam = segment_membership(Segment(x, y), x)
    assert lam.values == (1, 1)


def test_midpoint_gives_half(xy):
    x, y = xy
    z = Fraction(1, 2) * (x + y)
    assert segment_membership(Segment(x, y), z).values == (Fraction(1, 2), Fraction(1, 2))


def test_indicator_mix_is_unique(xy, two_atoms):
    x, y = xy
    a = two_atoms.event([0])
    z = indicator(a) * x + indicator(~a) * y
    lam = segment_membership(Segment(x, y), z)
    assert lam.equals(indicator(a))
    for at in two_atoms.atoms:
        assert grid_lambdas(x[at], y[at], z[at]) == [lam[at]]


def test_degenerate_atom_returns_zero(V22):
    x = V22.element([[1, 1], [5, 5]])
    y = V22.element([[0, 1], [5, 5]])
    z = V22.element([[Fraction(1, 3), 1], [5, 5]])
    assert segment_membership(Segment(x, y), z).values == (Fraction(1, 3), 0)


def test_outside_segment(xy):
    x, y = xy
    z = 2 * x - y
    seg = Segment(x, y)
    assert segment_membership(seg, z) is None
    assert seg.solve(z)[1] == 0
    assert z not in seg


def test_line_membership_examples(xy, V22, two_atoms):
    x, y = xy
    assert line_membership(Line(x, y), 2 * x - y).values == (2, 2)
    off = V22.element([[1, 2], [7, 7]])
    assert line_membership(Line(x, y), off) is None
    u = V22.element([[1, 1], [2, -1]])
    a = two_atoms.event([1])
    lam = line_membership(Line(u, V22.zero()), indicator(a) * u)
    assert lam.equals(indicator(a))


def test_line_set_equality(xy):
    x, y = xy
    assert Line(x, y) == Line(y, x)
    assert Line(x, y) == Line(2 * x - y, y)
    assert Line(x, y) != Line(x, x + x)


def test_mismatched_modules(xy):
    x, _ = xy
    other = RegularModule.free(SampleSpace.uniform(2), 3).zero()
    with pytest.raises(SpaceMismatchError):
        Segment(x, x).solve(other)


def test_float_mode_segment():
    sp = SampleSpace.uniform(2, mode="float")
    V = RegularModule.free(sp, 2)
    x, y = V.element([[1.0, 0.0], [0.0, 1.0]]), V.element([[0.0, 0.0], [0.0, 0.0]])
    z = V.element([[0.1 + 0.2, 0.0], [1e-12, 1.0]])
    lam = segment_membership(Segment(x, y), z)
    assert lam is not None and abs(lam[0] - 0.3) < 1e-9


def test_image_identity_passes(xy, small_plan):
    x, y = xy
    T = identity_map(x.module)
    assert segment_image_equals(T, x, y, small_plan).passed
    assert line_image_equals(T, x, y, small_plan).passed


def test_affine_image_passes_symbolically_and_by_sampling(xy, small_plan):
    x, y = xy
    T = affine_map(x.module, [((2, 1), (1, 1)), ((0, 1), (-1, 0))], x.module.element([[1, 0], [0, 2]]))
    cert = segment_image_equals(T, x, y, small_plan)
    assert cert.passed and cert.evidence["method"] == "symbolic"
    sampled = segment_image_equals(T, x, y, small_plan, symbolic=False)
    assert sampled.passed and sampled.evidence["method"] == "sampled"
    assert line_image_equals(T, x, y, small_plan, symbolic=False).passed


def test_cube_bends_segments(small_plan):
    V = RegularModule.free(SampleSpace.uniform(1), 2)
    T = Atomwise(V, (Power(3),))
    x, y = V.element([[1, 0]]), V.element([[0, 1]])
    cert = segment_image_equals(T, x, y, small_plan)
    assert not cert.passed
    w = cert.witness
    # the witness point's image is off the image segment at the reported atom
    tx, ty = T(x), T(y)
    assert Segment(tx, ty).solve(w["image"] if "image" in w else T(w["preimage"]))[0] is None
