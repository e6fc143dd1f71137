import random
from fractions import Fraction

import pytest

from l0mod import (DimensionError, EmptyFamilyError, PartitionError, RegularModule, SampleSpace, glue,
                   indicator, is_independent, rank_decomposition, scalar_action, support_of)

from oracles import minor_rank


@pytest.fixture
def V222():
    return RegularModule.free(SampleSpace.uniform(3), 2)


def test_element_validates_dims(V22):
    with pytest.raises(DimensionError):
        V22.element([[1, 2], [3]])
    with pytest.raises(DimensionError):
        V22.element([[1, 2]])


def test_support_examples(V22, two_atoms):
    z = V22.zero()
    assert support_of(z).is_empty()
    assert (~support_of(z)).is_full()
    x = V22.element([[1, 0], [0, 0]])
    assert support_of(x).atoms == {0}


def test_invertible_scalar_keeps_full_support(V22, two_atoms):
    x = V22.element([[1, 0], [0, 3]])
    xi = two_atoms.scalar((Fraction(-2, 5), 7))
    assert x.has_full_support()
    assert support_of(xi * x).is_full()


def test_independence_basis(V22):
    assert is_independent(V22.basis(0), V22.basis(1)).passed


def test_dependence_witness(V22, two_atoms):
    x = V22.element([[1, 1], [1, 0]])
    y = V22.element([[2, 2], [0, 1]])
    cert = is_independent(x, y)
    assert not cert.passed
    w = cert.witness
    assert w["atom"] == 0
    assert w["xi"].values == (2, 0) and w["eta"].values == (-1, 0)
    assert (w["xi"] * x + w["eta"] * y).equals(V22.zero())


def test_zero_vector_breaks_independence(V22, two_atoms):
    x = V22.element([[1, 0], [0, 0]])
    y = V22.element([[0, 1], [5, 5]])
    cert = is_independent(x, y)
    assert not cert.passed
    assert cert.witness["atom"] == 1
    assert cert.witness["xi"].values == (0, 1) and cert.witness["eta"].values == (0, 0)


def test_rank_decomposition_examples(V22, V222):
    part = rank_decomposition([V22.zero()])
    assert [(r, ev.atoms) for r, ev in part.classes] == [(0, frozenset({0, 1}))]
    part = rank_decomposition([V22.basis(0), V22.basis(1)])
    assert [(r, ev.atoms) for r, ev in part.classes] == [(2, frozenset({0, 1}))]
    x = V222.element([[1, 0], [1, 0], [0, 0]])
    y = V222.element([[0, 1], [2, 0], [0, 0]])
    part = rank_decomposition([x, y])
    assert part.as_dict() == {2: {0}, 1: {1}, 0: {2}}
    assert [minor_rank([x[a], y[a]]) for a in range(3)] == [2, 1, 0]


def test_rank_decomposition_basis_elements(V222):
    x = V222.element([[1, 0], [1, 0], [0, 0]])
    y = V222.element([[0, 1], [2, 0], [0, 0]])
    part = rank_decomposition([x, y])
    (b,) = part.basis_elements([x, y], 1)
    assert b.vecs == ((0, 0), (1, 0), (0, 0))
    assert part.basis_elements([x, y], 3) == []


def test_rank_decomposition_empty():
    with pytest.raises(EmptyFamilyError):
        rank_decomposition([])


def test_rank_mixed_dims():
    sp = SampleSpace.uniform(3)
    V = RegularModule(sp, (3, 1, 0))
    g = [V.element([[1, 2, 3], [0], []]), V.element([[2, 4, 6], [4], []]), V.element([[0, 0, 1], [1], []])]
    part = rank_decomposition(g)
    assert [part.rank_at(a) for a in range(3)] == [2, 1, 0]


def test_glue_examples(V22, two_atoms):
    x = V22.element([[1, 2], [3, 4]])
    assert glue([(two_atoms.omega, x)]).equals(x)
    a = two_atoms.event([0])
    assert glue([(a, x), (~a, x)]).equals(x)
    y = V22.element([[9, 9], [8, 8]])
    g = glue([(a, x), (~a, y)])
    assert (indicator(a) * g).equals(indicator(a) * x)
    assert (indicator(~a) * g).equals(indicator(~a) * y)


def test_glue_rejects_bad_partitions(V22, two_atoms):
    x = V22.zero()
    with pytest.raises(PartitionError):
        glue([(two_atoms.omega, x), (two_atoms.event([0]), x)])
    with pytest.raises(PartitionError):
        glue([(two_atoms.event([0]), x)])


def test_scalar_action_examples(V22, two_atoms):
    x = V22.element([[1, Fraction(1, 2)], [-3, 4]])
    assert (1 * x).equals(x)
    assert scalar_action(two_atoms.one(), x).equals(x)
    a = two_atoms.event([1])
    assert (indicator(a) * x + indicator(~a) * x).equals(x)
    assert (0 * x).equals(V22.zero())


def test_module_laws_random(V222):
    rng = random.Random(3)
    sp = V222.space
    for _ in range(50):
        x, y = (V222.element([[rng.randint(-5, 5) for _ in range(2)] for _ in range(3)]) for _ in range(2))
        xi, eta = (sp.scalar([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)])
                   for _ in range(2))
        assert (xi * (x + y)).equals(xi * x + xi * y)
        assert ((xi + eta) * x).equals(xi * x + eta * x)
        assert ((xi * eta) * x).equals(xi * (eta * x))
