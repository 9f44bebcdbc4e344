import random
from fractions import Fraction as Fr

import pytest

from btembed.errors import NotAffine
from btembed.rigidity import (
    affine_solution_space,
    build_tree_ball,
    constants_satisfy,
    equivariant_translation,
    fit_affine,
    periodic_affine_is_constant,
)


def test_tree_counts():
    assert len(build_tree_ball(2, 2).types) == 10
    assert len(build_tree_ball(3, 2).types) == 17
    star = build_tree_ball(2, 1)
    assert len(star.types) == 4 and star.panel_degree(0) == 3


def test_thickness_of_interior():
    m = build_tree_ball(3, 3)
    assert all(m.panel_degree(v) == 4 for v in m.interior())
    assert all(m.types[a] != m.types[b] for a, b in m.chambers)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("R", [2, 3])
def test_thick_trees_are_rigid(q, R):
    m = build_tree_ball(q, R)
    assert affine_solution_space(m) == 1
    assert constants_satisfy(m, 5)


def test_thin_model_has_affine_functions():
    assert affine_solution_space(build_tree_ball(1, 3)) == 2


def test_periodic_examples():
    assert periodic_affine_is_constant([(0, 5), (1, 5), (Fr(1, 2), 5)], 1)
    v = periodic_affine_is_constant([(0, Fr(1, 2)), (1, Fr(3, 2))], 1)
    assert not v.hypothesis and not v
    assert equivariant_translation([(0, 0), (1, 1), (Fr(1, 3), Fr(1, 3))]) == 0
    assert equivariant_translation([(0, Fr(1, 4)), (2, Fr(9, 4))]) == Fr(1, 4)
    assert equivariant_translation([(0, 0), (1, 2)]) is None


def test_non_collinear_samples():
    with pytest.raises(NotAffine):
        fit_affine([(0, 0), (1, 1), (2, 5)])


def test_random_affine_maps():
    rng = random.Random(0)
    for _ in range(100):
        k = Fr(rng.randint(-3, 3), rng.randint(1, 4))
        c = Fr(rng.randint(-5, 5), rng.randint(1, 3))
        xs = rng.sample(range(-10, 10), 3)
        v = periodic_affine_is_constant([(x, k * x + c) for x in xs], rng.randint(1, 3))
        assert v.slope == k
        assert bool(v) == (k == 0)
