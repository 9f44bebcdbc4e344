import math
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from btembed import Lattice, Matrix
from btembed.embeddings import conjugate_point, j_beta, random_isometry, so2_shift
from btembed.errors import DoesNotSplit, NotSelfDual
from btembed.filtrations import (
    _h_basis,
    check_componentwise,
    component_restrict,
    endo_in_filtration,
    endo_preimage,
    exponent_matrix,
    g_cap_h,
    h_filtration,
    idempotents_in_order,
    is_extension,
    lie_filtration_g,
    recover_differences,
    square_filtration,
    square_filtration_by_hom,
)
from btembed.lattice_functions import LatticeFunction, same_function, split, translate
from btembed.matrix import unvec

from helpers import ALL_SCENARIOS, F, grid_rationals, scenario, space, split_points


def _gens(L: Lattice, n: int):
    return [unvec(F, c, n) for c in L.columns()]


def test_exponent_matrix_example():
    assert exponent_matrix(split(F, [0, Fr(1, 2)]), 0) == [[0, 1], [0, 0]]
    assert square_filtration(split(F, [0]), Fr(1, 3)) == Lattice.diagonal(F, [1])


def test_order_at_zero_is_a_ring():
    fn = split(F, [Fr(1, 4), Fr(-1, 2), 0])
    gens = _gens(square_filtration(fn, 0), 3)
    assert endo_in_filtration(fn, 0, Matrix.identity(F, 3))
    for A in gens:
        for B in gens:
            assert endo_in_filtration(fn, 0, A @ B)


def test_symplectic_plane_lie_filtration():
    sp = space("sp2")
    for a in (Fr(1, 4), Fr(-1, 3), Fr(0)):
        L = lie_filtration_g(sp, split(F, [a, -a]), 0)
        assert L.is_diagonal()
        assert list(L.diag) == [0, math.ceil(-2 * a), math.ceil(2 * a)]


def test_so2_lie_filtration_ignores_alpha():
    hyp = space("hyp2")
    for a in (Fr(0), Fr(1, 4), Fr(-3, 4)):
        assert lie_filtration_g(hyp, split(F, [a, -a]), 0).diag == (0,)


def test_lie_filtration_needs_self_dual():
    with pytest.raises(NotSelfDual):
        lie_filtration_g(space("sp2"), split(F, [0, Fr(1, 2)]), 0)


@pytest.mark.parametrize("s", [Fr(0), Fr(1, 4), Fr(-2, 3)])
def test_lie_filtration_period(s):
    y = split(F, [Fr(1, 4), Fr(-1, 4)])
    sp = space("sp2")
    assert lie_filtration_g(sp, y, s + 1) == lie_filtration_g(sp, y, s).shift(1)


def test_h_equals_g_when_E_is_F():
    d = scenario("herm4").datum
    y = split(F, [Fr(1, 2), Fr(1, 4), Fr(-1, 4), Fr(-1, 2)])
    for s in (Fr(0), Fr(1, 4), Fr(3, 4)):
        assert h_filtration(d, {0: y}, s) == lie_filtration_g(d.space, y, s, _h_basis(d))


def test_gl1_filtration_is_translation_invariant():
    # 𝔥 = gl_1: the filtration jumps at the integers whatever the offset a
    d = scenario("glpair1").datum
    for a in (Fr(0), Fr(1, 4), Fr(-1, 2)):
        x = {0: split(F, [a])}
        for s in (Fr(-1, 2), Fr(0), Fr(1, 3), Fr(1)):
                assert h_filtration(d, x, s).diag == (math.ceil(s),)


def test_mixed_h_filtration_is_block_diagonal():
    sc = scenario("mixed")
    x = sc.default_x()
    L = h_filtration(sc.datum, x, Fr(1, 4))
    sizes = [len(sc.datum.component_basis(i)) for i in sc.datum.h_indices]
    assert L.n == sum(sizes) == 4


def test_extension_examples():
    sc = scenario("sp2_split")
    x = sc.default_x()
    assert is_extension(sc.datum, j_beta(sc.datum, x), x)
    chk = is_extension(sc.datum, split(F, [Fr(1, 4), Fr(-1, 4)]), x)
    assert not chk.holds and chk.witness is not None
    so2 = scenario("so2_gl1")
    x = so2.default_x()
    y = j_beta(so2.datum, {0: so2_shift(so2.datum, 0, x[0], Fr(1, 4))})
    assert is_extension(so2.datum, y, x)


def test_component_restrict_round_trip():
    sc = scenario("mixed")
    x = sc.default_x()
    y = j_beta(sc.datum, x)
    parts = component_restrict(sc.datum, y)
    assert same_function(parts[0], x[0]) and same_function(parts[1], x[1])
    assert parts[2].alpha == tuple(-a for a in x[1].alpha)
    assert idempotents_in_order(sc.datum, y)


def test_non_split_points():
    sc = scenario("glpair")
    x = sc.default_x()
    rng = random.Random(5)
    seen = 0
    for _ in range(30):
        g, gi = random_isometry(sc.space, rng)
        y = conjugate_point(split(F, [Fr(1, 4), 0, 0, Fr(-1, 4)]), g, gi)
        if not idempotents_in_order(sc.datum, y):
            seen += 1
            assert not is_extension(sc.datum, y, x)
            with pytest.raises(DoesNotSplit):
                component_restrict(sc.datum, y)
    assert seen > 0
    assert idempotents_in_order(scenario("herm4").datum, split(F, [Fr(1, 3), 0, 0, Fr(-1, 3)]))


@pytest.mark.parametrize("name", ALL_SCENARIOS)
def test_fast_path_matches_hom_definition(name):
    sc = scenario(name)
    rng = random.Random(name)
    for _ in range(5):
        fn = split(F, [Fr(rng.randint(-4, 4), 4) for _ in range(sc.space.n)])
        for s in (Fr(0), Fr(rng.randint(-4, 4), 4)):
            assert square_filtration(fn, s) == square_filtration_by_hom(fn, s)


def test_fast_path_with_transform():
    g = Matrix(F, [[F.one, F.t(-1)], [F.zero, F.one]])
    fn = LatticeFunction(F, (Fr(1, 3), Fr(-1, 4)), g)
    for s in (Fr(0), Fr(1, 3), Fr(-1, 2)):
        assert square_filtration(fn, s) == square_filtration_by_hom(fn, s)


@settings(max_examples=30, deadline=None)
@given(split_points(2), grid_rationals(), grid_rationals())
def test_filtration_is_multiplicative(fn, s, u):
    A_gens = _gens(square_filtration(fn, s), 2)
    B_gens = _gens(square_filtration(fn, u), 2)
    for A in A_gens:
        for B in B_gens:
            assert endo_in_filtration(fn, s + u, A @ B)


@pytest.mark.parametrize("name,s0", [("unram_e", Fr(0)), ("ram_e", Fr(1, 2)), ("glpair", Fr(0))])
def test_invertible_beta_shifts_filtration(name, s0):
    sc = scenario(name)
    d = sc.datum
    i = d.h_indices[0]
    comp = d.component(i)
    b = comp.block_beta
    b_inv = b.inverse()
    x = sc.default_x()[i]
    basis = d.component_basis(i)
    for s in (Fr(0), Fr(1, 4), Fr(1, 2), Fr(3, 4)):
        gens = [sum((B.scale(w) for w, B in zip(c, basis)), Matrix.zeros(F, comp.dim))
                for c in endo_preimage(x, s, tuple(basis)).columns()]
        assert all(endo_in_filtration(x, s + s0, b @ A) for A in gens)
        assert all(endo_in_filtration(x, s - s0, b_inv @ A) for A in gens)


def test_uniformizer_in_h_filtration():
    sc = scenario("ram_e")
    x = sc.default_x()[0]
    pi = sc.datum.component(0).uniformizer
    assert endo_in_filtration(x, Fr(1, 2), pi)
    assert not endo_in_filtration(x, Fr(3, 4), pi)
    assert endo_in_filtration(x, Fr(-1, 2), pi.inverse())


def test_componentwise_equals_global_on_mixed():
    sc = scenario("mixed")
    d = sc.datum
    for x in sc.random_points(6, seed=2):
        for y in [j_beta(d, x)] + [split(F, [Fr(a, 4), Fr(b, 4), Fr(-b, 4), Fr(-a, 4)])
                                   for a in (-2, 0, 3) for b in (-1, 1)]:
            assert bool(is_extension(d, y, x)) == check_componentwise(d, y, x)


def test_herm4_differences():
    sp = scenario("herm4").space
    y = split(F, [Fr(3, 4), Fr(-1, 4), Fr(1, 4), Fr(-3, 4)])
    rep = recover_differences(sp, y)
    for (i, j), d in rep.direct.items():
        assert d == y.alpha[j] - y.alpha[i]
    assert not rep.undetermined
    assert sorted(rep.recovered) == sorted((i, sp.partner_position(i)) for i in range(4))
    for (i, j), (_, d) in rep.recovered.items():
        assert d == y.alpha[j] - y.alpha[i]
