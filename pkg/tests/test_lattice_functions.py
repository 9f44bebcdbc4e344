from fractions import Fraction as Fr

from hypothesis import given, settings, strategies as st

from btembed import Lattice, Matrix
from btembed.embeddings import j_beta
from btembed.lattice_functions import (
    as_split,
    dual_fn,
    eval_fn,
    is_oE_function,
    is_self_dual,
    jumps,
    offset_between,
    pointwise_dual,
    same_function,
    so2_model_point,
    split,
    translate,
)

from helpers import ALL_SCENARIOS, F, SPACES, grid_rationals, scenario, self_dual_alpha, space, split_points, unimodular
from btembed.lattice_functions import LatticeFunction

half = Fr(1, 2)


def test_eval_examples():
    assert eval_fn(split(F, [0]), 0) == Lattice.standard(F, 1)
    assert eval_fn(split(F, [0, half]), half) == Lattice.diagonal(F, [1, 0])


def test_hyperbolic_apartment_is_self_dual():
    hyp = space("hyp2")
    for a in (Fr(0), Fr(1, 3), Fr(-3, 4)):
        y = split(F, [a, -a])
        assert is_self_dual(hyp, y)
        assert is_self_dual(hyp, translate(y, 0))
        assert dual_fn(hyp, translate(y, Fr(1, 4))) == translate(y, Fr(-1, 4))


def test_translation_examples():
    fn = split(F, [Fr(1, 3), Fr(-1, 5)])
    assert same_function(translate(fn, 0), fn)
    for s in (Fr(0), Fr(1, 7), Fr(2, 3)):
        assert eval_fn(translate(fn, 1), s) == eval_fn(fn, s).shift(1)
    assert eval_fn(translate(split(F, [0]), half), 0) == Lattice.diagonal(F, [1])


def test_offset_between_examples():
    fn = split(F, [Fr(1, 4), Fr(-1, 2)])
    assert offset_between(fn, translate(fn, Fr(1, 3))) == Fr(1, 3)
    assert offset_between(fn, fn) == 0
    assert offset_between(split(F, [0, 0]), split(F, [0, half])) is None


def test_so2_model_point():
    assert eval_fn(so2_model_point(F, 0), 0) == Lattice.standard(F, 2)
    assert eval_fn(so2_model_point(F, half), half) == Lattice.diagonal(F, [0, 1])


def test_oE_examples():
    d = scenario("herm4").datum
    assert is_oE_function(d, split(F, [Fr(1, 3), 0, 0, Fr(-1, 3)]))
    ram = scenario("ram_e").datum
    cert = is_oE_function(ram, split(F, [0, 0, 0, 0]))
    assert not cert.holds and cert.failures
    good = split(F, [Fr(-1, 4), Fr(1, 4), Fr(-1, 4), Fr(1, 4)])
    cert = is_oE_function(ram, good)
    assert cert.holds
    assert cert.ramification[0] == {"e": 2, "uniformizer_at_1/e": True, "inverse_at_-1/e": True}


def test_as_split_recovers_coordinates():
    g = Matrix(F, [[F.one, F.t()], [F.zero, F.one]])  # in GL_2(o): same lattices
    fn = LatticeFunction(F, (Fr(1, 3), Fr(-1, 3)), g)
    assert as_split(fn).alpha == (Fr(1, 3), Fr(-1, 3))
    h = Matrix(F, [[F.one, F.t(-1)], [F.zero, F.one]])
    assert as_split(LatticeFunction(F, (0, 0), h)) is None


@settings(max_examples=60, deadline=None)
@given(split_points(3), grid_rationals(), grid_rationals())
def test_eval_is_decreasing_and_periodic(fn, s, ds):
    lo, hi = min(s, s + abs(ds)), max(s, s + abs(ds))
    assert eval_fn(fn, lo).contains_lattice(eval_fn(fn, hi))
    assert eval_fn(fn, s + 1) == eval_fn(fn, s).shift(1)


@settings(max_examples=60, deadline=None)
@given(split_points(4))
def test_jumps_with_multiplicity(fn):
    js = jumps(fn)
    for j in js:
        before = eval_fn(fn, j).det_valuation()
        after = eval_fn(fn, j + Fr(1, 1000)).det_valuation()
        mult = sum(1 for a in fn.alpha if (a - j).denominator == 1)
        assert after - before == mult


@st.composite
def space_and_fn(draw, transformed=False):
    name = draw(st.sampled_from(sorted(SPACES)))
    sp = space(name)
    fn = draw(split_points(sp.n))
    if transformed:
        g = draw(unimodular(sp.n))
        fn = LatticeFunction(F, fn.alpha, g @ Matrix.diagonal(F, [F.t(draw(st.integers(-1, 1)))] + [F.one] * (sp.n - 1)))
    return sp, fn


@settings(max_examples=60, deadline=None)
@given(space_and_fn(transformed=True))
def test_dual_is_an_involution(data):
    sp, fn = data
    assert same_function(dual_fn(sp, dual_fn(sp, fn)), fn)


@settings(max_examples=40, deadline=None)
@given(space_and_fn(transformed=True))
def test_closed_form_dual_matches_pointwise(data):
    sp, fn = data
    d = dual_fn(sp, fn)
    for s in sorted(set(jumps(d)) | {Fr(1, 7)}):
        assert eval_fn(d, s) == pointwise_dual(sp, fn, s)


@settings(max_examples=60, deadline=None)
@given(space_and_fn(), grid_rationals())
def test_dual_reverses_translation(data, s):
    sp, fn = data
    assert same_function(dual_fn(sp, translate(fn, s)), translate(dual_fn(sp, fn), -s))


@settings(max_examples=50, deadline=None)
@given(split_points(3), st.fractions(min_value=-2, max_value=2, max_denominator=12))
def test_offset_between_recovers_shift(fn, s):
    assert offset_between(fn, translate(fn, s)) == s


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(SPACES)), st.lists(grid_rationals(), min_size=2, max_size=2))
def test_self_dual_apartment(name, vals):
    sp = space(name)
    assert is_self_dual(sp, split(F, self_dual_alpha(sp, vals)))


def test_j_output_is_oE():
    for name in ALL_SCENARIOS:
        sc = scenario(name)
        for x in sc.random_points(10, seed=3):
            assert is_oE_function(sc.datum, j_beta(sc.datum, x)), name
