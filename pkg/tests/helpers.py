"""Shared strategies and small builders for the test suite."""

from fractions import Fraction
from functools import lru_cache

from hypothesis import strategies as st

from btembed import Field, Matrix, make_witt_space
from btembed.lattice_functions import split
from btembed.scenario import bundled_names, load_scenario

F = Field(3)

SPACES = {
    "hyp2": (2, 1, 1, ()),
    "sp2": (2, 1, -1, ()),
    "herm3": (3, 1, 1, (1,)),
    "herm4": (4, 2, 1, ()),
    "sp4": (4, 2, -1, ()),
    "herm5": (5, 2, 1, (2,)),
}


@lru_cache(maxsize=None)
def space(name):
    return make_witt_space(F, *SPACES[name])


@lru_cache(maxsize=None)
def scenario(name):
    return load_scenario(name)


ALL_SCENARIOS = bundled_names()


def laurent(coeffs, val=0):
    return F.laurent(list(coeffs), val)


scalars = st.builds(laurent, st.lists(st.integers(0, 2), min_size=0, max_size=4), st.integers(-2, 2))
units = st.builds(lambda c, rest: laurent([c] + rest, 0), st.integers(1, 2), st.lists(st.integers(0, 2), max_size=3))


def matrices(n, m=None, elements=scalars):
    m = n if m is None else m
    return st.lists(st.lists(elements, min_size=m, max_size=m), min_size=n, max_size=n).map(
        lambda rows: Matrix(F, rows))


def integral_matrices(n):
    small = st.builds(laurent, st.lists(st.integers(0, 2), max_size=3), st.integers(0, 2))
    return matrices(n, elements=small)


def unimodular(n):
    """Products of elementary integral matrices and unit diagonals: invertible over o."""
    def build(ops):
        g = Matrix.identity(F, n)
        for i, j, c in ops:
            if i == j:
                continue
            g = g @ (Matrix.identity(F, n) + Matrix.unit(F, n, i, j, c))
        return g
    small = st.builds(laurent, st.lists(st.integers(0, 2), min_size=1, max_size=2), st.integers(0, 1))
    return st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), small), max_size=4).map(build)


def grid_rationals(N=4, K=4):
    return st.integers(-K, K).map(lambda k: Fraction(k, N))


def split_points(n, N=4, K=4):
    return st.lists(grid_rationals(N, K), min_size=n, max_size=n).map(lambda a: split(F, a))


def self_dual_alpha(sp, values):
    alpha = [Fraction(0)] * sp.n
    for p, v in zip(sp.positive_positions(), values):
        alpha[p] = v
        alpha[sp.partner_position(p)] = -v
    return alpha
