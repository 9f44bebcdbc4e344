import pytest

from btembed import Matrix, validate_beta
from btembed.beta import embed_component_endo, h_subspace_basis
from btembed.errors import FactorizationMismatch, NotSkew, TwoZeroComponents

from helpers import ALL_SCENARIOS, F, scenario, space

o, z = F.one, F.zero
X = [z, o]


def test_zero_beta_on_hermitian_plane():
    d = validate_beta(space("hyp2"), Matrix.zeros(F, 2), [{"min_poly": X}])
    assert d.J0 == [0] and d.Jplus == [] and d.components[0].is_zero
    assert d.i0 == 0 and d.has_gl1_factor


def test_swapped_eigenlines():
    beta = Matrix.diagonal(F, [o, -o])
    d = validate_beta(space("hyp2"), beta, [{"min_poly": [-o, o]}, {"min_poly": [o, o]}])
    assert d.Jplus == [0] and d.Jminus == [1] and d.pairing == {0: 1, 1: 0}
    assert d.has_gl1_factor


def test_two_zero_components_rejected():
    with pytest.raises(TwoZeroComponents):
        validate_beta(space("hyp2"), Matrix.zeros(F, 2), [{"min_poly": X}, {"min_poly": X}])


def test_non_skew_rejected():
    with pytest.raises(NotSkew):
        validate_beta(space("hyp2"), Matrix.identity(F, 2), [{"min_poly": [-o, o]}])


def test_flag_cross_check():
    with pytest.raises(FactorizationMismatch):
        validate_beta(space("sp2"), Matrix.zeros(F, 2), [{"min_poly": X}], has_gl1_factor=True)


def test_ramified_needs_uniformizer():
    with pytest.raises(FactorizationMismatch):
        validate_beta(space("sp2"), Matrix.zeros(F, 2), [{"min_poly": X, "e": 2}])


def test_embed_component_endo():
    d = scenario("glpair1").datum
    ident = Matrix.identity(F, 1)
    e0, e1 = d.idempotents
    assert embed_component_endo(d, 0, ident) == e0 - e1
    assert embed_component_endo(d, 0, Matrix.zeros(F, 1)).is_zero()
    d0 = scenario("sp2_split").datum
    assert embed_component_endo(d0, 0, Matrix.identity(F, 2)) == d0.idempotents[0]


def test_h_dimensions():
    assert len(h_subspace_basis(scenario("so2_gl1").datum)) == 1
    assert len(h_subspace_basis(scenario("sp2_split").datum)) == 3
    assert len(h_subspace_basis(scenario("glpair1").datum)) == 1
    assert len(h_subspace_basis(scenario("glpair").datum)) == 4  # gl_2
    assert len(h_subspace_basis(scenario("herm4").datum)) == 6  # so_4
    assert len(h_subspace_basis(scenario("mixed").datum)) == 4  # sp_2 + gl_1
    assert len(h_subspace_basis(scenario("unram_e").datum)) == 4  # u_2 over E
    assert len(h_subspace_basis(scenario("ram_e").datum)) == 4


@pytest.mark.parametrize("name", ALL_SCENARIOS)
def test_idempotent_identities(name):
    d = scenario(name).datum
    total = Matrix.zeros(F, d.n)
    for i, e in enumerate(d.idempotents):
        total = total + e
        assert e @ d.beta == d.beta @ e
        for j, e2 in enumerate(d.idempotents):
            assert e @ e2 == (e if i == j else Matrix.zeros(F, d.n))
    assert total == Matrix.identity(F, d.n)


@pytest.mark.parametrize("name", ALL_SCENARIOS)
def test_embedded_h_is_skew(name):
    d = scenario(name).datum
    for A in h_subspace_basis(d):
        assert d.space.sigma(A) == -A
        assert A @ d.beta == d.beta @ A


@pytest.mark.parametrize("name", ALL_SCENARIOS)
def test_gl1_flag_matches_structure(name):
    d = scenario(name).datum
    expected = d.i0 is not None or any(d.component(i).dim_over_E == 1 for i in d.Jplus)
    assert d.has_gl1_factor == expected
    assert d.has_gl1_factor == scenario(name).raw["flags"]["has_gl1_factor"]
