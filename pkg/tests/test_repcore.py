import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covspde.errors import IncompatibleReps, InvalidReflection, NotInCatalog, UnsupportedDimension
from covspde.repcore import (CATALOG, REALIFICATION, Representation, bracket_residual, catalog_rep, conjugate,
                             defining_rep, direct_sum, reflection_image, rep_exponential, so_generators, trivial_rep)

coeffs3 = st.lists(st.floats(-4, 4), min_size=3, max_size=3)


def test_direct_sum_sizes():
    assert direct_sum(trivial_rep(3), defining_rep(3)).N == 4
    assert direct_sum(defining_rep(3), defining_rep(3)).N == 6
    tt = direct_sum(trivial_rep(3), trivial_rep(3))
    assert tt.N == 2 and all(np.all(T == 0) for T in tt.dgen)


def test_direct_sum_needs_same_group():
    with pytest.raises(IncompatibleReps):
        direct_sum(trivial_rep(3), trivial_rep(4))


def test_catalog_sizes():
    assert catalog_rep("D1").N == 3
    assert catalog_rep("D0+D1").N == 4
    assert catalog_rep("D1+D1").N == 6
    assert catalog_rep("Dhalf+Dhalf").N == 4
    G = so_generators(3)
    for T, L in zip(catalog_rep("D1").dgen, G.generators):
        assert np.array_equal(T, L)


def test_unknown_catalog_name():
    with pytest.raises(NotInCatalog):
        catalog_rep("D2")


@pytest.mark.parametrize("name", sorted(REALIFICATION))
def test_realification_unitary(name):
    E = REALIFICATION[name]
    assert np.max(np.abs(E @ E.conj().T - np.eye(len(E)))) < 1e-12


@pytest.mark.parametrize("name", CATALOG)
def test_bracket_closure(name):
    rep = catalog_rep(name)
    assert bracket_residual(rep.group, rep.dgen) < 1e-10


@pytest.mark.parametrize("name", CATALOG)
def test_exponential_orthogonal(name):
    rng = np.random.default_rng(0)
    rep = catalog_rep(name)
    for _ in range(100):
        Q = rep_exponential(rep, rng.normal(scale=2.0, size=3))
        assert np.max(np.abs(Q.T @ Q - np.eye(rep.N))) < 1e-8


@given(coeffs3, coeffs3)
def test_exponential_is_homomorphism_on_one_parameter_groups(c, _):
    rep = catalog_rep("D0+D1")
    c = np.asarray(c)
    assert np.allclose(rep_exponential(rep, c) @ rep_exponential(rep, 0.5 * c), rep_exponential(rep, 1.5 * c),
                       atol=1e-9)


def test_defining_rep_matches_group_element():
    rng = np.random.default_rng(1)
    rep = defining_rep(3)
    c = rng.normal(size=3)
    assert np.allclose(rep_exponential(rep, c), rep.group.element(c))


def test_reflection_trivial_is_one():
    assert np.array_equal(reflection_image(trivial_rep(3), 1), np.eye(1))


def test_reflection_defining_rep():
    R = reflection_image(defining_rep(3), -1)
    assert np.allclose(R, np.diag([-1.0, 1.0, 1.0]))
    assert np.isclose(np.linalg.det(R), -1.0)


@pytest.mark.parametrize("signs", [1, -1, (1, -1), (-1, 1)])
def test_reflection_scalar_vector_involution(signs):
    R = reflection_image(catalog_rep("D0+D1"), signs)
    assert np.max(np.abs(R @ R - np.eye(4))) < 1e-8


@pytest.mark.parametrize("name", ["D0", "D1", "D0+D1", "D1+D1"])
def test_reflection_commutation_pattern(name):
    rep = catalog_rep(name)
    R = reflection_image(rep, -1)
    for (j, k), T in zip(rep.group.planes, rep.dgen):
        s = 1 if 0 not in (j, k) else -1
        assert np.allclose(R @ T @ R, s * T, atol=1e-10)


def test_reflection_even_dimension_unsupported():
    with pytest.raises(UnsupportedDimension):
        reflection_image(trivial_rep(4), 1)


def test_half_integer_has_no_reflection():
    with pytest.raises(InvalidReflection):
        reflection_image(catalog_rep("Dhalf+Dhalf"), 1)


@pytest.mark.parametrize("name", CATALOG)
def test_json_round_trip(name):
    rep = catalog_rep(name)
    back = Representation.from_json(rep.to_json())
    assert back.N == rep.N and back.D == rep.D and back.label == rep.label
    for a, b in zip(rep.dgen, back.dgen):
        assert np.array_equal(a, b)


def test_conjugate_preserves_brackets():
    rng = np.random.default_rng(2)
    Q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
    rep = conjugate(catalog_rep("D1+D1"), Q)
    assert rep.bracket_residual() < 1e-10
