import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covspde.covsolve import (CovOperator, assemble_constraints, check_covariance_global, check_reflection_covariance,
                              commutant_mass_terms, project_onto_span, reflection_covariant_subspace,
                              solve_cov_space, solve_intertwiner_space, span_angle)
from covspde.errors import InvalidReflection
from covspde.models3d import higgs3
from covspde.repcore import CATALOG, catalog_rep, conjugate, reflection_image, trivial_rep

coeffs3 = st.lists(st.floats(-3, 3), min_size=3, max_size=3)


def test_constraint_shape():
    rep = catalog_rep("D0+D1")
    sys_ = assemble_constraints(rep)
    l, D, N = 3, 3, 4
    assert sys_.matrix.shape == (l * D * N * N, D * N * N)


@pytest.mark.parametrize("name,dim", [("D0", 0), ("D1", 1), ("D0+D1", 3), ("D1+D1", 4), ("Dhalf+Dhalf", 4)])
def test_dimensions(name, dim):
    rep = catalog_rep(name)
    assert assemble_constraints(rep).dimension == dim
    basis = solve_cov_space(rep)
    assert len(basis) == dim
    for op in basis:
        assert op.covariance_residual() < 1e-9


def test_basis_orthonormal_and_canonical():
    basis = solve_cov_space(catalog_rep("D1+D1"))
    V = np.stack([np.concatenate([b.ravel() for b in op.B]) for op in basis])
    assert np.allclose(V @ V.T, np.eye(len(basis)), atol=1e-12)
    for v in V:
        first = v[np.abs(v) > 1e-12][0]
        assert first > 0
    again = solve_cov_space(catalog_rep("D1+D1"))
    for a, b in zip(basis, again):
        assert all(np.array_equal(x, y) for x, y in zip(a.B, b.B))


def test_d1_is_curl():
    (op,) = solve_cov_space(catalog_rep("D1"))
    eps = np.zeros((3, 3, 3))
    for i, j, k, s in [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)]:
        eps[i, j, k] = s
    curl = np.concatenate([eps[:, :, k].ravel() for k in range(3)])
    v = np.concatenate([b.ravel() for b in op.B])
    assert abs(abs(v @ curl) / np.linalg.norm(curl) - 1.0) < 1e-12


@pytest.mark.parametrize("name", CATALOG)
def test_global_covariance(name):
    rng = np.random.default_rng(3)
    for op in solve_cov_space(catalog_rep(name)):
        for _ in range(50):
            assert check_covariance_global(op, rng.normal(scale=2.0, size=3)) < 1e-7


def test_global_covariance_zero_and_perturbed():
    rep = catalog_rep("D0+D1")
    zero = CovOperator(rep, tuple(np.zeros((4, 4)) for _ in range(3)), np.zeros((4, 4)))
    assert check_covariance_global(zero, [0.3, -0.2, 1.1]) == 0.0
    op = solve_cov_space(rep)[0]
    B = [b.copy() for b in op.B]
    B[0][0, 1] += 0.1
    bad = CovOperator(rep, tuple(B), np.zeros((4, 4)))
    assert check_covariance_global(bad, [0.3, -0.2, 1.1]) > 1e-3


@given(coeffs3)
def test_random_combination_covariant(c):
    basis = solve_cov_space(catalog_rep("D0+D1"))
    B = tuple(sum(ci * op.B[j] for ci, op in zip(c, basis)) for j in range(3))
    op = CovOperator(basis[0].rep, B, np.zeros((4, 4)))
    assert op.covariance_residual() < 1e-9 * (1 + max(map(abs, c)))


def test_intertwiners_reduce_to_cov():
    for name in ("D0+D1", "D1+D1", "Dhalf+Dhalf"):
        rep = catalog_rep(name)
        inter = solve_intertwiner_space(rep, rep)
        cov = [op.B for op in solve_cov_space(rep)]
        assert span_angle(inter, cov) < 1e-8


def test_gradient_and_divergence():
    t, v = trivial_rep(3), catalog_rep("D1")
    grad = solve_intertwiner_space(t, v)
    div = solve_intertwiner_space(v, t)
    assert len(grad) == 1 and len(div) == 1
    G = np.stack([b[:, 0] for b in grad[0]], axis=1)
    assert np.allclose(G / G[0, 0], np.eye(3))
    Dv = np.stack([b[0, :] for b in div[0]], axis=1)
    assert np.allclose(Dv / Dv[0, 0], np.eye(3))


@pytest.mark.parametrize("name", ["D0+D1", "D1+D1", "Dhalf+Dhalf"])
def test_dimension_conjugation_invariant(name):
    rng = np.random.default_rng(4)
    rep = catalog_rep(name)
    Q, _ = np.linalg.qr(rng.normal(size=(rep.N, rep.N)))
    assert len(solve_cov_space(conjugate(rep, Q))) == len(solve_cov_space(rep))


@pytest.mark.parametrize("name", ["D0+D1", "D1+D1", "Dhalf+Dhalf"])
def test_transpose_in_span(name):
    basis = solve_cov_space(catalog_rep(name))
    for op in basis:
        assert project_onto_span(tuple(b.T for b in op.B), basis) < 1e-9


def test_commutant():
    m = commutant_mass_terms(catalog_rep("D0+D1"))
    assert len(m) == 2
    P0 = np.diag([1.0, 0, 0, 0])
    P1 = np.diag([0.0, 1, 1, 1])
    for P in (P0, P1):
        V = np.stack([x.ravel() for x in m], axis=1)
        coef, *_ = np.linalg.lstsq(V, P.ravel(), rcond=None)
        assert np.allclose(V @ coef, P.ravel())
    m2 = commutant_mass_terms(catalog_rep("D1+D1"))
    V = np.stack([x.ravel() for x in m2], axis=1)
    target = np.diag([2.0] * 3 + [5.0] * 3).ravel()
    coef, *_ = np.linalg.lstsq(V, target, rcond=None)
    assert np.allclose(V @ coef, target)
    assert len(commutant_mass_terms(trivial_rep(3))) == 1


def test_reflection_higgs3():
    R = reflection_image(catalog_rep("D0+D1"), (1, -1))
    assert check_reflection_covariance(higgs3(c=0.0), R)[0]
    assert not check_reflection_covariance(higgs3(c=0.7), R)[0]


def test_reflection_d1d1_uniform_parity_empty():
    rep = catalog_rep("D1+D1")
    for s in (1, -1):
        assert reflection_covariant_subspace(rep, reflection_image(rep, s)) == []


def test_reflection_needs_involution():
    op = higgs3()
    with pytest.raises(InvalidReflection):
        check_reflection_covariance(op, 2 * np.eye(4))
