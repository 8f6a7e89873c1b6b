import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covspde.covsolve import CovOperator, solve_cov_space
from covspde.errors import DegenerateOperator, NotInvertible, RepeatedMassUnsupported
from covspde.models3d import ModelParams, build, higgs3, scalar, spinor, vector2
from covspde.poly import MatrixPolynomial
from covspde.repcore import catalog_rep, trivial_rep
from covspde.symcalc import (compose_green, det_poly, invert_symbol, mass_spectrum, partial_fractions, symbol,
                             symbol_eval)

pos = st.floats(0.3, 2.5)


def _rand_rot(rng):
    Q, R = np.linalg.qr(rng.normal(size=(3, 3)))
    Q = Q * np.sign(np.diag(R))
    return Q if np.linalg.det(Q) > 0 else -Q


def test_symbol_of_mass_only():
    op = CovOperator(trivial_rep(3, 2), tuple(np.zeros((2, 2)) for _ in range(3)), 1.7 * np.eye(2))
    S = symbol(op)
    assert S.degree() == 0
    assert np.allclose(S.evaluate(np.array([0.3, -1.0, 2.0])), 1.7 * np.eye(2))
    assert np.allclose(det_poly(S).s_coeffs, [1.7**2])


def test_symbol_constant_term_and_linearity():
    op = higgs3(a=1.2, b=0.7, c=0.4, m0=0.9, m1=1.1)
    S = symbol(op)
    assert S.degree() <= 1
    assert np.allclose(S.evaluate(np.zeros(3)), op.M)
    p = np.array([0.3, -0.4, 1.2])
    assert np.allclose(symbol_eval(op, p), op.M + 1j * sum(pj * B for pj, B in zip(p, op.B)))


def test_dirac_left_symbol():
    op = build(ModelParams("dirac_left"))
    rng = np.random.default_rng(5)
    for p in rng.normal(size=(5, 3)):
        s = symbol_eval(op, p)
        assert np.allclose(s @ s.conj().T, (p @ p) * np.eye(4))


@given(pos, pos, st.floats(-2, 2), pos, pos)
def test_higgs3_det(a, b, c, m0, m1):
    d = det_poly(symbol(higgs3(a, b, c, m0, m1)))
    for s in (0.0, 0.7, 2.3):
        want = (-c * c * s + m1 * m1) * (a * b * s + m0 * m1)
        assert abs(d.in_s(s) - want) <= 1e-9 * (1 + abs(want))


@given(pos, st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), pos)
def test_spinor_det(a, b, c, d_, m):
    d = det_poly(symbol(spinor(a, b, c, d_, m)))
    k = a * a + b * b + c * c + d_ * d_
    for s in (0.0, 0.5, 1.9):
        want = (k * s + m * m) ** 2 - 4 * m * m * b * b * s
        assert abs(d.in_s(s) - want) <= 1e-9 * (1 + abs(want))


def test_det_matches_numpy_and_is_isotropic():
    rng = np.random.default_rng(6)
    for op in (higgs3(1.1, 0.8, 0.3, 0.7, 1.4), vector2(0.2, 1.0, -0.7, 0.4, 1.2, 0.9), spinor(1, 0.3, 0.2, 0.1, 1)):
        d = det_poly(symbol(op))
        assert d.isotropic
        for p in rng.normal(size=(10, 3)):
            assert np.isclose(d(p), np.linalg.det(symbol_eval(op, p)), rtol=1e-10)


def test_det_rotation_invariant():
    rng = np.random.default_rng(7)
    for name in ("D0+D1", "D1+D1", "Dhalf+Dhalf"):
        basis = solve_cov_space(catalog_rep(name))
        for _ in range(20):
            c = rng.normal(size=len(basis))
            B = tuple(sum(ci * op.B[j] for ci, op in zip(c, basis)) for j in range(3))
            op = CovOperator(basis[0].rep, B, np.eye(basis[0].N))
            p = rng.normal(size=3)
            g = _rand_rot(rng)
            d0 = np.linalg.det(symbol_eval(op, p))
            assert abs(np.linalg.det(symbol_eval(op, g @ p)) - d0) <= 1e-8 * (1 + abs(d0))


def test_spectrum_higgs3_defaults():
    ms = mass_spectrum(higgs3())
    assert np.isclose(ms.C, 1.0)
    assert len(ms.masses2) == 1 and np.isclose(ms.masses2[0], 1.0)
    assert ms.admissible


def test_spectrum_higgs3_c_nonzero_not_admissible():
    ms = mass_spectrum(higgs3(c=1.0))
    assert not ms.admissible
    assert ms.note


def test_spectrum_proca():
    ms = mass_spectrum(vector2(0.0, 1.0, -1.0, 0.0, 1.5, 1.5))
    assert len(ms.masses2) == 2 and np.allclose(ms.masses2, [2.25, 2.25])
    assert not ms.distinct


def test_degenerate_operator():
    zero = CovOperator(catalog_rep("D1"), tuple(np.zeros((3, 3)) for _ in range(3)), np.zeros((3, 3)))
    with pytest.raises(DegenerateOperator):
        mass_spectrum(zero)


@given(pos, pos, pos, pos)
def test_spectrum_reconstructs_det(a, b, m0, m1):
    op = higgs3(a, b, 0.0, m0, m1)
    ms = mass_spectrum(op)
    d = det_poly(symbol(op))
    for s in np.linspace(0, 3, 7):
        assert abs(ms.reconstruct(s) - d.in_s(s)) <= 1e-8 * (1 + abs(d.in_s(s)))
    assert np.isclose(ms.masses2[0], m0 * m1 / (a * b))


def test_invert_scalar():
    G = invert_symbol(scalar(2.0))
    assert np.allclose(G(np.array([0.4, 0.1, -3.0])), [[0.5]])


def test_invert_product_identity():
    rng = np.random.default_rng(8)
    op = higgs3(1.3, 0.6, 0.0, 0.8, 1.7)
    G = invert_symbol(op)
    for p in rng.normal(size=(20, 3)):
        assert np.allclose(symbol_eval(op, p) @ G(p), np.eye(4), atol=1e-8)


def test_invert_not_admissible():
    with pytest.raises(NotInvertible):
        invert_symbol(higgs3(c=1.0))
    invert_symbol(higgs3(c=1.0), force=True)


def test_partial_fractions_two_masses():
    one = MatrixPolynomial.constant(3, 1.0)
    pf = partial_fractions(one, 1.0, [1.0, 4.0])
    coef = {round(t.m2.real if isinstance(t.m2, complex) else t.m2): t.B.evaluate(np.zeros(2)) for t in pf.terms}
    assert np.isclose(coef[1], 1 / 3) and np.isclose(coef[4], -1 / 3)
    rng = np.random.default_rng(9)
    for p in rng.normal(size=(10, 3)):
        s = p @ p
        assert np.isclose(pf.evaluate(p), 1 / ((s + 1) * (s + 4)))


def test_partial_fractions_p0_numerator():
    pf = partial_fractions(MatrixPolynomial.variable(3, 0), 1.0, [2.0])
    (t,) = pf.terms
    q = np.array([0.3, -0.2])
    assert np.isclose(t.A.evaluate(q), 1.0) and np.isclose(t.B.evaluate(q), 0.0)


def test_partial_fractions_repeated_mass():
    with pytest.raises(RepeatedMassUnsupported):
        partial_fractions(MatrixPolynomial.constant(3, 1.0), 1.0, [1.0, 1.0])


def test_compose_green():
    G1 = compose_green([higgs3()])
    G0 = invert_symbol(higgs3())
    p = np.array([0.2, 0.5, -1.0])
    assert np.allclose(G1(p), G0(p))
    assert np.allclose(compose_green([scalar(3.0), scalar(3.0)])(p), [[1 / 9]])
    o1, o2 = higgs3(1.0, 1.0, 0.0, 1.0, 1.0), higgs3(0.5, 2.0, 0.0, 1.5, 0.7)
    G = compose_green([o1, o2])
    for q in np.random.default_rng(10).normal(size=(5, 3)):
        want = np.linalg.inv(symbol_eval(o1, q) @ symbol_eval(o2, q))
        assert np.allclose(G(q), want, atol=1e-10)
