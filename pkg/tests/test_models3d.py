import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covspde.covsolve import check_covariance_global
from covspde.errors import UnknownFamily
from covspde.models3d import (FAMILIES, ModelParams, build, compare_determinant, compare_green_higgs3,
                              compare_green_vector2, compare_poisson_higgs3, compare_poisson_vector2,
                              dirac_factorization_check, higgs3_admissible_rule, in_solved_span,
                              proca_gaussian_check, reference_green_higgs3, reference_symbol,
                              vector2_green_denominator_check)
from covspde.symcalc import invert_symbol, spectrum_of, symbol_eval

pos = st.floats(0.3, 2.0)
RNG_P = np.random.default_rng(42).normal(size=(20, 3))


@pytest.mark.parametrize("fam", ["higgs3", "vector2", "spinor", "dirac_left", "dirac_right"])
def test_symbol_matches_closed_form(fam):
    rng = np.random.default_rng(1)
    names = FAMILIES[fam][0]
    params = ModelParams(fam, dict(zip(names, rng.uniform(0.3, 2.0, len(names)))))
    op = build(params)
    ref = reference_symbol(params)
    for p in RNG_P:
        assert np.allclose(symbol_eval(op, p), ref(p), atol=1e-12)


@pytest.mark.parametrize("fam", ["higgs3", "vector2", "spinor", "dirac_left", "dirac_right"])
def test_build_in_solved_span(fam):
    rb, rm = in_solved_span(ModelParams(fam, {}))
    assert rb < 1e-9 and rm < 1e-9
    op = build(ModelParams(fam, {}))
    assert check_covariance_global(op, [0.4, -1.1, 0.7]) < 1e-7


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        ModelParams("tensor", {})
    with pytest.raises(UnknownFamily):
        ModelParams("higgs3", {"z": 1.0})


def test_dirac_checks():
    for side in ("left", "right"):
        r = dirac_factorization_check(side)
        assert r.passed and r.residual == 0.0
        op = build(ModelParams(f"dirac_{side}"))
        p = np.array([1.0, -2.0, 3.0])
        s = symbol_eval(op, p)
        assert np.allclose(s @ s.conj().T, 14 * np.eye(4))
    dt = dirac_factorization_check("DT")
    assert dt.details["sign"] == -1


@given(pos, pos, st.floats(-2, 2), pos, pos)
def test_determinant_regressions(a, b, c, m0, m1):
    assert compare_determinant(ModelParams("higgs3", dict(a=a, b=b, c=c, m0=m0, m1=m1)), n=20).agrees


@given(pos, st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), pos)
def test_spinor_determinant(a, b, c, d, m):
    assert compare_determinant(ModelParams("spinor", dict(a=a, b=b, c=c, d=d, m=m)), n=20).agrees


def test_vector2_determinant_flagged():
    cmp = compare_determinant(ModelParams("vector2", {}))
    assert not cmp.agrees and cmp.note
    assert vector2_green_denominator_check(ModelParams("vector2", {"m1": 0.8, "m2": 0.8})) < 1e-8


@given(pos, pos, pos, pos)
def test_green_higgs3_c0(a, b, m0, m1):
    assert compare_green_higgs3(ModelParams("higgs3", dict(a=a, b=b, c=0.0, m0=m0, m1=m1)), n=10) < 1e-8


def test_green_higgs3_scalar_corner():
    params = ModelParams("higgs3", dict(a=0.0, b=0.0, c=0.0, m0=2.0, m1=0.5))
    G = invert_symbol(build(params))
    for p in RNG_P[:5]:
        assert np.allclose(G(p), np.diag([0.5, 2.0, 2.0, 2.0]))
    assert compare_green_higgs3(params) < 1e-8


def test_green_higgs3_row0_structure():
    a, b, m0, m1 = 1.3, 0.6, 0.9, 1.2
    G = reference_green_higgs3(ModelParams("higgs3", dict(a=a, b=b, c=0.0, m0=m0, m1=m1)))
    for p in RNG_P[:5]:
        row = G(p)[0, 1:]
        ratio = row / (-1j * a * p)
        assert np.allclose(ratio, ratio[0])


def test_proca():
    r = proca_gaussian_check(1.4)
    assert r.passed
    assert r.details["offdiag_block_max"] < 1e-12
    assert r.details["p0_residual"] < 1e-12


def test_higgs3_admissibility_table():
    cases = [
        (1.0, 1.0, 0.0, 1.0, 1.0),
        (1.0, 1.0, 0.5, 1.0, 1.0),
        (1.0, -1.0, 0.0, 1.0, 1.0),
        (0.0, 1.0, 0.0, 1.0, 1.0),
        (1.0, 1.0, 0.0, 1.0, 0.0),
        (2.0, 0.5, 0.0, -1.0, -2.0),
        (1.0, 1.0, 1.0, 1.0, 0.0),
    ]
    for args in cases:
        op = build(ModelParams("higgs3", dict(zip(("a", "b", "c", "m0", "m1"), args))))
        try:
            computed = spectrum_of(op).admissible
        except Exception:
            computed = False
        assert computed == higgs3_admissible_rule(*args), args


def test_vector2_exchange_symmetry():
    a, b, c, d, m1, m2 = 0.4, 1.1, -0.6, 0.9, 1.3, 0.7
    G = invert_symbol(build(ModelParams("vector2", dict(a=a, b=b, c=c, d=d, m1=m1, m2=m2))), force=True)
    Gx = invert_symbol(build(ModelParams("vector2", dict(a=d, b=b, c=c, d=a, m1=m2, m2=m1))), force=True)
    Gy = invert_symbol(build(ModelParams("vector2", dict(a=a, b=c, c=b, d=d, m1=m1, m2=m2))), force=True)
    for p in RNG_P[:5]:
        g, gx, gy = G(p), Gx(p), Gy(p)
        assert np.allclose(gx[3:, 3:], g[:3, :3], atol=1e-12) or np.allclose(gx[:3, :3], g[3:, 3:], atol=1e-12)
        assert np.allclose(gy[3:, :3], g[:3, 3:].T, atol=1e-12) or np.allclose(gy[:3, 3:], g[3:, :3], atol=1e-12)


def test_vector2_green_blocks_rescaled():
    r = compare_green_vector2(ModelParams("vector2", dict(a=0.3, b=1.0, c=-0.5, d=0.2, m1=1.2, m2=0.8)))
    assert r["rescaled_residual"] < 1e-8 and r["raw_residual"] > 1e-3


def test_poisson_blocks_verdicts():
    h0 = compare_poisson_higgs3(ModelParams("higgs3", {}))
    assert h0.corrected_residual < 1e-8 and h0.printed_residual > 1e-3
    assert h0.block_residuals["33"] < 1e-8
    hc = compare_poisson_higgs3(ModelParams("higgs3", {"c": 0.5}))
    assert hc.block_residuals["33"] < 1e-8 and hc.corrected_residual > 1e-3
    v = compare_poisson_vector2(ModelParams("vector2", {}), alpha=[1.0, 0.5, 0.2, 0.0, 0.0, 0.0])
    assert v.block_residuals["11"] < 1e-8
