import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from covspde import flwightman as fl
from covspde.errors import OutOfDomain, RepeatedMassUnsupported
from covspde.levynoise import NoiseSpec
from covspde.models3d import higgs3, klein_gordon, vector2
from covspde.symcalc import spectrum_of

vec3 = st.lists(st.floats(-2, 2), min_size=3, max_size=3)


@given(vec3, vec3, vec3)
def test_difference_map_round_trip(x1, x2, x3):
    def f(a, b, c):
        return np.linalg.norm(b - a) + 2 * np.linalg.norm(c - a) + a[0]

    fd = fl.difference_map(f)
    x1, x2, x3 = map(np.asarray, (x1, x2, x3))
    assert np.isclose(fd(x1, x2 - x1, x3 - x2), f(x1, x2, x3))
    assert np.isclose(fl.inverse_difference_map(fd)(x1, x2, x3), f(x1, x2, x3))


def test_difference_map_two_points():
    fd = fl.difference_map(lambda x, y: np.linalg.norm(y - x))
    xi = np.array([0.3, -1.0, 2.0])
    assert np.isclose(fd(np.ones(3), xi), np.linalg.norm(xi))


def test_ordering_gives_positive_time_differences():
    rng = np.random.default_rng(0)
    xs = np.sort(rng.normal(size=5))
    xis = np.diff(xs)
    assert np.all(xis > 0)


def test_fl_transform_indicator():
    v = fl.fl_transform(lambda t: 1.0 if t <= 1 else 0.0, 1.0)
    assert abs(v - (1 - np.exp(-1))) < 1e-6
    assert fl.fl_transform(lambda t: 0.0, 2.0) == 0


def test_fl_transform_grid_linear_and_bounded():
    rng = np.random.default_rng(1)
    t = np.linspace(0, 4, 401)
    x = rng.normal(size=(6, 2))
    f, g = rng.normal(size=(2, 401, 6))
    q = np.array([0.4, -0.7])
    a = fl.fl_transform(f, 0.5, t, q, x)
    b = fl.fl_transform(g, 0.5, t, q, x)
    assert np.isclose(fl.fl_transform(2 * f - g, 0.5, t, q, x), 2 * a - b)
    assert abs(a) <= np.trapezoid(np.sum(np.abs(f), axis=1), t) + 1e-12
    plain = np.trapezoid(f @ np.exp(1j * x @ q), t)
    assert np.isclose(fl.fl_transform(f, 0.0, t, q, x), plain)


def test_fl_transform_negative_q0():
    with pytest.raises(OutOfDomain):
        fl.fl_transform(lambda t: 1.0, -0.1)


def test_kernel_scalar():
    m = 1.3
    k = fl.wightman_kernel_from_green(klein_gordon(m))
    (t,) = k.terms(0, 0)
    q = np.array([0.2, 0.4])
    w = np.sqrt(q @ q + m * m)
    assert np.isclose(t.m2, m * m)
    assert np.isclose(k.shell(0, 0, q)[0][1], 1 / (2 * w))
    assert k.evaluate(0, 0, -w, q) == 0
    assert np.isclose(k.evaluate(0, 0, w, q), 1 / (2 * w))
    assert k.positive_energy()


def test_kernel_higgs_single_shell():
    op = higgs3(1.2, 0.8, 0.0, 0.9, 1.1)
    k = fl.wightman_kernel_from_green(op)
    assert np.allclose(k.masses2, [m.real for m in spectrum_of(op).masses2])
    assert np.allclose(k.masses2, [0.9 * 1.1 / (1.2 * 0.8)])
    for a in range(4):
        for b in range(4):
            assert len(k.terms(a, b)) <= len(k.masses2)
            assert np.all(k.evaluate(a, b, -np.linspace(0.1, 3, 5), np.array([0.3, 0.1])) == 0)


def test_kernel_repeated_mass():
    with pytest.raises(RepeatedMassUnsupported):
        fl.wightman_kernel_from_green(vector2())


def test_verify_scalar_matches_yukawa():
    r = fl.verify_fl_green(klein_gordon(1.0), [1.0, 0.0, 0.0])
    oracle = fl.yukawa_smoothed(1.0, [1.0, 0.0, 0.0], 0.5)
    assert r.residual < 1e-3
    assert abs(r.lhs[0, 0] - oracle) < 1e-6 and abs(r.rhs[0, 0] - oracle) < 1e-6


def test_verify_refinement():
    op = higgs3()
    assert fl.verify_fl_green(op, [1.0, 0.5, 0.0], L=64).residual < fl.verify_fl_green(op, [1.0, 0.5, 0.0],
                                                                                         L=32).residual


def test_verify_large_time_decay():
    op = klein_gordon(1.0)
    v4 = fl.verify_fl_green(op, [4.0, 0.0, 0.0]).rhs[0, 0].real
    v6 = fl.verify_fl_green(op, [6.0, 0.0, 0.0]).rhs[0, 0].real
    ratio = v6 / v4
    assert 0.5 * np.exp(-2.0) < ratio < 2 * np.exp(-2.0)


def test_verify_precondition():
    with pytest.raises(OutOfDomain):
        fl.verify_fl_green(klein_gordon(1.0), [-1.0, 0.0, 0.0])


@pytest.mark.parametrize("m", [0.5, 0.1, 0.02])
def test_mass_continuity(m):
    op = higgs3(1.0, 1.0, 0.0, m, 1.0)
    r = fl.verify_fl_green(op, [1.0, 0.0, 0.0])
    assert r.residual < 1e-3
    assert np.all(np.isfinite(r.rhs))


def test_mass_continuity_values_vary_slowly():
    vals = [fl.verify_fl_green(higgs3(1.0, 1.0, 0.0, m, 1.0), [1.0, 0.0, 0.0]).rhs[0, 0].real
            for m in (0.5, 0.1, 0.02)]
    assert np.all(np.isfinite(vals))
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])


def test_conv_identity2_examples():
    r = fl.conv_identity2(1.0, 1.0, 0.0, 1.0)
    assert abs(r.lhs - 2 / np.e) < 1e-10 and abs(r.rhs - 2 / np.e) < 1e-10
    a = fl.conv_identity2(0.7 + 0.2j, 1.9, 0.0, 1.3)
    b = fl.conv_identity2(1.9, 0.7 + 0.2j, 0.0, 1.3)
    assert abs(a.rhs - b.rhs) < 1e-10
    z1, z2 = 0.8, 1.7
    near = fl.conv_identity2(z1, z2, 0.0, 1e-7)
    assert abs(near.rhs - 2 / (z1 + z2)) < 1e-5


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.01, 3))
def test_conv_identity2_property(r1, r2, i1, i2, dt):
    assert fl.conv_identity2(complex(r1, i1), complex(r2, i2), 0.5, 0.5 + dt).residual < 1e-8


def test_conv_identity_n_examples():
    two = fl.conv_identity_n([0.9, 1.4], [0.0, 1.1])
    assert abs(two.rhs - fl.conv_identity2(0.9, 1.4, 0.0, 1.1).rhs) < 1e-12
    assert fl.conv_identity_n([1, 1, 1], [0, 1, 2]).residual < 1e-7
    assert fl.conv_identity_n([1.0] * 4, [0.0, 10.0, 20.0, 30.0]).residual < 1e-7


def _kg_gamma_oracle(m, xi, s):
    """Smoothed ``int dp/(2 pi)^3 exp(i p xi) / (p^2 + m^2)^2`` by radial quadrature."""
    r = float(np.linalg.norm(xi))
    val = integrate.quad(lambda k: k * np.exp(-0.5 * (s * k) ** 2) / (k**2 + m**2) ** 2, 0, np.inf,
                         weight="sin", wvar=r)[0]
    return val / (2 * np.pi**2 * r)


def test_schwinger_scalar_oracle():
    y1, y2 = np.zeros(3), np.array([3.0, 0.5, 0.0])
    r = fl.schwinger_fl_check(klein_gordon(1.0), y1, y2)
    want = _kg_gamma_oracle(1.0, y2 - y1, 0.5)
    assert r.residual < 1e-2
    assert abs(r.lhs - want) < 1e-3 * abs(want) and abs(r.rhs - want) < 1e-2 * abs(want)


def test_schwinger_refinement_and_symmetry():
    op = klein_gordon(1.0)
    y1, y2 = np.zeros(3), np.array([3.0, 0.5, 0.0])
    # at box 16 both sides carry periodic-image errors of order exp(-10); refine at box 32
    fine = fl.schwinger_fl_check(op, y1, y2, L=128, box=32.0)
    coarse = fl.schwinger_fl_check(op, y1, y2, L=64, box=32.0)
    assert fine.residual < coarse.residual
    base = fl.schwinger_fl_check(op, y1, y2)
    shifted = fl.schwinger_fl_check(op, y1 + 1.0, y2 + 1.0)
    assert abs(shifted.lhs - base.lhs) < 1e-12 * abs(base.lhs)
    mirrored = fl.schwinger_fl_check(op, y1, y2 * np.array([1.0, -1.0, 1.0]))
    assert abs(mirrored.lhs - base.lhs) < 1e-10 * abs(base.lhs)


def test_two_point_fl_higgs():
    op = higgs3()
    spec = NoiseSpec(None, ((1.0, [1.0, 0.5, 0.5, 0.5]),))
    r = fl.two_point_fl_check(op, spec, [3.0, 0.5, 0.0], 0, 0, L=32)
    assert r.residual < 1e-2
