import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covspde.errors import BadSupport, InvalidReflection
from covspde.lattice import FieldSample, LatticeConfig, pairing
from covspde.levynoise import (NoiseSpec, char_functional, is_tau_covariant, moment_generating_bound, psi_eval,
                               positive_time_mask, random_testfn, reflection_positivity_gram, sample_noise,
                               shift_solution_functional)
from covspde.models3d import higgs3
from covspde.repcore import catalog_rep, reflection_image

PM1 = ((0.5, [1.0]), (0.5, [-1.0]))
vec3 = st.lists(st.floats(-3, 3), min_size=3, max_size=3)


def iso_spec():
    atoms = tuple((0.4, s * v) for v in np.eye(3) for s in (1, -1))
    return NoiseSpec(0.5 * np.eye(3), atoms)


def test_psi_examples():
    assert psi_eval(NoiseSpec(N=1), [0.0]) == 0
    assert np.isclose(psi_eval(NoiseSpec(None, PM1), [np.pi]), 2.0)
    assert np.isclose(psi_eval(NoiseSpec(np.eye(1)), [1.0]), 0.5)


@given(vec3)
def test_psi_real_nonnegative_and_bounded(y):
    spec = iso_spec()
    y = np.asarray(y)
    v = psi_eval(spec, y)
    assert abs(np.imag(v)) < 1e-12
    assert np.real(v) >= -1e-12
    M = 0.5 * np.linalg.norm(spec.A, 2) + float(np.sum(spec.weights * np.sum(spec.points**2, axis=1)))
    assert abs(v) <= M * (y @ y) + 1e-12
    assert np.isclose(psi_eval(spec, -y), np.conj(v))


def test_closure_lone_atom():
    spec = NoiseSpec(None, ((0.3, [1.0, 2.0]),))
    assert spec.symmetrized and len(spec.atoms) == 2
    assert np.allclose(spec.points.sum(axis=0), 0)
    sym = NoiseSpec(None, ((0.3, [1.0, 2.0]), (0.3, [-1.0, -2.0])))
    assert not sym.symmetrized


def test_char_functional_basic(lat8, rng):
    spec = iso_spec()
    f = random_testfn(lat8, 3, rng, 0.2)
    assert char_functional(spec, np.zeros_like(f), lat8) == 1
    g = char_functional(spec, f, lat8)
    assert abs(np.imag(g)) < 1e-12 and 0 < np.real(g) <= 1
    assert np.isclose(char_functional(spec, -f, lat8), np.conj(g))
    gauss = NoiseSpec(spec.A)
    want = np.exp(-0.5 * lat8.cell * np.sum(f * (f @ spec.A)))
    assert np.isclose(char_functional(gauss, f, lat8), want)


def test_char_functional_positive_definite(lat8, rng):
    spec = iso_spec()
    fs = [random_testfn(lat8, 3, rng, 0.2) for _ in range(5)]
    M = np.array([[char_functional(spec, a - b, lat8) for b in fs] for a in fs])
    assert np.min(np.linalg.eigvalsh(0.5 * (M + M.conj().T))) >= -1e-9


def test_moment_generating_bound():
    assert moment_generating_bound(NoiseSpec(N=1), 1.0) == 0.0
    spec = NoiseSpec(None, PM1)
    assert np.isclose(moment_generating_bound(spec, 0.0), 1.0)
    assert np.isclose(moment_generating_bound(spec, 1.0), np.e)
    ts = np.linspace(0, 3, 10)
    vals = [moment_generating_bound(iso_spec(), t) for t in ts]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_tau_covariance():
    rep = catalog_rep("D1")
    assert is_tau_covariant(NoiseSpec(np.eye(3)), rep).passed
    one_axis = NoiseSpec(None, ((0.5, [1.0, 0, 0]),))
    assert not is_tau_covariant(one_axis, rep, 2).passed
    axes = NoiseSpec(None, tuple((0.5, v) for v in np.eye(3)))
    assert is_tau_covariant(axes, rep, 2).passed
    assert not is_tau_covariant(axes, rep, 4).passed


def test_sampling_zero_and_deterministic(lat8):
    z = sample_noise(NoiseSpec(N=2), lat8, 1)
    assert not np.any(z.values)
    a = sample_noise(iso_spec(), lat8, 5, 3)
    b = sample_noise(iso_spec(), lat8, 5, 3)
    c = sample_noise(iso_spec(), lat8, 5, 4)
    assert np.array_equal(a.values, b.values) and not np.array_equal(a.values, c.values)


def test_poisson_point_count_mean():
    lat = LatticeConfig(3, 2, 1.0)
    spec = NoiseSpec(None, PM1)
    counts = np.array([sample_noise(spec, lat, 11, i).meta["points"] for i in range(10_000)])
    se = counts.std(ddof=1) / np.sqrt(len(counts))
    assert abs(counts.mean() - lat.volume) < 4 * se


def test_sampled_char_functional_and_odd_moments():
    lat = LatticeConfig(3, 4, 0.8)
    spec = NoiseSpec(0.3 * np.eye(1), PM1)
    rng = np.random.default_rng(12)
    fs = [random_testfn(lat, 1, rng, 0.5) for _ in range(5)]
    etas = np.stack([sample_noise(spec, lat, 13, i).values for i in range(10_000)])
    pure = np.stack([sample_noise(NoiseSpec(None, PM1), lat, 14, i).values for i in range(4000)])
    for f in fs:
        x = pairing(lat, etas, f)
        z = np.exp(1j * x)
        target = char_functional(spec, f, lat)
        for part, t in ((z.real, target.real), (z.imag, target.imag)):
            assert abs(part.mean() - t) < 4 * part.std(ddof=1) / np.sqrt(len(part))
        y = pairing(lat, pure, f) ** 3
        assert abs(y.mean()) < 4 * y.std(ddof=1) / np.sqrt(len(y))


def test_gram_single_and_pair(rng):
    lat = LatticeConfig(3, 6, 1.0)
    R = reflection_image(catalog_rep("D1"), -1)
    mask = positive_time_mask(lat)
    f = random_testfn(lat, 3, rng, 0.3, support=mask)
    g1 = reflection_positivity_gram(iso_spec(), R, [f], lat)
    assert np.isclose(g1.matrix[0, 0], abs(char_functional(iso_spec(), f, lat)) ** 2)
    fs = [f, random_testfn(lat, 3, rng, 0.3, support=mask), np.zeros_like(f)]
    g = reflection_positivity_gram(iso_spec(), R, fs, lat)
    assert g.psd and g.hermitian_residual < 1e-10 and g.rank_one_residual < 1e-10


def test_gram_errors(rng):
    lat = LatticeConfig(3, 6, 1.0)
    R = reflection_image(catalog_rep("D1"), -1)
    f = random_testfn(lat, 3, rng)
    with pytest.raises(BadSupport):
        reflection_positivity_gram(iso_spec(), R, [f], lat)
    with pytest.raises(InvalidReflection):
        reflection_positivity_gram(iso_spec(), 2 * R, [np.zeros_like(f)], lat)


def test_shift_functional(lat8, rng):
    spec = iso_spec()

    def base(f):
        return char_functional(spec, f, lat8)

    zero = FieldSample(lat8, np.zeros(lat8.shape + (3,)))
    f = random_testfn(lat8, 3, rng, 0.2)
    assert shift_solution_functional(base, zero)(f) == base(f)
    chi = FieldSample(lat8, random_testfn(lat8, 3, rng))
    sh = shift_solution_functional(base, chi)
    for _ in range(10):
        f = random_testfn(lat8, 3, rng, 0.2)
        assert np.isclose(abs(sh(f)), abs(base(f)))


def test_shift_functional_kernel_field(lat8):
    op = higgs3(1.0, 1.0, 0.0, 0.0, 1.0)
    vals = np.zeros(lat8.shape + (4,))
    vals[..., 0] = 2.5
    sh = shift_solution_functional(lambda f: 1.0, FieldSample(lat8, vals), op)
    assert sh.residual < 1e-10
