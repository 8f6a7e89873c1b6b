"""Spectral SPDE solver on periodic lattices and Monte Carlo checks.

The solution of ``D~ phi = eta`` is ``phi_hat(p) = sigma(-p)^-T eta_hat(p)``
on the discrete momentum grid.  Every Monte Carlo report compares sample
means with exact lattice targets through z-scores.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from importlib import resources

import numpy as np

from .errors import DimensionMismatch, NotInvertible, UnsupportedSymmetry
from .lattice import FieldSample, LatticeConfig, _check_singular, _fft, _ifft, apply_symbol, symbol_grid
from .levynoise import NoiseSpec, char_functional, sample_noise
from .momenteng import green_testfns, lattice_two_point, solution_moments
from .repcore import rep_exponential
from .symcalc import spectrum_of

MIN_SAMPLES = 100


def load_probes() -> dict:
    """Versioned probe sets shipped with the package."""
    return json.loads(resources.files("covspde").joinpath("data/probes.json").read_text())


def probe_testfn(lattice: LatticeConfig, N: int, desc: dict) -> np.ndarray:
    """Periodic Gaussian bump ``exp(-|x - c|^2 / (2 w^2)) * weights``."""
    L, a = lattice.L, lattice.a
    c = np.resize(np.asarray(desc["center"], dtype=float), lattice.D) * L * a
    d = lattice.coords() - c
    d = (d + 0.5 * L * a) % (L * a) - 0.5 * L * a
    bump = np.exp(-np.sum(d**2, axis=-1) / (2 * desc["width"] ** 2))
    w = np.resize(np.asarray(desc["weights"], dtype=float), N)
    return bump[..., None] * w


class SpectralSolver:
    """Cached inverse of the transposed symbol for one operator and lattice."""

    def __init__(self, op, lattice: LatticeConfig):
        if op.D != lattice.D:
            raise DimensionMismatch(f"operator has D={op.D}, lattice D={lattice.D}")
        sig = symbol_grid(op, lattice, transpose=True)
        _check_singular(sig, lattice)
        self.op = op
        self.lattice = lattice
        self.inv = np.linalg.inv(sig)

    def __call__(self, eta: np.ndarray) -> np.ndarray:
        """Solve for a single field or a batch with leading axes."""
        D = self.lattice.D
        eh = _fft(np.asarray(eta, dtype=complex), D)
        return np.real(_ifft(np.einsum("...ab,...b->...a", self.inv, eh), D))


def solve_spde(op, noise: FieldSample) -> FieldSample:
    """``phi = D~^-1 eta`` with the spectral lattice discretization."""
    if noise.N != op.N:
        raise DimensionMismatch(f"noise has N={noise.N}, operator N={op.N}")
    phi = SpectralSolver(op, noise.lattice)(noise.values)
    return FieldSample(noise.lattice, phi, "solution", noise.seed, dict(noise.meta))


def apply_operator(op, sample: FieldSample) -> np.ndarray:
    """``D~ phi`` on the lattice (spectral)."""
    return apply_symbol(op, sample.lattice, sample.values, transpose=True)


@dataclass
class McReport:
    """Monte Carlo estimates against analytic targets."""

    labels: list
    estimates: list
    stderrs: list
    targets: list
    zscores: list
    samples: int
    seed: int
    wall_time: float
    details: dict = field(default_factory=dict)

    @property
    def max_abs_z(self) -> float:
        return float(max((abs(z) for z in self.zscores), default=0.0))

    def passed(self, threshold: float = 4.0) -> bool:
        return self.max_abs_z < threshold

    def to_dict(self) -> dict:
        return asdict(self)


def _zscore(est, se, target):
    if se > 0:
        return float((est - target) / se)
    return 0.0 if abs(est - target) <= 1e-12 * max(1.0, abs(target)) else float("inf")


def _report(labels, values: np.ndarray, targets, M, seed, t0, details=None) -> McReport:
    """``values`` has shape ``(M, k)``: one row of per-sample statistics each."""
    est = values.mean(axis=0)
    se = values.std(axis=0, ddof=1) / np.sqrt(M)
    z = [_zscore(e, s, t) for e, s, t in zip(est, se, targets)]
    return McReport(list(labels), [float(x) for x in est], [float(x) for x in se],
                    [float(t) for t in targets], z, int(M), int(seed), time.perf_counter() - t0, details or {})


def _check_inputs(op, spec: NoiseSpec, samples: int):
    if op.N != spec.N:
        raise DimensionMismatch("operator and noise dimensions differ")
    if samples < MIN_SAMPLES:
        raise DimensionMismatch(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if not spectrum_of(op).admissible:
        raise NotInvertible("operator is not admissible")


def solution_batches(op, spec: NoiseSpec, lattice: LatticeConfig, samples: int, seed: int, batch: int = 64):
    """Yield solution fields in batches; sample ``i`` uses noise stream ``(seed, i)``."""
    solver = SpectralSolver(op, lattice)
    for start in range(0, samples, batch):
        idx = range(start, min(samples, start + batch))
        eta = np.stack([sample_noise(spec, lattice, seed, i).values for i in idx])
        yield solver(eta)


def pairing_samples(op, spec, lattice, fs, samples, seed) -> np.ndarray:
    """``(phi, f_j)`` for every sample, shape ``(samples, len(fs))``."""
    F = np.stack([np.asarray(f, dtype=float) for f in fs])
    out = []
    for phi in solution_batches(op, spec, lattice, samples, seed):
        out.append(lattice.cell * np.einsum("bxa,kxa->bk", phi.reshape(len(phi), -1, F.shape[-1]),
                                            F.reshape(len(F), -1, F.shape[-1])))
    return np.concatenate(out)


def empirical_char_functional(op, spec: NoiseSpec, fs, lattice: LatticeConfig, samples: int, seed: int) -> McReport:
    """Sample mean of ``exp(i (phi, f))`` against ``Gamma_eta(G f)``."""
    t0 = time.perf_counter()
    _check_inputs(op, spec, samples)
    fs = [np.asarray(f, dtype=float) for f in fs]
    vals = pairing_samples(op, spec, lattice, fs, samples, seed)
    targets = [char_functional(spec, g, lattice) for g in green_testfns(op, fs, lattice)]
    stats = np.concatenate([np.cos(vals), np.sin(vals)], axis=1)
    labels = [f"f{k}.re" for k in range(len(fs))] + [f"f{k}.im" for k in range(len(fs))]
    tg = [t.real for t in targets] + [t.imag for t in targets]
    return _report(labels, stats, tg, samples, seed, t0)


def empirical_moments(op, spec: NoiseSpec, fs, index_sets, lattice: LatticeConfig, samples: int, seed: int) -> McReport:
    """Sample means of ``prod_{i in S} (phi, f_i)`` for each index tuple ``S``."""
    t0 = time.perf_counter()
    _check_inputs(op, spec, samples)
    fs = [np.asarray(f, dtype=float) for f in fs]
    vals = pairing_samples(op, spec, lattice, fs, samples, seed)
    stats = np.stack([np.prod(vals[:, list(S)], axis=1) for S in index_sets], axis=1)
    targets = [solution_moments(op, spec, [fs[i] for i in S], lattice) for S in index_sets]
    labels = ["m" + "".join(str(i) for i in S) for S in index_sets]
    return _report(labels, stats, targets, samples, seed, t0)


def _shift_corr(phi: np.ndarray, r, a: int, b: int, D: int) -> np.ndarray:
    """Translation average of ``phi_a(x + r) phi_b(x)`` per sample."""
    axes = tuple(range(1, D + 1))
    shifted = np.roll(phi[..., a], shift=[-int(x) for x in r], axis=axes)
    return np.mean(shifted * phi[..., b], axis=axes)


def _probe_list(probes, N, D):
    out = []
    for pr in probes:
        r = tuple(int(x) for x in np.resize(np.asarray(pr["r"], dtype=int), D))
        out.append((r, int(pr["a"]) % N, int(pr["b"]) % N))
    return out


def empirical_two_point(op, spec: NoiseSpec, lattice: LatticeConfig, samples: int, seed: int, probes=None) -> McReport:
    """Translation-averaged ``E phi_a(x + r) phi_b(x)`` at fixed probes."""
    t0 = time.perf_counter()
    _check_inputs(op, spec, samples)
    probes = _probe_list(probes if probes is not None else load_probes()["two_point"], op.N, lattice.D)
    K = lattice_two_point(op, spec, lattice)
    rows = []
    for phi in solution_batches(op, spec, lattice, samples, seed):
        rows.append(np.stack([_shift_corr(phi, r, a, b, lattice.D) for r, a, b in probes], axis=1))
    stats = np.concatenate(rows)
    targets = [K[tuple(np.mod(r, lattice.L))][a, b] for r, a, b in probes]
    labels = [f"r={list(r)},a={a},b={b}" for r, a, b in probes]
    return _report(labels, stats, targets, samples, seed, t0)


def lattice_rotation(rep, g_coeffs) -> np.ndarray:
    """Integer matrix of ``exp(sum theta L)`` in the defining representation.

    Raises ``UnsupportedSymmetry`` unless the rotation is a signed permutation.
    """
    R = rep.group.element(g_coeffs)
    Ri = np.rint(R)
    if np.max(np.abs(R - Ri)) > 1e-9 or not np.all(np.sum(np.abs(Ri), axis=0) == 1):
        raise UnsupportedSymmetry("rotation does not map the lattice to itself")
    return Ri.astype(int)


def covariance_transform_check(op, spec: NoiseSpec, lattice: LatticeConfig, g_coeffs, samples: int, seed: int,
                               probes=None) -> McReport:
    """Compare ``K(R r)`` with ``tau(g) K(r) tau(g)^T`` estimated from the same samples.

    The per-sample difference of the two estimators gives the z-score, so the
    analytic target is 0 for every probe.
    """
    t0 = time.perf_counter()
    _check_inputs(op, spec, samples)
    R = lattice_rotation(op.rep, g_coeffs)
    T = rep_exponential(op.rep, g_coeffs)
    probes = _probe_list(probes if probes is not None else load_probes()["two_point"], op.N, lattice.D)
    D, N = lattice.D, op.N
    rows = []
    for phi in solution_batches(op, spec, lattice, samples, seed):
        cols = []
        for r, a, b in probes:
            gr = tuple(int(x) for x in R @ np.asarray(r))
            lhs = _shift_corr(phi, gr, a, b, D)
            rhs = np.zeros(phi.shape[0])
            for c in range(N):
                for d in range(N):
                    if T[a, c] and T[b, d]:
                        rhs = rhs + T[a, c] * T[b, d] * _shift_corr(phi, r, c, d, D)
            cols.append(lhs - rhs)
        rows.append(np.stack(cols, axis=1))
    stats = np.concatenate(rows)
    labels = [f"r={list(r)},a={a},b={b}" for r, a, b in probes]
    return _report(labels, stats, [0.0] * len(probes), samples, seed, t0, {"rotation": R.tolist()})


def exact_transform_residual(op, spec: NoiseSpec, lattice: LatticeConfig, g_coeffs) -> float:
    """Max over all separations of ``|K(R r) - tau K(r) tau^T|`` for the exact lattice kernel."""
    R = lattice_rotation(op.rep, g_coeffs)
    T = rep_exponential(op.rep, g_coeffs)
    K = lattice_two_point(op, spec, lattice)
    L = lattice.L
    worst = 0.0
    for idx in np.ndindex(lattice.shape):
        r = np.asarray(idx)
        gr = tuple(np.mod(R @ r, L))
        worst = max(worst, float(np.max(np.abs(K[gr] - T @ K[idx] @ T.T))))
    return worst


def energy_residual(op, noise: FieldSample) -> float:
    """``sum |D~ phi - eta|^2 / sum |eta|^2`` after solving."""
    phi = solve_spde(op, noise)
    r = apply_operator(op, phi) - noise.values
    return float(np.sum(r**2) / max(np.sum(noise.values**2), 1e-300))



@dataclass
class RefinementReport:
    """Lattice two-point at a fixed physical separation for shrinking spacings."""

    spacings: list
    values: list
    target: float
    discrepancies: list

    @property
    def monotone(self) -> bool:
        d = self.discrepancies
        return all(d[i + 1] < d[i] for i in range(len(d) - 1))


def periodized_kg_two_point(m: float, r: float, box: float, Q: float = 1.0, images: int = 40) -> float:
    """Continuum ``Q sum_n exp(-m |r + n B|) / (8 pi m)`` summed over images in 3D.

    This is ``Q int dp/(2 pi)^3 exp(i p r) / (p^2 + m^2)^2`` on a torus of side ``B``
    with ``r`` along the first axis.
    """
    n = np.arange(-images, images + 1)
    g = np.stack(np.meshgrid(n, n, n, indexing="ij"), axis=-1).reshape(-1, 3) * float(box)
    g[:, 0] += r
    d = np.linalg.norm(g, axis=1)
    return float(Q * np.sum(np.exp(-m * d)) / (8 * np.pi * m))


def refinement_consistency(m: float = 1.0, r: float = 1.0, box: float = 8.0, spacings=(0.5, 0.25, 0.125),
                           sigma2: float = 1.0) -> RefinementReport:
    """Klein-Gordon ``E phi(x + r e_0) phi(x)`` with Gaussian noise ``A = sigma2`` at fixed ``box = L a``.

    Compared with the periodized continuum value, the discrepancy should
    shrink as ``a`` decreases.
    """
    from .models3d import klein_gordon

    op = klein_gordon(m)
    spec = NoiseSpec(np.array([[sigma2]]))
    target = periodized_kg_two_point(m, r, box, sigma2)
    vals = []
    for a in spacings:
        L = int(round(box / a))
        steps = r / a
        if abs(L * a - box) > 1e-9 or abs(steps - round(steps)) > 1e-9:
            raise DimensionMismatch("box and separation must be multiples of the spacing")
        K = lattice_two_point(op, spec, LatticeConfig(3, L, a))
        vals.append(float(K[int(round(steps)), 0, 0][0, 0]))
    return RefinementReport(list(spacings), vals, target, [abs(v - target) for v in vals])
