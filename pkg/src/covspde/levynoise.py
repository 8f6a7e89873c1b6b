"""Gaussian plus compound-Poisson white noise.

``psi(y) = 1/2 <y, A y> + sum_k lam_k (1 - exp(i<alpha_k, y>) + i<alpha_k, y>)``
and the characteristic functional on a lattice is
``Gamma(f) = exp(-a^D sum_x psi(f(x)))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadSupport, DimensionMismatch, InvalidDimension, InvalidReflection
from .lattice import FieldSample, LatticeConfig, apply_symbol, pairing


@dataclass(frozen=True, eq=False)
class NoiseSpec:
    """Gaussian covariance ``A`` plus a finite symmetric atomic Levy measure.

    Parameters
    ----------
    A : array_like, optional
        Symmetric PSD ``N x N`` matrix.  Defaults to zero.
    atoms : sequence of (weight, alpha)
        Atoms of the Levy measure.  Coincident atoms are merged by adding
        weights, a lone atom gets a mirror of equal weight and a ``+-alpha``
        pair of unequal weights is replaced by its mean weight.
    N : int, optional
        Needed only when neither ``A`` nor ``atoms`` fixes the dimension.
    """

    A: np.ndarray | None = None
    atoms: tuple = ()
    N: int | None = None
    symmetrized: bool = field(default=False, compare=False)

    def __post_init__(self):
        N = self.N
        if self.A is not None:
            A = np.atleast_2d(np.asarray(self.A, dtype=float))
            N = A.shape[0] if N is None else N
        elif self.atoms:
            N = len(np.atleast_1d(self.atoms[0][1])) if N is None else N
        if N is None:
            raise InvalidDimension("cannot infer the field dimension N")
        A = np.zeros((N, N)) if self.A is None else np.atleast_2d(np.asarray(self.A, dtype=float))
        if A.shape != (N, N):
            raise DimensionMismatch(f"A has shape {A.shape}, expected {(N, N)}")
        if np.max(np.abs(A - A.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(A), initial=0.0)):
            raise InvalidDimension("A must be symmetric")
        A = 0.5 * (A + A.T)
        if N and np.min(np.linalg.eigvalsh(A)) < -1e-12:
            raise InvalidDimension("A must be positive semidefinite")
        atoms, changed = _close_atoms(self.atoms, N)
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "symmetrized", changed)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.atoms], dtype=float)

    @property
    def points(self) -> np.ndarray:
        return np.array([a for _, a in self.atoms], dtype=float).reshape(len(self.atoms), self.N)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def second_moment(self) -> np.ndarray:
        """``sum_k lam_k alpha_k alpha_k^T``."""
        P = self.points
        return (self.weights[:, None] * P).T @ P if len(self.atoms) else np.zeros((self.N, self.N))

    def to_dict(self) -> dict:
        return {"N": self.N, "A": self.A.tolist(),
                "atoms": [{"weight": float(w), "alpha": np.asarray(a).tolist()} for w, a in self.atoms]}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseSpec":
        atoms = tuple((float(x["weight"]), np.asarray(x["alpha"], dtype=float)) for x in d.get("atoms", []))
        return cls(d.get("A"), atoms, d.get("N"))


def _close_atoms(atoms, N) -> tuple[tuple, bool]:
    """Merge coincident atoms and make the set symmetric.

    A lone atom gets a mirror of equal weight.  A pair ``+-alpha`` with
    unequal weights is replaced by two atoms carrying the mean weight, which
    keeps the total mass and all even moments.
    """
    merged: list[list] = []
    for w, a in atoms:
        a = np.atleast_1d(np.asarray(a, dtype=float))
        if a.shape != (N,):
            raise DimensionMismatch(f"atom point has shape {a.shape}, expected {(N,)}")
        if not (np.isfinite(w) and w > 0):
            raise InvalidDimension("atom weights must be positive")
        if not np.any(a) or not np.all(np.isfinite(a)):
            raise InvalidDimension("atoms must be finite and away from the origin")
        for m in merged:
            if np.array_equal(m[1], a):
                m[0] += float(w)
                break
        else:
            merged.append([float(w), a.copy()])
    out, used, changed = [], set(), False
    for i, (w, a) in enumerate(merged):
        if i in used:
            continue
        used.add(i)
        j = next((k for k, m in enumerate(merged) if k not in used and np.array_equal(m[1], -a)), None)
        if j is None:
            changed = True
            wm = w
        else:
            used.add(j)
            wm = 0.5 * (w + merged[j][0])
            changed = changed or merged[j][0] != w
        b = -a
        a.setflags(write=False)
        b.setflags(write=False)
        out += [(wm, a), (wm, b)]
    return tuple(out), changed


def psi_eval(spec: NoiseSpec, y) -> np.ndarray:
    """Levy exponent at ``y`` of shape ``(..., N)``."""
    y = np.asarray(y, dtype=float)
    if spec.N == 1 and (y.ndim == 0 or y.shape[-1] != 1):
        y = y[..., None]
    if y.shape[-1] != spec.N:
        raise DimensionMismatch(f"argument has {y.shape[-1]} components, expected {spec.N}")
    gauss = 0.5 * np.einsum("...i,ij,...j->...", y, spec.A, y)
    out = gauss.astype(complex)
    if spec.atoms:
        t = y @ spec.points.T  # (..., K)
        w = spec.weights
        out = out + np.sum(w * (1.0 - np.cos(t)), axis=-1) - 1j * np.sum(w * (np.sin(t) - t), axis=-1)
    return out


def char_functional(spec: NoiseSpec, f, lattice: LatticeConfig) -> complex:
    """``Gamma(f) = exp(-a^D sum_x psi(f(x)))`` for a lattice test function ``f``."""
    f = _as_field(f, lattice, spec.N)
    return complex(np.exp(-lattice.cell * np.sum(psi_eval(spec, f))))


def _as_field(f, lattice, N):
    f = np.asarray(f.values if isinstance(f, FieldSample) else f, dtype=float)
    if f.shape == lattice.shape and N == 1:
        f = f[..., None]
    if f.shape != lattice.shape + (N,):
        raise DimensionMismatch(f"test function shape {f.shape} does not match {lattice.shape + (N,)}")
    return f


def moment_generating_bound(spec: NoiseSpec, t: float) -> float:
    """``sum_k lam_k exp(t |alpha_k|)``."""
    if t < 0:
        raise InvalidDimension("t must be non-negative")
    if not spec.atoms:
        return 0.0
    return float(np.sum(spec.weights * np.exp(t * np.linalg.norm(spec.points, axis=1))))


@dataclass(frozen=True)
class CovarianceReport:
    beta_residual: float
    gaussian_residual: float
    moment_residuals: dict
    passed: bool
    tol: float = 1e-8


def moment_tensor(spec: NoiseSpec, order: int) -> np.ndarray:
    """``sum_k lam_k alpha_k^{(x) order}``."""
    N = spec.N
    T = np.zeros((N,) * order)
    for w, a in spec.atoms:
        t = np.array(w)
        for _ in range(order):
            t = np.multiply.outer(t, a)
        T = T + t
    return T


def _tensor_action(T: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Infinitesimal action of ``X`` on every index of ``T``."""
    out = np.zeros_like(T)
    for pos in range(T.ndim):
        out = out + np.moveaxis(np.tensordot(X, T, axes=([1], [pos])), 0, pos)
    return out


def is_tau_covariant(spec: NoiseSpec, rep, max_order: int = 4, tol: float = 1e-8) -> CovarianceReport:
    """Check ``dtau^T A + A dtau = 0`` and invariance of the atom moment tensors."""
    if max_order < 2 or max_order % 2:
        raise InvalidDimension("max_order must be an even integer >= 2")
    if rep.N != spec.N:
        raise DimensionMismatch("representation and noise dimensions differ")
    g = max(float(np.max(np.abs(T.T @ spec.A + spec.A @ T), initial=0.0)) for T in rep.dgen)
    moments = {}
    for order in range(2, max_order + 1, 2):
        T = moment_tensor(spec, order)
        scale = max(1.0, float(np.max(np.abs(T), initial=0.0)))
        moments[order] = max(float(np.max(np.abs(_tensor_action(T, X)), initial=0.0)) for X in rep.dgen) / scale
    passed = g < tol and all(r < tol for r in moments.values())
    return CovarianceReport(0.0, g, moments, passed, tol)


def _rng(seed, index):
    return np.random.default_rng([int(seed), int(index)])


def sample_noise(spec: NoiseSpec, lattice: LatticeConfig, seed: int, index: int = 0) -> FieldSample:
    """One white-noise realization; sample ``index`` uses the stream ``(seed, index)``.

    Gaussian part: per-site ``N(0, A / a^D)``.  Poisson part: Poisson
    ``(total mass * volume)`` points at uniform sites, marks drawn with
    probability proportional to weight, each deposited as ``alpha / a^D``.
    """
    rng = _rng(seed, index)
    N = spec.N
    vals = np.zeros(lattice.shape + (N,))
    if np.any(spec.A):
        w, V = np.linalg.eigh(spec.A)
        root = V * np.sqrt(np.clip(w, 0.0, None))
        vals += rng.standard_normal(lattice.shape + (N,)) @ root.T / np.sqrt(lattice.cell)
    count = 0
    if spec.atoms:
        lam = spec.total_mass
        count = int(rng.poisson(lam * lattice.volume))
        if count:
            sites = rng.integers(0, lattice.L, size=(count, lattice.D))
            marks = rng.choice(len(spec.atoms), size=count, p=spec.weights / lam)
            flat = np.ravel_multi_index(sites.T, lattice.shape)
            buf = np.zeros((lattice.sites, N))
            np.add.at(buf, flat, spec.points[marks] / lattice.cell)
            vals += buf.reshape(lattice.shape + (N,))
    return FieldSample(lattice, vals, "noise", int(seed), {"index": int(index), "points": count})


def reflect_field(f: np.ndarray, Rrep: np.ndarray, lattice: LatticeConfig, axis: int = 0) -> np.ndarray:
    """``(R f)(t, x) = Rrep f(-t, x)`` with ``-t`` taken mod L along ``axis``."""
    idx = (-np.arange(lattice.L)) % lattice.L
    g = np.take(f, idx, axis=axis)
    return g @ np.asarray(Rrep).T


def positive_time_mask(lattice: LatticeConfig, axis: int = 0) -> np.ndarray:
    """Sites with time index in ``[1, L/2)``: strictly positive and not wrapped."""
    t = np.arange(lattice.L)
    ok = (t >= 1) & (t < lattice.L // 2 + (lattice.L % 2))
    shape = [1] * lattice.D
    shape[axis] = lattice.L
    return np.broadcast_to(ok.reshape(shape), lattice.shape)


@dataclass(frozen=True, eq=False)
class GramReport:
    matrix: np.ndarray
    min_eigenvalue: float
    hermitian_residual: float
    psd: bool
    rank_one_residual: float


def reflection_positivity_gram(spec: NoiseSpec, Rrep, testfns, lattice: LatticeConfig, axis: int = 0) -> GramReport:
    """``M_kl = Gamma(f_k - R f_l)`` for test functions at positive time."""
    R = np.asarray(Rrep, dtype=float)
    if R.shape != (spec.N, spec.N) or np.max(np.abs(R @ R - np.eye(spec.N))) > 1e-8:
        raise InvalidReflection("reflection image must be an N x N involution")
    mask = positive_time_mask(lattice, axis)
    fs = [_as_field(f, lattice, spec.N) for f in testfns]
    for f in fs:
        if np.any(f[~mask]):
            raise BadSupport("test function is not supported at strictly positive time")
    Rf = [reflect_field(f, R, lattice, axis) for f in fs]
    K = len(fs)
    Mx = np.array([[char_functional(spec, fs[k] - Rf[l], lattice) for l in range(K)] for k in range(K)])
    herm = float(np.max(np.abs(Mx - Mx.conj().T), initial=0.0))
    ev = float(np.min(np.linalg.eigvalsh(0.5 * (Mx + Mx.conj().T)))) if K else 0.0
    g = np.array([char_functional(spec, f, lattice) for f in fs])
    rank1 = float(np.max(np.abs(Mx - np.outer(g, g.conj())), initial=0.0))
    return GramReport(Mx, ev, herm, bool(ev >= -1e-9), rank1)


@dataclass(frozen=True, eq=False)
class ShiftedFunctional:
    """``f -> exp(i (chi, f)) base(f)``."""

    base: object
    chi: FieldSample
    residual: float | None = None

    def __call__(self, f):
        ph = pairing(self.chi.lattice, self.chi.values, _as_field(f, self.chi.lattice, self.chi.N))
        return np.exp(1j * ph) * self.base(f)


def shift_solution_functional(base, chi: FieldSample, op=None) -> ShiftedFunctional:
    """Shift a solution functional by a deterministic field ``chi``.

    When ``op`` is given, the relative residual ``|D~ chi| / |chi|`` is
    reported (not enforced).
    """
    res = None
    if op is not None:
        r = apply_symbol(op, chi.lattice, chi.values, transpose=True)
        res = float(np.linalg.norm(r) / max(np.linalg.norm(chi.values), 1e-300))
    return ShiftedFunctional(base, chi, res)


def random_testfn(lattice: LatticeConfig, N: int, rng, scale: float = 1.0, support=None) -> np.ndarray:
    f = rng.normal(size=lattice.shape + (N,)) * scale
    if support is not None:
        f = f * support[..., None]
    return f
