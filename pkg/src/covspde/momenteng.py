"""Exact moments of white noise and of SPDE solutions.

Noise moments split into a Gaussian part (perfect matchings of the
covariance pairing) and a compensated Poisson part (set partitions without
singletons, each block contributing ``a^D sum_x sum_k lam_k prod <alpha_k, f_j(x)>``).
Solution moments replace every ``f`` by ``G f`` with ``G`` the Green operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, factorial

import numpy as np

from .errors import DimensionMismatch, NotInvertible, TooLarge
from .lattice import LatticeConfig, _fft, _ifft, apply_green, symbol_grid
from .levynoise import NoiseSpec, _as_field
from .symcalc import green_of, spectrum_of

MAX_PARTITION_N = 10
MAX_MOMENT_N = 8


@dataclass(frozen=True)
class SetPartition:
    """Blocks of a partition of ``{1..n}``, each block sorted, blocks ordered by minimum."""

    blocks: tuple

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self):
        return len(self.blocks)


def _partitions_of(items: tuple):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in _partitions_of(rest):
        yield ((first,),) + sub
        for i in range(len(sub)):
            yield sub[:i] + ((first,) + sub[i],) + sub[i + 1:]


def _canonical(blocks) -> tuple:
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


def partitions(n: int) -> list[SetPartition]:
    """All set partitions of ``{1..n}`` (``1 <= n <= 10``)."""
    if not 1 <= n <= MAX_PARTITION_N:
        raise TooLarge(f"partitions need 1 <= n <= {MAX_PARTITION_N}, got {n}")
    return [SetPartition(_canonical(p)) for p in _partitions_of(tuple(range(1, n + 1)))]


def stirling2(n: int, p: int) -> int:
    """Stirling number of the second kind via ``1/p! sum_j (-1)^j C(p,j) (p-j)^n``.

    Returns 0 for ``p > n`` or ``p < 1`` (with ``n >= 1``).
    """
    if n == 0 and p == 0:
        return 1
    if p < 1 or p > n:
        return 0
    s = sum((-1) ** j * comb(p, j) * (p - j) ** n for j in range(p + 1))
    return s // factorial(p)


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    """Bell number via the binomial recurrence."""
    if n == 0:
        return 1
    return sum(comb(n - 1, k) * bell(k) for k in range(n))


def perfect_matchings(items) -> list[tuple]:
    """All pairings of an even-sized sequence (``(len - 1)!!`` of them)."""
    items = tuple(items)
    if not items:
        return [()]
    if len(items) % 2:
        return []
    first = items[0]
    out = []
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in perfect_matchings(rest):
            out.append(((first, items[i]),) + m)
    return out


@dataclass(frozen=True)
class MomentResult:
    """Moment value with bookkeeping of the combinatorial terms."""

    value: float
    n: int
    gaussian_terms: int
    poisson_terms: int
    poisson_partitions: int


def noise_moment_detail(spec: NoiseSpec, fs, lattice: LatticeConfig) -> MomentResult:
    """``E prod_i (eta, f_i)`` with term counts."""
    n = len(fs)
    if n > MAX_MOMENT_N:
        raise TooLarge(f"moments limited to n <= {MAX_MOMENT_N}, got {n}")
    if n == 0:
        return MomentResult(1.0, 0, 0, 0, 0)
    F = np.stack([_as_field(f, lattice, spec.N) for f in fs]).reshape(n, -1, spec.N)
    cell = lattice.cell
    has_gauss = bool(np.any(spec.A))
    has_poisson = bool(spec.atoms)
    if has_gauss:
        AF = F @ spec.A
        C = cell * np.einsum("ixa,jxa->ij", F, AF)
    if has_poisson:
        proj = np.einsum("ixa,ka->kix", F, spec.points)
        w = spec.weights
    block_cache: dict = {}

    def block(B) -> float:
        if B not in block_cache:
            prodv = np.prod(proj[:, list(B), :], axis=1)  # (K, sites)
            block_cache[B] = cell * float(np.sum(w @ prodv))
        return block_cache[B]

    idx = tuple(range(n))
    total = 0.0
    g_terms = p_terms = 0
    for r in range(0, n + 1, 2):
        if r and not has_gauss:
            break
        for S in combinations(idx, r):
            rest = tuple(i for i in idx if i not in S)
            if rest and not has_poisson:
                continue
            gval = 1.0
            if r:
                gval = 0.0
                for m in perfect_matchings(S):
                    gval += float(np.prod([C[i, j] for i, j in m]))
                    g_terms += 1
            pval = 1.0
            if rest:
                pval = 0.0
                for part in _partitions_of(rest):
                    if any(len(b) < 2 or len(b) % 2 for b in part):
                        continue
                    p_terms += 1
                    pval += float(np.prod([block(tuple(sorted(b))) for b in part]))
            total += gval * pval
    return MomentResult(total, n, g_terms, p_terms, bell(n))


def noise_moments(spec: NoiseSpec, fs, lattice: LatticeConfig) -> float:
    """``E prod_i (eta, f_i)`` on the lattice; exactly zero for odd ``n``."""
    if len(fs) % 2:
        if len(fs) > MAX_MOMENT_N:
            raise TooLarge(f"moments limited to n <= {MAX_MOMENT_N}, got {len(fs)}")
        return 0.0
    return noise_moment_detail(spec, fs, lattice).value


def _require_admissible(op, force: bool):
    if force:
        return
    spec = spectrum_of(op)
    if not spec.admissible:
        raise NotInvertible(f"mass spectrum not admissible: C={spec.C}, masses2={spec.masses2}")


def green_testfns(op, fs, lattice: LatticeConfig) -> list[np.ndarray]:
    """``G f_i`` for each test function (so that ``(phi, f) = (eta, G f)``)."""
    return [apply_green(op, lattice, _as_field(f, lattice, op.N)) for f in fs]


def solution_moments(op, spec: NoiseSpec, fs, lattice: LatticeConfig, force: bool = False) -> float:
    """``E prod_i (phi, f_i)`` for the solution of ``D~ phi = eta``."""
    if op.N != spec.N:
        raise DimensionMismatch("operator and noise dimensions differ")
    if len(fs) > MAX_MOMENT_N:
        raise TooLarge(f"moments limited to n <= {MAX_MOMENT_N}, got {len(fs)}")
    _require_admissible(op, force)
    return noise_moments(spec, green_testfns(op, fs, lattice), lattice)


@dataclass(frozen=True, eq=False)
class SchwingerTwoPoint:
    """Momentum kernel ``S(p) = G(p)^+ A G(p) + sum_k lam_k (G^+ alpha_k)(G^+ alpha_k)^+``.

    With this kernel ``E phi_a(x) phi_b(y) = int dp/(2 pi)^D exp(i p (x - y)) S_ab(p)``.
    """

    green: object
    A: np.ndarray
    atoms: tuple
    zero_nyquist: bool = True

    @property
    def N(self) -> int:
        return self.A.shape[0]

    def _G(self, p):
        return self.green(np.asarray(p, dtype=float))

    def gaussian(self, p) -> np.ndarray:
        G = self._G(p)
        return np.conj(np.swapaxes(G, -1, -2)) @ self.A @ G

    def per_atom(self, p, alpha) -> np.ndarray:
        """``(G^+ alpha)(G^+ alpha)^+`` (one atom, not weighted)."""
        G = self._G(p)
        v = np.conj(np.swapaxes(G, -1, -2)) @ np.asarray(alpha, dtype=float)
        return v[..., :, None] * np.conj(v[..., None, :])

    def poisson(self, p) -> np.ndarray:
        G = self._G(p)
        out = np.zeros(G.shape, dtype=complex)
        for w, a in self.atoms:
            out = out + w * self.per_atom(p, a)
        return out

    def __call__(self, p) -> np.ndarray:
        return self.gaussian(p) + self.poisson(p)

    def pair(self, lattice: LatticeConfig, f1, f2) -> float:
        """``E (phi, f1)(phi, f2)`` on lattice momenta."""
        f1 = _as_field(f1, lattice, self.N)
        f2 = _as_field(f2, lattice, self.N)
        F1, F2 = _fft(f1.astype(complex), lattice.D), _fft(f2.astype(complex), lattice.D)
        S = self(lattice.momenta(self.zero_nyquist))
        N = self.N
        val = np.einsum("xa,xab,xb->", np.conj(F1).reshape(-1, N), S.reshape(-1, N, N), F2.reshape(-1, N))
        return float(np.real(val) * lattice.cell**2 / lattice.volume)


def schwinger2(op, spec: NoiseSpec, force: bool = False) -> SchwingerTwoPoint:
    """Continuum two-point kernel of the solution field."""
    if op.N != spec.N:
        raise DimensionMismatch("operator and noise dimensions differ")
    G = green_of(op, force=force)
    return SchwingerTwoPoint(G, spec.A, spec.atoms, not hasattr(op, "symbol_values"))


def lattice_two_point(op, spec: NoiseSpec, lattice: LatticeConfig) -> np.ndarray:
    """Exact lattice correlator ``K[r] = E phi(x + r) phi(x)^T`` of shape ``(L,)*D + (N, N)``.

    ``K(r) = 1/V sum_p exp(i p r) S(p)`` with ``S`` built from the spectral
    lattice symbol.
    """
    sig = symbol_grid(op, lattice, transpose=True)
    inv = np.linalg.inv(sig)
    Q = spec.A + spec.second_moment
    S = inv @ Q @ np.conj(np.swapaxes(inv, -1, -2))
    flat = S.reshape(lattice.shape + (-1,))
    K = _ifft(flat, lattice.D).reshape(S.shape)
    return np.real(K) / lattice.cell


def difference_moments(S):
    """``sigma_n(xi_1..xi_n) = S(0, xi_1, xi_1 + xi_2, ...)`` for an ``(n+1)``-point ``S``."""

    def sigma(*xis):
        pts = [np.zeros_like(np.asarray(xis[0], dtype=float))]
        for x in xis:
            pts.append(pts[-1] + np.asarray(x, dtype=float))
        return S(*pts)

    return sigma


@dataclass(frozen=True)
class IbpResult:
    lhs: complex
    rhs: complex
    residual: float
    passed: bool


def ibp_check(spec: NoiseSpec, f, g, component: int, lattice: LatticeConfig, h: float = 1e-5) -> IbpResult:
    """Integration by parts for ``F(eta) = exp(i (eta, g))``.

    ``lhs = -i d/ds Gamma(g + s f e_lam)`` by central differences, and
    ``rhs = i a^D sum <f e_lam, A g> Gamma(g)
    + Gamma(g) sum_k lam_k a^D sum_x f(x) (alpha_k)_lam (exp(i <alpha_k, g(x)>) - 1)``.
    """
    from .levynoise import char_functional

    if not 0 <= component < spec.N:
        raise DimensionMismatch(f"component {component} out of range for N={spec.N}")
    f = np.asarray(f, dtype=float)
    if f.shape != lattice.shape:
        raise DimensionMismatch("f must be a scalar lattice function")
    g = _as_field(g, lattice, spec.N)
    F = np.zeros(lattice.shape + (spec.N,))
    F[..., component] = f
    lhs = -1j * (char_functional(spec, g + h * F, lattice) - char_functional(spec, g - h * F, lattice)) / (2 * h)
    gam = char_functional(spec, g, lattice)
    rhs = 1j * lattice.cell * np.sum(F * (g @ spec.A)) * gam
    for w, a in spec.atoms:
        ph = np.exp(1j * (g @ a))
        rhs += w * lattice.cell * gam * a[component] * np.sum(f * (ph - 1.0))
    res = float(abs(lhs - rhs))
    return IbpResult(complex(lhs), complex(rhs), res, res < 1e-6 * (1 + abs(lhs)))
