"""Fourier symbols, determinants, mass spectra, Green functions, partial fractions.

Conventions.  The Fourier symbol of ``sum_j B_j d_j + M`` is
``sigma(p) = i sum_j B_j p_j + M``, so that ``e^{ipx}`` is mapped to
``sigma(p) e^{ipx}``.  The momentum-space Green function is
``G(p) = sigma(p)^-1`` and the position-space kernel is
``G(x) = int dp/(2 pi)^D e^{ipx} G(p)``.  ``s`` denotes ``p**2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .covsolve import CovOperator
from .errors import DegenerateOperator, DimensionMismatch, NotInvertible, RepeatedMassUnsupported
from .poly import MatrixPolynomial, norm_squared

ROOT_CLUSTER = 1e-7
ISOTROPY_TOL = 1e-8


def symbol(op: CovOperator) -> MatrixPolynomial:
    """``sigma(p) = M + i sum_j B_j p_j`` as a degree-one matrix polynomial."""
    D = op.D
    terms = {(0,) * D: op.M.astype(complex)}
    for j, b in enumerate(op.B):
        if np.any(b):
            e = [0] * D
            e[j] = 1
            terms[tuple(e)] = 1j * b
    return MatrixPolynomial(D, (op.N, op.N), terms)


def symbol_eval(op: CovOperator, p) -> np.ndarray:
    """Evaluate the symbol at momenta ``p`` of shape ``(..., D)``."""
    p = np.asarray(p, dtype=float)
    return op.M + 1j * np.tensordot(p, np.stack(op.B), axes=([-1], [0]))


def faddeev_leverrier(A: MatrixPolynomial) -> tuple[MatrixPolynomial, MatrixPolynomial]:
    """Determinant and adjugate of a square matrix polynomial.

    Recurrence ``M_1 = I``, ``c_{N-k} = -tr(A M_k)/k``,
    ``M_{k+1} = A M_k + c_{N-k} I``; then ``det A = (-1)^N c_0`` and
    ``adj A = (-1)^(N-1) M_N``.
    """
    N, D = A.N, A.nvars
    eye = np.eye(N)
    # M_1 = I, c_{N-1} = -tr(A)
    Mk = MatrixPolynomial.constant(D, eye)
    for k in range(1, N + 1):
        AM = A @ Mk
        c = AM.trace() * (-1.0 / k)
        if k == N:
            det = c * ((-1.0) ** N)
            adj = Mk * ((-1.0) ** (N - 1))
            return det.clean(1e-14), adj.clean(1e-14)
        Mk = AM + MatrixPolynomial(D, (N, N), {e: v * eye for e, v in c.terms.items()})


@dataclass(frozen=True, eq=False)
class DetPolynomial:
    """Determinant of a symbol, as a polynomial in p and (when isotropic) in s.

    Attributes
    ----------
    full : MatrixPolynomial
        Exact expansion in the D momentum components.
    s_coeffs : ndarray
        Ascending coefficients of ``q(s)`` with ``det = q(p**2)``.
    isotropy_residual : float
        Relative mismatch between ``full`` and ``q(p**2)`` at random momenta.
    """

    full: MatrixPolynomial
    s_coeffs: np.ndarray
    isotropy_residual: float

    def __call__(self, p):
        return self.full.evaluate(np.asarray(p))

    def in_s(self, s):
        return np.polynomial.polynomial.polyval(s, self.s_coeffs)

    @property
    def isotropic(self) -> bool:
        return self.isotropy_residual < ISOTROPY_TOL


def det_poly(sym: MatrixPolynomial, rng=None) -> DetPolynomial:
    """Exact determinant expansion and its reduction to a polynomial in ``p**2``."""
    det, _ = faddeev_leverrier(sym)
    D = sym.nvars
    deg = max(det.degree(), 0)
    coeffs = np.zeros(deg // 2 + 1, dtype=complex)
    for e, c in det.terms.items():
        if all(x == 0 for x in e[1:]) and e[0] % 2 == 0:
            coeffs[e[0] // 2] += c
    rng = np.random.default_rng(12345) if rng is None else rng
    p = rng.normal(size=(20, D))
    full = det.evaluate(p)
    iso = np.polynomial.polynomial.polyval(np.sum(p**2, axis=-1), coeffs)
    scale = np.max(np.abs(full)) + np.max(np.abs(iso)) + 1e-300
    res = float(np.max(np.abs(full - iso)) / scale) if det.terms else 0.0
    return DetPolynomial(det, coeffs, res)


@dataclass(frozen=True)
class MassSpectrum:
    """``det sigma(p) = C * prod_i (p**2 + masses2[i])``."""

    C: complex
    masses2: tuple
    degree: int
    admissible: bool
    note: str = ""

    def multiplicities(self) -> list[tuple[complex, int]]:
        out = []
        for m in self.masses2:
            for i, (v, k) in enumerate(out):
                if abs(m - v) <= ROOT_CLUSTER * max(1.0, abs(v)):
                    out[i] = (v, k + 1)
                    break
            else:
                out.append((m, 1))
        return out

    @property
    def distinct(self) -> bool:
        return all(k == 1 for _, k in self.multiplicities())

    def reconstruct(self, s):
        s = np.asarray(s)
        return self.C * prod((s + m for m in self.masses2), start=np.ones_like(s, dtype=complex))


def _spectrum_from_coeffs(coeffs: np.ndarray, scale: float) -> MassSpectrum:
    coeffs = np.array(coeffs, dtype=complex)
    if np.max(np.abs(coeffs), initial=0.0) <= 1e-12 * max(scale, 1e-300):
        raise DegenerateOperator("determinant of the symbol vanishes identically")
    big = np.max(np.abs(coeffs))
    coeffs[np.abs(coeffs) < 1e-12 * big] = 0.0
    n = int(np.max(np.flatnonzero(coeffs)))
    C = coeffs[n]
    roots = np.roots(coeffs[: n + 1][::-1]) if n > 0 else np.array([])
    masses2 = [-r for r in roots]
    masses2 = _polish_clusters(masses2)
    masses2.sort(key=lambda z: (round(z.real, 10), z.imag))
    notes = []
    real = all(abs(m.imag) <= 1e-9 * max(1.0, abs(m)) for m in masses2)
    if real:
        masses2 = [complex(m.real, 0.0) for m in masses2]
    positive = real and all(m.real > 0 for m in masses2)
    if abs(C.imag) <= 1e-9 * abs(C):
        C = complex(C.real, 0.0)
    ok = abs(C) > 0 and positive and C.imag == 0
    if not real:
        notes.append("complex mass squared")
    elif not positive:
        notes.append("non-positive mass squared (negative-leading factor)")
    return MassSpectrum(C, tuple(masses2), 2 * n, bool(ok), "; ".join(notes))


def _polish_clusters(masses2):
    """Average numerically split multiple roots."""
    out, used = [], [False] * len(masses2)
    for i, m in enumerate(masses2):
        if used[i]:
            continue
        group = [j for j in range(len(masses2)) if not used[j] and abs(masses2[j] - m) <= 1e-6 * max(1.0, abs(m))]
        mean = complex(np.mean([masses2[j] for j in group]))
        for j in group:
            used[j] = True
            out.append(mean)
    return out


def _op_scale(op: CovOperator) -> float:
    return (float(np.max(np.abs(op.M))) + sum(float(np.max(np.abs(b))) for b in op.B) + 1e-300) ** op.N


def mass_spectrum(op: CovOperator) -> MassSpectrum:
    """Factor the symbol determinant as ``C * prod(s + m_i**2)``."""
    d = det_poly(symbol(op))
    return _spectrum_from_coeffs(d.s_coeffs, _op_scale(op))


@dataclass(frozen=True, eq=False)
class RationalMatrix:
    """``numerator(p) / den(p**2)`` with a scalar denominator polynomial in s."""

    numerator: MatrixPolynomial
    den_coeffs: np.ndarray
    spectrum: MassSpectrum | None = None
    factors: tuple = field(default=())

    @property
    def N(self):
        return self.numerator.N

    def denominator(self, p) -> np.ndarray:
        s = np.sum(np.asarray(p) ** 2, axis=-1)
        return np.polynomial.polynomial.polyval(s, self.den_coeffs)

    def evaluate(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return self.numerator.evaluate(p) / self.denominator(p)[..., None, None]

    __call__ = evaluate

    def entry_numerator(self, a: int, b: int) -> MatrixPolynomial:
        return self.numerator.entry(a, b)


def invert_symbol(op: CovOperator, force: bool = False) -> RationalMatrix:
    """Green function ``sigma(p)^-1 = adj sigma(p) / det sigma(p)``."""
    sym = symbol(op)
    det, adj = faddeev_leverrier(sym)
    d = det_poly(sym)
    spec = _spectrum_from_coeffs(d.s_coeffs, _op_scale(op))
    if not spec.admissible and not force:
        raise NotInvertible(f"mass spectrum not admissible: C={spec.C}, masses2={spec.masses2} {spec.note}".strip())
    return RationalMatrix(adj, d.s_coeffs, spec)


def product_symbol(ops: list[CovOperator]) -> MatrixPolynomial:
    """Symbol of the composition ``D_1 D_2 ... D_n``."""
    out = symbol(ops[0])
    for op in ops[1:]:
        if op.N != ops[0].N:
            raise DimensionMismatch("operators of different field dimension")
        out = out @ symbol(op)
    return out


def compose_green(ops: list[CovOperator]) -> RationalMatrix:
    """Green function of the cascade: ``G_n(p) ... G_1(p)``."""
    if not ops:
        raise DimensionMismatch("empty cascade")
    N = ops[0].N
    if any(op.N != N or op.D != ops[0].D for op in ops):
        raise DimensionMismatch("cascade operators must share N and D")
    greens = [invert_symbol(op) for op in ops]
    num = greens[-1].numerator
    den = greens[-1].den_coeffs
    for g in reversed(greens[:-1]):
        num = num @ g.numerator
        den = np.polynomial.polynomial.polymul(den, g.den_coeffs)
    masses = tuple(sorted(sum((g.spectrum.masses2 for g in greens), ()), key=lambda z: z.real))
    C = prod(g.spectrum.C for g in greens)
    spec = MassSpectrum(C, masses, 2 * len(masses), all(g.spectrum.admissible for g in greens))
    return RationalMatrix(num, den, spec)


@dataclass(frozen=True, eq=False)
class PartialFractionTerm:
    """One simple pole ``(A(q) p0 + B(q)) / (p0**2 + q**2 + m2)``.

    ``A`` and ``B`` are polynomials in the spatial momentum ``q``
    (``D - 1`` variables).
    """

    m2: float
    A: MatrixPolynomial
    B: MatrixPolynomial

    def evaluate(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        q = p[..., 1:]
        s = np.sum(p**2, axis=-1)
        return (self.A.evaluate(q) * p[..., 0] + self.B.evaluate(q)) / (s + self.m2)


@dataclass(frozen=True, eq=False)
class PartialFractionDecomposition:
    """``entry(p) = sum_i term_i(p) + contact(p)``.

    ``contact`` is the polynomial part (supported at coincident points in
    position space).
    """

    terms: tuple
    contact: MatrixPolynomial

    def evaluate(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        out = self.contact.evaluate(p).astype(complex)
        for t in self.terms:
            out = out + t.evaluate(p)
        return out

    @property
    def contact_time_degree(self) -> int:
        return self.contact.degree_in(0)


def _poly_in_p0(P: MatrixPolynomial) -> list:
    """Coefficient list ``[c_0(q), c_1(q), ...]`` with ``P = sum_k p0**k c_k(q)``."""
    parts = P.split_first()
    deg = max(parts, default=-1)
    zero = MatrixPolynomial.zero(P.nvars - 1)
    return [parts.get(k, zero) for k in range(deg + 1)]


def partial_fractions(numerator: MatrixPolynomial, C: complex, masses2) -> PartialFractionDecomposition:
    """Decompose ``numerator(p) / (C prod_i (p**2 + m_i**2))`` into simple poles in p0.

    Parameters
    ----------
    numerator : MatrixPolynomial
        Scalar polynomial in ``(p0, q_1, ..., q_{D-1})``.
    C : complex
        Leading constant.
    masses2 : sequence of float
        Distinct positive squared masses.
    """
    masses2 = [complex(m) for m in masses2]
    for i in range(len(masses2)):
        for j in range(i):
            if abs(masses2[i] - masses2[j]) <= ROOT_CLUSTER * max(1.0, abs(masses2[i])):
                raise RepeatedMassUnsupported(f"repeated squared mass {masses2[i]}")
    D = numerator.nvars
    q2 = norm_squared(D - 1)
    one = MatrixPolynomial.constant(D - 1, 1.0)
    Qk = _poly_in_p0(numerator)
    terms = []
    for i, mi in enumerate(masses2):
        # Substitute p0**2 -> -(q**2 + m_i**2).
        u = (q2 + one * mi) * (-1.0)
        Qe = MatrixPolynomial.zero(D - 1)
        Qo = MatrixPolynomial.zero(D - 1)
        upow = one
        for k in range(0, len(Qk), 2):
            Qe = Qe + Qk[k] * upow
            if k + 1 < len(Qk):
                Qo = Qo + Qk[k + 1] * upow
            upow = upow * u
        denom = C * prod((mj - mi for j, mj in enumerate(masses2) if j != i), start=1.0 + 0j)
        terms.append(PartialFractionTerm(
            float(mi.real) if mi.imag == 0 else mi,
            (Qo * (1.0 / denom)).clean(1e-13),
            (Qe * (1.0 / denom)).clean(1e-13),
        ))
    contact = _polynomial_quotient(Qk, masses2, D) * (1.0 / C)
    return PartialFractionDecomposition(tuple(terms), contact.clean(1e-12))


def _polynomial_quotient(Qk: list, masses2, D: int) -> MatrixPolynomial:
    """Quotient of ``Q`` by ``prod_i (p0**2 + q**2 + m_i**2)`` as polynomials in p0."""
    n = len(masses2)
    q2 = norm_squared(D - 1)
    one = MatrixPolynomial.constant(D - 1, 1.0)
    zero = MatrixPolynomial.zero(D - 1)
    # Monic divisor coefficients in p0.
    div = [one]
    for m in masses2:
        w2 = q2 + one * m
        new = [zero] * (len(div) + 2)
        for k, c in enumerate(div):
            new[k] = new[k] + c * w2
            new[k + 2] = new[k + 2] + c
        div = new
    rem = list(Qk)
    quot = {}
    for k in range(len(rem) - 1, 2 * n - 1, -1):
        c = rem[k]
        if not c.terms:
            continue
        shift = k - 2 * n
        quot[shift] = c
        for j, d in enumerate(div):
            rem[shift + j] = rem[shift + j] - c * d
    out = {}
    for k, c in quot.items():
        for e, v in c.terms.items():
            key = (k,) + e
            out[key] = out.get(key, 0) + v
    return MatrixPolynomial(D, (), out)


def green_partial_fractions(green: RationalMatrix, a: int, b: int) -> PartialFractionDecomposition:
    """Partial fractions of one Green entry using the spectrum of ``green``."""
    spec = green.spectrum
    if spec is None:
        raise NotInvertible("Green function carries no mass spectrum")
    return partial_fractions(green.entry_numerator(a, b), spec.C, [m.real for m in spec.masses2])


def spectrum_of(op) -> MassSpectrum:
    """Mass spectrum of a first-order operator or of a model carrying its own Green function."""
    if hasattr(op, "green_function"):
        return op.green_function().spectrum
    return mass_spectrum(op)


def green_of(op, force: bool = False) -> RationalMatrix:
    """``invert_symbol`` for operators; the stored Green function for models that carry one."""
    if hasattr(op, "green_function"):
        return op.green_function()
    return invert_symbol(op, force=force)
