"""Sparse multivariate polynomials with scalar or matrix coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """``sum_e coeff[e] * p**e`` with ``coeff[e]`` arrays of a common ``shape``.

    ``shape == ()`` gives an ordinary scalar polynomial.  Exponent tuples have
    length ``nvars``.
    """

    nvars: int
    shape: tuple
    terms: dict

    @classmethod
    def zero(cls, nvars, shape=()):
        return cls(nvars, tuple(shape), {})

    @classmethod
    def constant(cls, nvars, value):
        value = np.asarray(value, dtype=complex)
        return cls(nvars, value.shape, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars, k, coeff=1.0):
        e = [0] * nvars
        e[k] = 1
        coeff = np.asarray(coeff, dtype=complex)
        return cls(nvars, coeff.shape, {tuple(e): coeff})

    @property
    def N(self):
        return self.shape[0] if self.shape else 1

    @property
    def D(self):
        return self.nvars

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=-1)

    def coefficient(self, e) -> np.ndarray:
        return self.terms.get(tuple(e), np.zeros(self.shape, dtype=complex))

    def __call__(self, p):
        return self.evaluate(p)

    def evaluate(self, p) -> np.ndarray:
        """Evaluate at points ``p`` of shape ``(..., nvars)``."""
        p = np.asarray(p)
        if p.shape[-1] != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {p.shape[-1]}")
        lead = p.shape[:-1]
        out = np.zeros(lead + self.shape, dtype=complex)
        powers = {}
        for e, c in self.terms.items():
            mono = np.ones(lead, dtype=np.result_type(p.dtype, float))
            for k, n in enumerate(e):
                if n:
                    key = (k, n)
                    if key not in powers:
                        powers[key] = p[..., k] ** n
                    mono = mono * powers[key]
            out += mono.reshape(lead + (1,) * len(self.shape)) * c
        return out

    def _combine(self, other, sign):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + sign * c
        return MatrixPolynomial(self.nvars, self.shape or other.shape, terms)

    def __add__(self, other):
        if not isinstance(other, MatrixPolynomial):
            other = MatrixPolynomial.constant(self.nvars, np.asarray(other) * (np.eye(self.N) if self.shape else 1))
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, MatrixPolynomial):
            other = MatrixPolynomial.constant(self.nvars, np.asarray(other) * (np.eye(self.N) if self.shape else 1))
        return self._combine(other, -1)

    def __neg__(self):
        return MatrixPolynomial(self.nvars, self.shape, {e: -c for e, c in self.terms.items()})

    def _product(self, other, op):
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = op(c1, c2)
                terms[e] = terms[e] + v if e in terms else v
        shape = np.shape(op(np.zeros(self.shape), np.zeros(other.shape)))
        return MatrixPolynomial(self.nvars, shape, terms)

    def __mul__(self, other):
        if isinstance(other, MatrixPolynomial):
            return self._product(other, lambda a, b: a * b)
        return MatrixPolynomial(self.nvars, self.shape, {e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        return self._product(other, lambda a, b: a @ b)

    def __pow__(self, n: int):
        out = MatrixPolynomial.constant(self.nvars, np.eye(self.N) if self.shape else 1.0)
        for _ in range(n):
            out = out * self if not self.shape else out @ self
        return out

    def trace(self) -> "MatrixPolynomial":
        return MatrixPolynomial(self.nvars, (), {e: np.trace(c) for e, c in self.terms.items()})

    def entry(self, a: int, b: int) -> "MatrixPolynomial":
        return MatrixPolynomial(self.nvars, (), {e: c[a, b] for e, c in self.terms.items()}).clean(0.0)

    def transpose(self) -> "MatrixPolynomial":
        return MatrixPolynomial(self.nvars, self.shape[::-1], {e: c.T for e, c in self.terms.items()})

    def scale_max(self) -> float:
        return max((float(np.max(np.abs(c), initial=0.0)) for c in self.terms.values()), default=0.0)

    def clean(self, rel: float = 1e-12) -> "MatrixPolynomial":
        """Drop coefficients below ``rel`` times the largest coefficient."""
        cut = rel * self.scale_max()
        terms = {}
        for e, c in self.terms.items():
            c = np.array(c, dtype=complex)
            c.real[np.abs(c.real) <= cut] = 0.0
            c.imag[np.abs(c.imag) <= cut] = 0.0
            if np.any(c != 0):
                terms[e] = c
        return MatrixPolynomial(self.nvars, self.shape, terms)

    def split_first(self) -> dict:
        """Coefficients of powers of the first variable as polynomials in the rest."""
        out = {}
        for e, c in self.terms.items():
            k = e[0]
            rest = out.setdefault(k, {})
            rest[e[1:]] = rest.get(e[1:], 0) + c
        return {k: MatrixPolynomial(self.nvars - 1, self.shape, v) for k, v in out.items()}

    def reflect(self, signs) -> "MatrixPolynomial":
        """Polynomial in ``(signs[0] p_0, signs[1] p_1, ...)``."""
        signs = np.asarray(signs)
        terms = {e: c * np.prod(signs ** np.asarray(e)) for e, c in self.terms.items()}
        return MatrixPolynomial(self.nvars, self.shape, terms)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.scale_max() <= tol

    def to_dict(self) -> dict:
        """JSON-ready map ``"e0,e1,..." -> {"re": ..., "im": ...}``."""
        out = {}
        for e, c in sorted(self.terms.items()):
            c = np.asarray(c)
            out[",".join(map(str, e))] = {"re": c.real.tolist(), "im": c.imag.tolist()}
        return out


def norm_squared(nvars: int, first: int = 0) -> MatrixPolynomial:
    """``sum_{k >= first} p_k**2`` as a scalar polynomial."""
    terms = {}
    for k in range(first, nvars):
        e = [0] * nvars
        e[k] = 2
        terms[tuple(e)] = np.asarray(1.0 + 0j)
    return MatrixPolynomial(nvars, (), terms)


def monomials(nvars: int, degree: int):
    return [e for e in product(range(degree + 1), repeat=nvars) if sum(e) <= degree]
