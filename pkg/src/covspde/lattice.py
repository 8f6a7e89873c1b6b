"""Periodic lattices, sampled fields and spectral application of operators.

A field on a lattice is an array of shape ``(L,)*D + (N,)``.  Lattice momenta
are ``p_j = 2 pi k_j / (L a)`` in FFT order, with the Nyquist component set
to zero so that real fields stay real under symbol multiplication.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .errors import DimensionMismatch, InvalidDimension, NearSingularMode

HEADER_FIELDS = ("D", "L", "a", "N", "kind", "seed", "count", "layout")


def threads() -> int:
    """Worker cap from ``COVSPDE_THREADS`` (default: all cores)."""
    v = os.environ.get("COVSPDE_THREADS")
    if v:
        try:
            return max(1, int(v))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass(frozen=True)
class LatticeConfig:
    """Periodic cubic lattice with ``L`` sites per axis and spacing ``a``."""

    D: int
    L: int
    a: float = 1.0

    def __post_init__(self):
        if int(self.D) != self.D or self.D < 1:
            raise InvalidDimension(f"lattice dimension must be >= 1, got {self.D}")
        if int(self.L) != self.L or self.L < 2:
            raise InvalidDimension(f"lattice needs L >= 2 sites per axis, got {self.L}")
        if not self.a > 0:
            raise InvalidDimension(f"lattice spacing must be positive, got {self.a}")
        object.__setattr__(self, "D", int(self.D))
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "a", float(self.a))

    @property
    def shape(self) -> tuple:
        return (self.L,) * self.D

    @property
    def sites(self) -> int:
        return self.L**self.D

    @property
    def cell(self) -> float:
        """Volume ``a**D`` of one lattice cell."""
        return self.a**self.D

    @property
    def volume(self) -> float:
        return (self.L * self.a) ** self.D

    def momenta_1d(self, zero_nyquist: bool = True) -> np.ndarray:
        k = np.fft.fftfreq(self.L, d=1.0 / self.L)
        p = 2 * np.pi * k / (self.L * self.a)
        if self.L % 2 == 0 and zero_nyquist:
            p[self.L // 2] = 0.0
        return p

    def momenta(self, zero_nyquist: bool = True) -> np.ndarray:
        """Momentum grid of shape ``(L,)*D + (D,)``.

        Symbols that are even in ``p`` are real at the Nyquist frequency and
        may use it unchanged (``zero_nyquist=False``).
        """
        p1 = self.momenta_1d(zero_nyquist)
        grids = np.meshgrid(*([p1] * self.D), indexing="ij")
        return np.stack(grids, axis=-1)

    def coords(self) -> np.ndarray:
        """Site positions ``x = n a`` with ``n`` in ``[0, L)``, shape ``(L,)*D + (D,)``."""
        n = np.arange(self.L) * self.a
        return np.stack(np.meshgrid(*([n] * self.D), indexing="ij"), axis=-1)

    def signed_coords(self) -> np.ndarray:
        """Minimal-image site positions in ``[-L/2, L/2) a``."""
        n = (np.fft.fftfreq(self.L, d=1.0 / self.L)) * self.a
        return np.stack(np.meshgrid(*([n] * self.D), indexing="ij"), axis=-1)

    def to_dict(self) -> dict:
        return {"D": self.D, "L": self.L, "a": self.a}


@dataclass(frozen=True, eq=False)
class FieldSample:
    """N-component field values on a periodic lattice."""

    lattice: LatticeConfig
    values: np.ndarray
    kind: str = "noise"
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape[: self.lattice.D] != self.lattice.shape or v.ndim != self.lattice.D + 1:
            raise DimensionMismatch(f"values of shape {v.shape} do not fit lattice {self.lattice.shape}")
        if not np.all(np.isfinite(v)):
            raise DimensionMismatch("field values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return self.values.shape[-1]

    def header(self, count: int = 1) -> dict:
        return {"D": self.lattice.D, "L": self.lattice.L, "a": self.lattice.a, "N": self.N,
                "kind": self.kind, "seed": self.seed, "count": count, "layout": "row-major float64 sites x N"}


def pairing(lattice: LatticeConfig, u: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``(u, f) = a^D sum_x <u(x), f(x)>``; leading batch axes of ``u`` are kept."""
    u = np.asarray(u)
    axes = tuple(range(u.ndim - lattice.D - 1, u.ndim))
    return lattice.cell * np.sum(u * f, axis=axes)


def dump_fields(path, samples: list[FieldSample]) -> None:
    """Write ``path`` (raw float64) and ``path + '.json'`` (8-field header)."""
    if not samples:
        raise DimensionMismatch("nothing to dump")
    arr = np.stack([s.values for s in samples]).astype("<f8")
    arr.tofile(path)
    head = samples[0].header(len(samples))
    with open(str(path) + ".json", "w") as fh:
        json.dump(head, fh, sort_keys=True, indent=1)


def load_fields(path) -> list[FieldSample]:
    with open(str(path) + ".json") as fh:
        head = json.load(fh)
    lat = LatticeConfig(head["D"], head["L"], head["a"])
    arr = np.fromfile(path, dtype="<f8").reshape((head["count"],) + lat.shape + (head["N"],))
    return [FieldSample(lat, a, head["kind"], head["seed"]) for a in arr]


def _fft(x, D):
    return sfft.fftn(x, axes=tuple(range(x.ndim - D - 1, x.ndim - 1)), workers=threads())


def _ifft(x, D):
    return sfft.ifftn(x, axes=tuple(range(x.ndim - D - 1, x.ndim - 1)), workers=threads())


def symbol_grid(op, lattice: LatticeConfig, transpose: bool = False) -> np.ndarray:
    """Continuum symbol on lattice momenta; ``transpose`` gives ``sigma(-p)^T``."""
    if op.D != lattice.D:
        raise DimensionMismatch(f"operator has D={op.D}, lattice D={lattice.D}")
    p = grid_momenta(op, lattice)
    if hasattr(op, "symbol_values"):
        if transpose:
            return np.swapaxes(op.symbol_values(-p), -1, -2)
        return op.symbol_values(p)
    B = np.stack(op.B)
    if transpose:
        return np.swapaxes(op.M + 1j * np.tensordot(-p, B, axes=([-1], [0])), -1, -2)
    return op.M + 1j * np.tensordot(p, B, axes=([-1], [0]))


def grid_momenta(op, lattice: LatticeConfig) -> np.ndarray:
    """Lattice momenta used for ``op``'s spectral symbol."""
    return lattice.momenta(zero_nyquist=not hasattr(op, "symbol_values"))


def _check_singular(sig: np.ndarray, lattice: LatticeConfig):
    det = np.linalg.det(sig)
    scale = np.max(np.abs(sig), axis=(-1, -2)) ** sig.shape[-1]
    bad = np.abs(det) < 1e-12 * np.maximum(scale, 1e-300)
    if np.any(bad):
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise NearSingularMode(f"symbol is singular at lattice mode {idx}", mode=idx,
                               momentum=lattice.momenta()[idx].tolist())


def apply_symbol_inverse(op, lattice: LatticeConfig, fields: np.ndarray, transpose: bool = False) -> np.ndarray:
    """Spectral inverse: ``G f`` (``transpose=False``) or ``D~^-1 f``."""
    sig = symbol_grid(op, lattice, transpose)
    _check_singular(sig, lattice)
    inv = np.linalg.inv(sig)
    fh = _fft(np.asarray(fields, dtype=complex), lattice.D)
    out = _ifft(np.einsum("...ab,...b->...a", inv, fh), lattice.D)
    return np.real(out)


def apply_symbol(op, lattice: LatticeConfig, fields: np.ndarray, transpose: bool = False) -> np.ndarray:
    """Spectral application of ``D`` (or its pairing transpose ``D~``)."""
    sig = symbol_grid(op, lattice, transpose)
    fh = _fft(np.asarray(fields, dtype=complex), lattice.D)
    return np.real(_ifft(np.einsum("...ab,...b->...a", sig, fh), lattice.D))


def apply_green(op, lattice: LatticeConfig, f: np.ndarray) -> np.ndarray:
    """``(D^-1 f)(z) = sum_x G(z - x) f(x)`` on the lattice."""
    return apply_symbol_inverse(op, lattice, f, transpose=False)
