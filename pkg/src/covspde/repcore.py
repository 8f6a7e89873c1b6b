"""Real representations of SO(D) and its Lie algebra.

Generators are real antisymmetric matrices ``L = E_jk - E_kj`` (j < k) in
lexicographic order of ``(j, k)``.  A representation stores the images
``dgen[alpha] = dtau(L_alpha)`` as real N x N matrices, so that the group
element ``exp(sum_alpha t_alpha L_alpha)`` is represented by
``exp(sum_alpha t_alpha dgen[alpha])``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.linalg import block_diag, expm

from .errors import (
    IncompatibleReps,
    InvalidDimension,
    InvalidReflection,
    NotInCatalog,
    UnsupportedDimension,
)

BRACKET_TOL = 1e-10
INVOLUTION_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """so(D) with its standard antisymmetric basis.

    Attributes
    ----------
    D : int
        Spatial dimension.
    generators : tuple of ndarray
        ``l = D(D-1)/2`` antisymmetric D x D matrices.
    planes : tuple of (int, int)
        The coordinate plane ``(j, k)`` of each generator.
    """

    D: int
    generators: tuple
    planes: tuple

    @property
    def l(self) -> int:
        return len(self.generators)

    def element(self, coeffs) -> np.ndarray:
        """Group element ``exp(sum coeffs_alpha L_alpha)``."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.l,):
            raise InvalidDimension(f"expected {self.l} coefficients, got {coeffs.shape}")
        return expm(np.tensordot(coeffs, np.stack(self.generators), axes=1))

    @property
    def structure_constants(self) -> np.ndarray:
        """``c[a, b, g]`` with ``[L_a, L_b] = sum_g c[a, b, g] L_g``."""
        return _structure_constants(self.D)

    def generator_index(self, j: int, k: int) -> tuple[int, int]:
        """Index and sign of the generator for the plane (j, k)."""
        if j == k:
            raise InvalidDimension("plane needs two distinct axes")
        if j < k:
            return self.planes.index((j, k)), 1
        return self.planes.index((k, j)), -1

    def __eq__(self, other):
        return isinstance(other, GroupSpec) and other.D == self.D

    def __hash__(self):
        return hash(("GroupSpec", self.D))


@lru_cache(maxsize=None)
def so_generators(D: int) -> GroupSpec:
    """Standard basis ``{E_jk - E_kj : j < k}`` of so(D)."""
    if int(D) != D or D < 2:
        raise InvalidDimension(f"D must be an integer >= 2, got {D}")
    D = int(D)
    planes = tuple(combinations(range(D), 2))
    gens = []
    for j, k in planes:
        L = np.zeros((D, D))
        L[j, k], L[k, j] = 1.0, -1.0
        gens.append(_frozen(L))
    return GroupSpec(D=D, generators=tuple(gens), planes=planes)


@lru_cache(maxsize=None)
def _structure_constants(D: int) -> np.ndarray:
    g = so_generators(D)
    basis = np.stack(g.generators).reshape(g.l, -1)
    c = np.zeros((g.l, g.l, g.l))
    for a in range(g.l):
        for b in range(g.l):
            comm = g.generators[a] @ g.generators[b] - g.generators[b] @ g.generators[a]
            # Basis is orthogonal with squared Frobenius norm 2.
            c[a, b] = basis @ comm.ravel() / 2.0
    c.setflags(write=False)
    return c


def bracket_residual(group: GroupSpec, dgen) -> float:
    """Max deviation of ``[dgen_a, dgen_b] - sum_g c_abg dgen_g``."""
    c = group.structure_constants
    T = np.stack(dgen)
    res = 0.0
    for a in range(group.l):
        for b in range(a + 1, group.l):
            comm = T[a] @ T[b] - T[b] @ T[a]
            res = max(res, float(np.max(np.abs(comm - np.tensordot(c[a, b], T, axes=1)), initial=0.0)))
    return res


@dataclass(frozen=True, eq=False)
class Representation:
    """A real representation of so(D) (and of SO(D) by exponentiation).

    Attributes
    ----------
    group : GroupSpec
    dgen : tuple of ndarray
        Images ``dtau(L_alpha)``, one N x N matrix per generator.
    reflection : ndarray or None
        Image of the reflection ``diag(1, -1, ..., -1)``-type element, if the
        representation extends to O(D).
    label : str
    blocks : tuple of int
        Sizes of the irreducible blocks in the block-diagonal layout.  Used to
        assign a separate parity to each block.
    """

    group: GroupSpec
    dgen: tuple
    reflection: np.ndarray | None = None
    label: str = ""
    blocks: tuple = field(default=())

    def __post_init__(self):
        dgen = tuple(_frozen(T) for T in self.dgen)
        if len(dgen) != self.group.l:
            raise InvalidDimension(f"need {self.group.l} generator images, got {len(dgen)}")
        N = dgen[0].shape[0] if dgen else 0
        for T in dgen:
            if T.shape != (N, N):
                raise InvalidDimension("generator images must be square and of equal size")
        object.__setattr__(self, "dgen", dgen)
        if not self.blocks:
            object.__setattr__(self, "blocks", (N,))
        elif sum(self.blocks) != N:
            raise InvalidDimension(f"block sizes {self.blocks} do not sum to N={N}")
        res = bracket_residual(self.group, dgen)
        if res > BRACKET_TOL:
            raise InvalidDimension(f"generator images violate the so({self.group.D}) brackets (residual {res:.2e})")
        if self.reflection is not None:
            R = _frozen(self.reflection)
            if R.shape != (N, N):
                raise InvalidDimension("reflection image has wrong shape")
            if np.max(np.abs(R @ R - np.eye(N))) > INVOLUTION_TOL:
                raise InvalidReflection("reflection image does not square to the identity")
            object.__setattr__(self, "reflection", R)

    @property
    def N(self) -> int:
        return self.dgen[0].shape[0]

    @property
    def D(self) -> int:
        return self.group.D

    def bracket_residual(self) -> float:
        return bracket_residual(self.group, self.dgen)

    def with_reflection(self, R) -> "Representation":
        return Representation(self.group, self.dgen, R, self.label, self.blocks)

    def to_dict(self) -> dict:
        d = {
            "D": self.D,
            "N": self.N,
            "dgen": [T.tolist() for T in self.dgen],
            "label": self.label,
            "blocks": list(self.blocks),
        }
        if self.reflection is not None:
            d["reflection"] = self.reflection.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Representation":
        group = so_generators(int(d["D"]))
        dgen = [np.asarray(T, dtype=float) for T in d["dgen"]]
        if dgen and dgen[0].shape[0] != int(d["N"]):
            raise InvalidDimension("N does not match generator images")
        return cls(group, tuple(dgen), d.get("reflection"), d.get("label", ""), tuple(d.get("blocks", ())))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Representation":
        return cls.from_dict(json.loads(text))


def rep_exponential(rep: Representation, coeffs) -> np.ndarray:
    """``exp(sum_alpha coeffs_alpha dtau(L_alpha))``."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (rep.group.l,):
        raise InvalidDimension(f"expected {rep.group.l} coefficients, got {coeffs.shape}")
    return expm(np.tensordot(coeffs, np.stack(rep.dgen), axes=1))


def trivial_rep(D: int, N: int = 1) -> Representation:
    g = so_generators(D)
    return Representation(g, tuple(np.zeros((N, N)) for _ in range(g.l)), label="D0" if N == 1 else f"trivial{N}",
                          blocks=(1,) * N)


def defining_rep(D: int) -> Representation:
    g = so_generators(D)
    return Representation(g, g.generators, label="D1" if D == 3 else f"defining{D}")


def direct_sum(a: Representation, b: Representation) -> Representation:
    """Block-diagonal sum; the reflection survives only if both carry one."""
    if a.group != b.group:
        raise IncompatibleReps(f"cannot add reps of so({a.D}) and so({b.D})")
    dgen = tuple(block_diag(x, y) for x, y in zip(a.dgen, b.dgen))
    R = None
    if a.reflection is not None and b.reflection is not None:
        R = block_diag(a.reflection, b.reflection)
    return Representation(a.group, dgen, R, f"{a.label}+{b.label}", a.blocks + b.blocks)


def conjugate(rep: Representation, Q) -> Representation:
    """Equivalent representation ``Q dtau Q^-1`` (block structure dropped)."""
    Q = np.asarray(Q, dtype=float)
    Qi = np.linalg.inv(Q)
    R = None if rep.reflection is None else Q @ rep.reflection @ Qi
    return Representation(rep.group, tuple(Q @ T @ Qi for T in rep.dgen), R, rep.label + "~")


def reflection_rotation_coeffs(group: GroupSpec) -> np.ndarray:
    """Coefficients of the rotation by pi in planes (1,2), (3,4), ...

    Exponentiating gives ``diag(1, -1, ..., -1)`` in the defining rep.
    """
    D = group.D
    if D % 2 == 0:
        raise UnsupportedDimension("reflection images are only built for odd D")
    coeffs = np.zeros(group.l)
    for j in range(1, D, 2):
        idx, sign = group.generator_index(j, j + 1)
        coeffs[idx] = sign * np.pi
    return coeffs


def reflection_image(rep: Representation, parity_sign=1) -> np.ndarray:
    """Image of the reflection ``x_0 -> -x_0`` (times -1 overall in D odd).

    The reflection ``R = diag(-1, 1, ..., 1)`` equals ``-diag(1, -1, ..., -1)``;
    for odd D the second factor lies in SO(D), so
    ``tau~(R) = parity * tau(diag(1, -1, ..., -1))``.

    Parameters
    ----------
    parity_sign : int or sequence of int
        Either a single sign, or one sign per irreducible block of ``rep``.
        A scalar plus a polar vector needs ``(+1, -1)``.
    """
    coeffs = reflection_rotation_coeffs(rep.group)
    U = rep_exponential(rep, coeffs)
    signs = np.atleast_1d(np.asarray(parity_sign, dtype=float))
    if signs.size == 1:
        diag = np.full(rep.N, signs[0])
    elif signs.size == len(rep.blocks):
        diag = np.repeat(signs, rep.blocks)
    else:
        raise InvalidDimension(f"got {signs.size} parity signs for {len(rep.blocks)} blocks")
    if not np.all(np.abs(diag) == 1):
        raise InvalidReflection("parity signs must be +1 or -1")
    R = diag[:, None] * U
    R[np.abs(R) < 1e-14] = 0.0
    if np.max(np.abs(R @ R - np.eye(rep.N))) > 1e-8:
        raise InvalidReflection(f"{rep.label or 'rep'} does not extend to O({rep.D}): reflection image squares to -1")
    return R


# Realification matrices of the D=3 catalog, rows indexed by the real
# components.  Each is unitary.
_S2 = np.sqrt(2.0)
REALIFICATION = {
    "D0+D1": np.array([
        [_S2, 0, 0, 0],
        [0, 1j, 0, -1j],
        [0, 1, 0, 1],
        [0, 0, 1j * _S2, 0],
    ]) / _S2,
    "D1+D1": np.array([
        [1j, 0, -1j, 0, 0, 0],
        [1, 0, 1, 0, 0, 0],
        [0, 1j * _S2, 0, 0, 0, 0],
        [0, 0, 0, 1j, 0, -1j],
        [0, 0, 0, 1, 0, 1],
        [0, 0, 0, 0, 1j * _S2, 0],
    ]) / _S2,
    "Dhalf+Dhalf": np.array([
        [1, 0, 0, 1],
        [1j, 0, 0, -1j],
        [0, 1, -1, 0],
        [0, 1j, 1j, 0],
    ]) / _S2,
}
for _E in REALIFICATION.values():
    _E.setflags(write=False)

# Real so(3) images on D1/2 + D1/2 (N=4), in the basis in which the
# quaternionic operator family takes its real form.  These are half unit
# quaternion multiplications.
_HALF = -0.5 * np.array([
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
], dtype=float)

CATALOG = ("D0", "D1", "D0+D1", "D1+D1", "Dhalf+Dhalf")


def catalog_rep(name: str) -> Representation:
    """Real forms of the D=3 catalog representations.

    Component order: ``D0+D1`` is (scalar, vector); ``D1+D1`` is
    (vector, vector).  ``Dhalf+Dhalf`` has no reflection image because a
    rotation by 2*pi is represented by -1 on half-integer spin.
    """
    if name == "D0":
        return trivial_rep(3)
    if name == "D1":
        return defining_rep(3)
    if name == "D0+D1":
        return Representation(**{**_sum_fields(trivial_rep(3), defining_rep(3)), "label": name})
    if name == "D1+D1":
        return Representation(**{**_sum_fields(defining_rep(3), defining_rep(3)), "label": name})
    if name == "Dhalf+Dhalf":
        return Representation(so_generators(3), tuple(_HALF), label=name, blocks=(4,))
    raise NotInCatalog(f"unknown representation {name!r}; catalog is {', '.join(CATALOG)}")


def _sum_fields(a, b):
    s = direct_sum(a, b)
    return dict(group=s.group, dgen=s.dgen, reflection=s.reflection, blocks=s.blocks)
