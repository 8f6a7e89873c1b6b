"""Linear constraint systems for covariant first-order operators.

An operator ``sum_j B_j d_j + M`` is covariant for a representation with
generator images ``T_alpha = dtau(L_alpha)`` iff for every alpha and j

    sum_k (L_alpha)_jk B_k = B_j T_alpha - T_alpha B_j

and ``M`` commutes with every ``T_alpha``.  Unknowns are vectorized as
``concat_k vec(B_k)`` with row-major ``vec``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IncompatibleReps, InvalidDimension, InvalidReflection
from .repcore import Representation, rep_exponential

NULL_CUTOFF = 1e-8
COV_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CovOperator:
    """First-order operator ``sum_j B_j d_j + M`` on R^N-valued fields."""

    rep: Representation
    B: tuple
    M: np.ndarray

    def __post_init__(self):
        N, D = self.rep.N, self.rep.D
        B = tuple(np.array(b, dtype=float) for b in self.B)
        if len(B) != D or any(b.shape != (N, N) for b in B):
            raise InvalidDimension(f"need {D} matrices of shape {(N, N)}")
        M = np.array(self.M, dtype=float)
        if M.shape != (N, N):
            raise InvalidDimension(f"mass matrix must be {(N, N)}")
        for b in B:
            b.setflags(write=False)
        M.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "M", M)

    @property
    def N(self) -> int:
        return self.rep.N

    @property
    def D(self) -> int:
        return self.rep.D

    def covariance_residual(self) -> float:
        return covariance_residual(self.rep, self.B)

    def mass_residual(self) -> float:
        return max((float(np.max(np.abs(self.M @ T - T @ self.M))) for T in self.rep.dgen), default=0.0)

    def with_mass(self, M) -> "CovOperator":
        return CovOperator(self.rep, self.B, M)

    def is_covariant(self, tol: float = COV_TOL) -> bool:
        return self.covariance_residual() < tol and self.mass_residual() < tol

    def to_dict(self) -> dict:
        return {"rep": self.rep.to_dict(), "B": [b.tolist() for b in self.B], "M": self.M.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "CovOperator":
        return cls(Representation.from_dict(d["rep"]), tuple(d["B"]), d["M"])


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Dense constraint matrix; its null space is the solution space."""

    matrix: np.ndarray
    tolerance: float = NULL_CUTOFF
    shape_out: tuple = ()

    def null_space(self) -> tuple[np.ndarray, np.ndarray]:
        """Canonical orthonormal null-space basis (rows) and singular values."""
        return _null_space(self.matrix, self.tolerance)

    @property
    def dimension(self) -> int:
        return self.null_space()[0].shape[0]


def _null_space(A: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    n = A.shape[1]
    if A.shape[0] == 0 or not np.any(A):
        return _canonical_basis(np.eye(n)), np.zeros(min(A.shape))
    _, s, Vt = np.linalg.svd(A, full_matrices=True)
    cutoff = tol * s[0]
    rank = int(np.sum(s > cutoff))
    return _canonical_basis(Vt[rank:]), s


def _canonical_basis(V: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the row span of ``V``.

    Reduce to row echelon form with partial pivoting, then Gram-Schmidt in
    pivot order, and fix signs so the first nonzero entry is positive.
    """
    k, n = V.shape
    if k == 0:
        return np.zeros((0, n))
    R = V.copy()
    row = 0
    for col in range(n):
        if row == k:
            break
        piv = row + int(np.argmax(np.abs(R[row:, col])))
        if abs(R[piv, col]) < 1e-9:
            continue
        R[[row, piv]] = R[[piv, row]]
        R[row] /= R[row, col]
        others = np.arange(k) != row
        R[others] -= np.outer(R[others, col], R[row])
        row += 1
    Q, _ = np.linalg.qr(R[:row].T)
    Q = Q.T
    for i in range(Q.shape[0]):
        Q[i][np.abs(Q[i]) < 1e-13] = 0.0
        nz = np.flatnonzero(Q[i])
        if nz.size and Q[i, nz[0]] < 0:
            Q[i] = -Q[i]
        Q[i] /= np.linalg.norm(Q[i])
    return Q


def _intertwiner_matrix(L_list, S_list, T_list, M: int, N: int) -> np.ndarray:
    """Rows for ``sum_k L_jk B_k + S B_j - B_j T = 0`` over all alpha, j."""
    D = L_list[0].shape[0]
    IM, IN = np.eye(M), np.eye(N)
    blocks = []
    for L, S, T in zip(L_list, S_list, T_list):
        own = np.kron(S, IN) - np.kron(IM, T.T)
        for j in range(D):
            row = [L[j, k] * np.eye(M * N) + (own if j == k else 0.0) for k in range(D)]
            blocks.append(np.hstack(row))
    return np.vstack(blocks)


def assemble_constraints(rep: Representation) -> ConstraintSystem:
    """Constraint system whose null space is ``Cov(R^N, tau)``.

    Row count ``l * D * N**2``, column count ``D * N**2``.
    """
    A = _intertwiner_matrix(rep.group.generators, rep.dgen, rep.dgen, rep.N, rep.N)
    return ConstraintSystem(A, NULL_CUTOFF, (rep.D, rep.N, rep.N))


def _unvec(v: np.ndarray, D: int, M: int, N: int) -> tuple:
    return tuple(v.reshape(D, M, N))


def solve_cov_space(rep: Representation) -> list[CovOperator]:
    """Orthonormal (Frobenius) basis of covariant operators with ``M = 0``."""
    basis, _ = assemble_constraints(rep).null_space()
    zero = np.zeros((rep.N, rep.N))
    return [CovOperator(rep, _unvec(v, rep.D, rep.N, rep.N), zero) for v in basis]


def solve_intertwiner_space(tau: Representation, sigma: Representation) -> list[tuple]:
    """D-tuples of ``M x N`` matrices intertwining ``tau`` (source) and ``sigma``.

    Condition: ``sum_k L_jk B_k + dsigma B_j - B_j dtau = 0``.  With
    ``sigma = tau`` this is the covariance condition of :func:`solve_cov_space`.
    """
    if tau.group != sigma.group:
        raise IncompatibleReps("representations of different groups")
    A = _intertwiner_matrix(tau.group.generators, sigma.dgen, tau.dgen, sigma.N, tau.N)
    basis, _ = _null_space(A, NULL_CUTOFF)
    return [_unvec(v, tau.D, sigma.N, tau.N) for v in basis]


def intertwiner_residual(tau: Representation, sigma: Representation, B) -> float:
    res = 0.0
    for L, S, T in zip(tau.group.generators, sigma.dgen, tau.dgen):
        for j in range(tau.D):
            r = sum(L[j, k] * B[k] for k in range(tau.D)) + S @ B[j] - B[j] @ T
            res = max(res, float(np.max(np.abs(r))))
    return res


def covariance_residual(rep: Representation, B) -> float:
    """Max entry of ``sum_k L_jk B_k - [B_j, T]`` over alpha, j."""
    return intertwiner_residual(rep, rep, B)


def commutant_mass_terms(rep: Representation) -> list[np.ndarray]:
    """Orthonormal basis of matrices commuting with every generator image."""
    N = rep.N
    I = np.eye(N)
    rows = [np.kron(T, I) - np.kron(I, T.T) for T in rep.dgen]
    A = np.vstack(rows) if rows else np.zeros((0, N * N))
    basis, _ = _null_space(A, NULL_CUTOFF)
    return [v.reshape(N, N) for v in basis]


def check_covariance_global(op: CovOperator, g_coeffs) -> float:
    """``max_j || sum_k g_jk tau(g) B_k tau(g)^-1 - B_j ||`` (max-abs norm)."""
    g = op.rep.group.element(g_coeffs)
    tg = rep_exponential(op.rep, g_coeffs)
    tgi = np.linalg.inv(tg)
    conj = np.stack([tg @ b @ tgi for b in op.B])
    res = 0.0
    for j in range(op.D):
        r = np.tensordot(g[j], conj, axes=1) - op.B[j]
        res = max(res, float(np.max(np.abs(r))))
    mres = float(np.max(np.abs(tg @ op.M @ tgi - op.M)))
    return max(res, mres)


def check_reflection_covariance(op: CovOperator, Rrep, tol: float = 1e-8) -> tuple[bool, float]:
    """Test ``R B_0 R = -B_0``, ``R B_j R = B_j`` (j >= 1) and ``R M R = M``."""
    R = np.asarray(Rrep, dtype=float)
    if R.shape != (op.N, op.N) or np.max(np.abs(R @ R - np.eye(op.N))) > 1e-8:
        raise InvalidReflection("reflection image is not an involution of the right size")
    res = float(np.max(np.abs(R @ op.B[0] @ R + op.B[0])))
    for b in op.B[1:]:
        res = max(res, float(np.max(np.abs(R @ b @ R - b))))
    res = max(res, float(np.max(np.abs(R @ op.M @ R - op.M))))
    return res < tol, res


def reflection_covariant_subspace(rep: Representation, Rrep) -> list[CovOperator]:
    """Members of ``Cov(tau)`` (M = 0) that are also reflection covariant."""
    basis = solve_cov_space(rep)
    if not basis:
        return []
    R = np.asarray(Rrep, dtype=float)
    cols = []
    for op in basis:
        parts = [(R @ op.B[0] @ R + op.B[0]).ravel()] + [(R @ b @ R - b).ravel() for b in op.B[1:]]
        cols.append(np.concatenate(parts))
    A = np.stack(cols, axis=1)
    null, _ = _null_space(A, NULL_CUTOFF)
    out = []
    for w in null:
        B = tuple(sum(c * op.B[j] for c, op in zip(w, basis)) for j in range(rep.D))
        out.append(CovOperator(rep, B, np.zeros((rep.N, rep.N))))
    return out


def span_angle(a: list, b: list) -> float:
    """Largest principal angle between spans of two lists of B-tuples."""
    if not a and not b:
        return 0.0
    if not a or not b:
        return np.pi / 2
    A = np.stack([np.concatenate([np.ravel(x) for x in t]) for t in a], axis=1)
    Bm = np.stack([np.concatenate([np.ravel(x) for x in t]) for t in b], axis=1)
    if A.shape[1] != Bm.shape[1]:
        return np.pi / 2
    from scipy.linalg import subspace_angles

    return float(np.max(subspace_angles(A, Bm)))


def project_onto_span(B, basis: list[CovOperator]) -> float:
    """Residual norm of ``B`` after orthogonal projection onto a basis span."""
    v = np.concatenate([np.ravel(x) for x in B])
    if not basis:
        return float(np.linalg.norm(v))
    Q = np.stack([np.concatenate([np.ravel(x) for x in op.B]) for op in basis], axis=1)
    coef, *_ = np.linalg.lstsq(Q, v, rcond=None)
    return float(np.linalg.norm(Q @ coef - v))
