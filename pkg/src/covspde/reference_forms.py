"""Published closed forms for the D=3 catalog models, transcribed as data.

Nothing here is used by the computational path.  Each function evaluates a
formula exactly as printed so that tests can compare it against the
independently computed symbol, determinant, Green function and two-point
blocks.  Known misprints are kept verbatim and flagged where they occur.

Momenta ``p`` have shape ``(..., 3)``; ``s = p**2``.
"""

from __future__ import annotations

import numpy as np

EPS3 = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPS3[_i, _j, _k] = 1.0
    EPS3[_i, _k, _j] = -1.0


def _eps_p(p):
    return np.einsum("mnl,...l->...mn", EPS3, p)


def _outer(u, v):
    return u[..., :, None] * v[..., None, :]


# ---------------------------------------------------------------- D0 + D1


def higgs3_symbol(p, a, b, c, m0, m1):
    p = np.asarray(p, dtype=float)
    p0, p1, p2 = p[..., 0], p[..., 1], p[..., 2]
    i = 1j
    rows = [
        [m0 + 0 * p0, a * i * p0, a * i * p1, a * i * p2],
        [b * i * p0, m1 + 0 * p0, -c * i * p2, c * i * p1],
        [b * i * p1, c * i * p2, m1 + 0 * p0, -c * i * p0],
        [b * i * p2, -c * i * p1, c * i * p0, m1 + 0 * p0],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def higgs3_det(s, a, b, c, m0, m1):
    s = np.asarray(s)
    return (-c**2 * s + m1**2) * (a * b * s + m0 * m1)


def higgs3_det_coeffs(a, b, c, m0, m1):
    return np.polynomial.polynomial.polymul([m1**2, -c**2], [m0 * m1, a * b])


def higgs3_green(p, a, b, c, m0, m1):
    p = np.asarray(p, dtype=float)
    s = np.sum(p**2, axis=-1)
    den = a * b * s + m0 * m1
    shape = p.shape[:-1]
    G = np.zeros(shape + (4, 4), dtype=complex)
    G[..., 0, 0] = m1
    G[..., 0, 1:] = -a * 1j * p
    G[..., 1:, 0] = -b * 1j * p
    inner = (den[..., None, None] * (m1 * np.eye(3) + c * 1j * _eps_p(p))
             - _outer(p, p) * (a * b * m1 + c**2 * m0))
    G[..., 1:, 1:] = inner / (-c**2 * s + m1**2)[..., None, None]
    return G / den[..., None, None]


def higgs3_poisson_block(p, alpha, a, b, c, m0, m1):
    """Per-atom two-point block; ``alpha = (alpha_3, alpha_0, alpha_1, alpha_2)``.

    The scalar component ``alpha_3`` comes first, matching the component
    order of the symbol.
    """
    p = np.asarray(p, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    a3, av = alpha[0], alpha[1:]
    s = np.sum(p**2, axis=-1)
    den = a * b * s + m0 * m1
    cden = -c**2 * s + m1**2
    ap = p @ av
    k = a * b * m1 + c**2 * m0
    first = m1 * a3 - 1j * b * ap
    S = np.zeros(p.shape[:-1] + (4, 4), dtype=complex)
    S[..., 0, 0] = np.abs(first) ** 2 / den**2
    vec = (m1 * den[..., None] * av + 1j * a * cden[..., None] * a3 * p - k * ap[..., None] * p)
    S3mu = first[..., None] * vec / (cden * den**2)[..., None]
    S[..., 0, 1:] = S3mu
    S[..., 1:, 0] = S3mu
    pp = _outer(p, p)
    t1 = (a**2 * a3**2 + ap**2 * k**2 / cden**2)[..., None, None] * pp / (den**2)[..., None, None]
    t2 = m1**2 * np.outer(av, av) / (cden**2)[..., None, None]
    sym = _outer(p, np.broadcast_to(av, p.shape)) + _outer(np.broadcast_to(av, p.shape), p)
    t3 = -m1 * k * ap[..., None, None] * sym / (cden**2 * den**2)[..., None, None]
    anti = _outer(p, np.broadcast_to(av, p.shape)) - _outer(np.broadcast_to(av, p.shape), p)
    t4 = -1j * a * m1 * a3 * anti / (cden * den)[..., None, None]
    S[..., 1:, 1:] = t1 + t2 + t3 + t4
    return S


def dirac_matrices():
    """Integer coefficient matrices of d_0, d_1, d_2 for the quaternionic operators.

    Returns a dict with keys ``left``, ``right``, ``D`` and ``DT``; each value
    has shape (3, 4, 4).
    """
    left = [
        [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
        [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
        [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    ]
    right = [
        [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
        [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
        [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    ]
    D = [
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
        [[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    ]
    DT = [
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
        [[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
        [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    ]
    return {k: np.array(v, dtype=np.int64) for k, v in
            {"left": left, "right": right, "D": D, "DT": DT}.items()}


# ---------------------------------------------------------------- D1 + D1


def vector2_symbol(p, a, b, c, d, m1, m2):
    p = np.asarray(p, dtype=float)
    X = -1j * _eps_p(p)
    # Each 3x3 block reads  coeff * i * (epsilon-type pattern); the pattern of
    # the printed matrix is  [[0, -p2, p1], [p2, 0, -p0], [-p1, p0, 0]].
    S = np.zeros(p.shape[:-1] + (6, 6), dtype=complex)
    S[..., :3, :3] = a * X + m1 * np.eye(3)
    S[..., :3, 3:] = b * X
    S[..., 3:, :3] = c * X
    S[..., 3:, 3:] = d * X + m2 * np.eye(3)
    return S


def vector2_det_printed(s, a, b, c, d, m1, m2):
    """Determinant as printed.  Its middle coefficient has the wrong sign."""
    f = a * d - b * c
    s = np.asarray(s)
    return m1 * m2 * (f**2 * s**2 + (m2**2 * a**2 + 2 * b * c * m1 * m2 + m1**2 * d**2) * s + m1**2 * m2**2)


def vector2_det_printed_coeffs(a, b, c, d, m1, m2):
    f = a * d - b * c
    return m1 * m2 * np.array([m1**2 * m2**2, m2**2 * a**2 + 2 * b * c * m1 * m2 + m1**2 * d**2, f**2])


def vector2_green_denominator(s, a, b, c, d, m1, m2):
    """Denominator printed with the Green function (no m1*m2 prefactor)."""
    f = a * d - b * c
    h = a * m2 + d * m1
    s = np.asarray(s)
    return f**2 * s**2 - (h**2 - 2 * f * m1 * m2) * s + m1**2 * m2**2


def _v2_G11(p, a, b, c, d, m1, m2):
    f = a * d - b * c
    s = np.sum(p**2, axis=-1)[..., None, None]
    e1 = d**2 * m1 + b * c * m2
    e2 = a**2 * m2 + b * c * m1
    return (m1 * m2 * (-e1 * s + m1 * m2**2) * np.eye(3)
            + m2 * (f**2 * s - m2 * e2) * _outer(p, p)
            + m1 * m2 * (-d * f * s + a * m2**2) * 1j * _eps_p(p))


def _v2_G12(p, a, b, c, d, m1, m2):
    f = a * d - b * c
    h = a * m2 + d * m1
    s = np.sum(p**2, axis=-1)[..., None, None]
    return b * m1 * m2 * (h * s * np.eye(3) - h * _outer(p, p) + (f * s + m1 * m2) * 1j * _eps_p(p))


def vector2_green(p, a, b, c, d, m1, m2):
    """Green matrix as printed, with blocks 22 and 21 from the stated exchanges."""
    p = np.asarray(p, dtype=float)
    s = np.sum(p**2, axis=-1)
    G = np.zeros(p.shape[:-1] + (6, 6), dtype=complex)
    G[..., :3, :3] = _v2_G11(p, a, b, c, d, m1, m2)
    G[..., :3, 3:] = _v2_G12(p, a, b, c, d, m1, m2)
    G[..., 3:, :3] = _v2_G12(p, a, c, b, d, m1, m2)
    G[..., 3:, 3:] = _v2_G11(p, d, b, c, a, m2, m1)
    return G / vector2_green_denominator(s, a, b, c, d, m1, m2)[..., None, None]


def _v2_S11(p, al, be, a, b, c, d, m1, m2):
    f = a * d - b * c
    h = a * m2 + d * m1
    e1 = d**2 * m1 + b * c * m2
    e2 = a**2 * m2 + b * c * m1
    s = np.sum(p**2, axis=-1)[..., None, None]
    ap = (p @ al)[..., None, None]
    bp = (p @ be)[..., None, None]
    al = np.broadcast_to(al, p.shape)
    be = np.broadcast_to(be, p.shape)
    u = m2 * (f**2 * s - m2 * e2) * ap - c * m1 * m2 * h * bp
    w = m1 * m2 * (-e1 * s + m1 * m2**2)
    return (u**2 * _outer(p, p)
            + u * (w * (_outer(p, al) + _outer(al, p)) + c * m1 * m2 * h * s * (_outer(p, be) + _outer(be, p)))
            + c * m1**2 * m2**2 * h * s * (-e1 * s + m1 * m2**2) * (_outer(al, be) + _outer(be, al))
            + w**2 * _outer(al, al) + (c * m1 * m2 * h * s) ** 2 * _outer(be, be))


def _v2_S12(p, al, be, a, b, c, d, m1, m2):
    f = a * d - b * c
    h = a * m2 + d * m1
    e1 = d**2 * m1 + b * c * m2
    e2 = a**2 * m2 + b * c * m1
    s = np.sum(p**2, axis=-1)[..., None, None]
    ap = (p @ al)[..., None, None]
    bp = (p @ be)[..., None, None]
    al = np.broadcast_to(al, p.shape)
    be = np.broadcast_to(be, p.shape)
    X2 = f**2 * s - m2 * e2
    X1 = f**2 * s - m1 * e1
    Y1 = -e1 * s + m1 * m2**2
    Y2 = -e2 * s + m1**2 * m2
    out = -m1 * m2 * (h * b * m2 * X2 * ap**2 + h * c * m1 * X1 * bp**2
                      - ap * bp * (X2 * X1 + m1 * m2 * b * c * h**2)) * _outer(p, p)
    out = out + m1 * m2**2 * b * h * s * (X2 * ap - m1 * c * h * bp) * _outer(p, al)
    out = out + m1**2 * m2 * Y1 * (X1 * bp - m2 * b * h * ap) * _outer(al, p)
    out = out + m1 * m2**2 * Y2 * (X2 * ap - m1 * c * h * bp) * _outer(p, be)
    out = out + m1**2 * m2 * c * h * s * (X1 * bp - b * m2 * h * ap) * _outer(be, p)
    out = out + m1**2 * m2**2 * h * s * (b * Y1 * _outer(al, al) + c * Y2 * _outer(be, be))
    out = out + m1**2 * m2**2 * Y1 * Y2 * _outer(al, be) + b * c * (m1 * m2 * h * s) ** 2 * _outer(be, al)
    return out


def vector2_poisson_block(p, alpha, a, b, c, d, m1, m2):
    """Per-atom block as printed; ``alpha = (alpha_0..alpha_2, beta_0..beta_2)``."""
    p = np.asarray(p, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    al, be = alpha[:3], alpha[3:]
    s = np.sum(p**2, axis=-1)
    S = np.zeros(p.shape[:-1] + (6, 6), dtype=complex)
    S[..., :3, :3] = _v2_S11(p, al, be, a, b, c, d, m1, m2)
    S[..., :3, 3:] = _v2_S12(p, al, be, a, b, c, d, m1, m2)
    S[..., 3:, :3] = _v2_S12(p, al, be, a, c, b, d, m1, m2)
    S[..., 3:, 3:] = _v2_S11(p, be, al, d, c, b, a, m2, m1)
    return S / (vector2_green_denominator(s, a, b, c, d, m1, m2) ** 2)[..., None, None]


def proca_gaussian(p, m):
    """Gaussian two-point kernel at the Proca point, block-diagonal."""
    p = np.asarray(p, dtype=float)
    s = np.sum(p**2, axis=-1)[..., None, None]
    blk = (np.eye(3) + _outer(p, p) / m**2) / (s + m**2)
    out = np.zeros(p.shape[:-1] + (6, 6))
    out[..., :3, :3] = blk
    out[..., 3:, 3:] = blk
    return out


# ------------------------------------------------------------ D1/2 + D1/2


def spinor_symbol(p, a, b, c, d, m):
    p = np.asarray(p, dtype=float)
    p0, p1, p2 = p[..., 0], p[..., 1], p[..., 2]
    i = 1j
    z = 0 * p0
    rows = [
        [c*i*p0 - d*i*p1 - a*i*p2 + m, -d*i*p0 - c*i*p1 - b*i*p2, a*i*p0 - b*i*p1 + c*i*p2, b*i*p0 + a*i*p1 - d*i*p2],
        [-d*i*p0 - c*i*p1 + b*i*p2, -c*i*p0 + d*i*p1 - a*i*p2 + m, -b*i*p0 - a*i*p1 - d*i*p2, a*i*p0 - b*i*p1 - c*i*p2],
        [a*i*p0 + b*i*p1 + c*i*p2, b*i*p0 - a*i*p1 - d*i*p2, -c*i*p0 - d*i*p1 + a*i*p2 + m, d*i*p0 - c*i*p1 + b*i*p2],
        [-b*i*p0 + a*i*p1 - d*i*p2, a*i*p0 + b*i*p1 - c*i*p2, d*i*p0 - c*i*p1 - b*i*p2, c*i*p0 + d*i*p1 + a*i*p2 + m],
    ]
    return np.stack([np.stack([x + z for x in r], axis=-1) for r in rows], axis=-2)


def spinor_det(s, a, b, c, d, m):
    s = np.asarray(s)
    return ((a**2 + b**2 + c**2 + d**2) * s + m**2) ** 2 - 4 * m**2 * b**2 * s


def spinor_det_coeffs(a, b, c, d, m):
    K = a**2 + b**2 + c**2 + d**2
    return np.array([m**4, 2 * K * m**2 - 4 * m**2 * b**2, K**2])


def higgs3_poisson_block_corrected(p, alpha, a, b, c, m0, m1):
    """Printed per-atom block with the repairs found by direct comparison.

    Repairs: the lower-left column is the complex conjugate of the upper-right
    row, the symmetric ``p alpha + alpha p`` term carries one power of
    ``a b p^2 + m0 m1`` instead of two, and the scalar-vector row gains the
    term ``-i c (a b p^2 + m0 m1) (p x alpha)``.  The block is the kernel at
    ``-p`` in the convention of ``momenteng.schwinger2``.  The vector-vector
    block is still incomplete when ``c != 0``.
    """
    p = np.asarray(p, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    a3, av = alpha[0], alpha[1:]
    s = np.sum(p**2, axis=-1)
    den = a * b * s + m0 * m1
    cden = -c**2 * s + m1**2
    ap = p @ av
    k = a * b * m1 + c**2 * m0
    first = m1 * a3 - 1j * b * ap
    S = np.zeros(p.shape[:-1] + (4, 4), dtype=complex)
    S[..., 0, 0] = np.abs(first) ** 2 / den**2
    vec = (m1 * den[..., None] * av + 1j * a * cden[..., None] * a3 * p - k * ap[..., None] * p
           - 1j * c * den[..., None] * np.cross(p, av))
    S[..., 0, 1:] = first[..., None] * vec / (cden * den**2)[..., None]
    S[..., 1:, 0] = np.conj(S[..., 0, 1:])
    avb = np.broadcast_to(av, p.shape)
    pp = _outer(p, p)
    t1 = ((a**2 * a3**2 + ap**2 * k**2 / cden**2) / den**2)[..., None, None] * pp
    t2 = m1**2 * np.outer(av, av) / (cden**2)[..., None, None]
    t3 = (-m1 * k * ap / (cden**2 * den))[..., None, None] * (_outer(p, avb) + _outer(avb, p))
    t4 = (-1j * a * m1 * a3 / (cden * den))[..., None, None] * (_outer(p, avb) - _outer(avb, p))
    S[..., 1:, 1:] = t1 + t2 + t3 + t4
    return S
