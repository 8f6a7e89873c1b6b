"""Fourier-Laplace structure of Green functions and two-point functions.

Conventions: ``G(x) = int dp/(2 pi)^D exp(i p x) G_hat(p)``.  A partial
fraction term ``(A(q) p0 + B(q)) / (p0^2 + q^2 + m^2)`` contributes, for
``x0 > 0``, ``exp(-w x0) (B + i w A) / (2 w)`` with ``w = sqrt(q^2 + m^2)``;
for ``x0 < 0`` it contributes ``exp(w x0) (B - i w A) / (2 w)``.  The mass-shell
kernel therefore carries the coefficient ``B + i w A`` with weight ``1/(2w)``
on the forward shell ``p0 = w``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .errors import DimensionMismatch, OutOfDomain, RepeatedMassUnsupported
from .lattice import LatticeConfig
from .symcalc import green_of, green_partial_fractions

# ---------------------------------------------------------------- difference map


def difference_map(f):
    """``f^d(x1, xi_1, ..., xi_{n-1}) = f(x1, x1 + xi_1, ...)``."""

    def fd(x1, *xis):
        pts = [np.asarray(x1, dtype=float)]
        for xi in xis:
            pts.append(pts[-1] + np.asarray(xi, dtype=float))
        return f(*pts)

    return fd


def inverse_difference_map(fd):
    """Inverse of :func:`difference_map`."""

    def f(*xs):
        xs = [np.asarray(x, dtype=float) for x in xs]
        return fd(xs[0], *[xs[k + 1] - xs[k] for k in range(len(xs) - 1)])

    return f


# ---------------------------------------------------------------- FL transform


def fl_transform(f, q0: float, t=None, qvec=None, x=None, weights=None) -> complex:
    """``int_{t >= 0} exp(-q0 t) exp(i q.x) f(t, x)``.

    ``f`` is either a callable of ``t`` (one time variable, adaptive
    quadrature on ``[0, inf)``) or an array sampled on the time grid ``t``
    (trapezoid rule).  Spatial variables are optional: pass sample points
    ``x`` of shape ``(M, d)`` with quadrature ``weights`` and ``qvec``, and
    ``f`` of shape ``(len(t), M)``.
    """
    if q0 < 0:
        raise OutOfDomain(f"Laplace variable must be non-negative, got {q0}")
    if callable(f):
        re = integrate.quad(lambda s: np.real(f(s)) * np.exp(-q0 * s), 0, np.inf, limit=400, epsabs=1e-13)[0]
        im = integrate.quad(lambda s: np.imag(f(s)) * np.exp(-q0 * s), 0, np.inf, limit=400, epsabs=1e-13)[0]
        return complex(re, im)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise OutOfDomain("time grid must lie in t >= 0")
    vals = np.asarray(f, dtype=complex) * np.exp(-q0 * t).reshape((-1,) + (1,) * (np.ndim(f) - 1))
    if x is not None:
        phase = np.exp(1j * np.asarray(x) @ np.asarray(qvec, dtype=float))
        w = np.ones(len(phase)) if weights is None else np.asarray(weights)
        vals = vals @ (phase * w)
    return complex(integrate.trapezoid(vals, t))


# ---------------------------------------------------------------- kernels


@dataclass(frozen=True, eq=False)
class ShellTerm:
    """``(A(q) p0 + B(q)) / (p^2 + m2)``, with ``A``, ``B`` polynomials in q."""

    m2: float
    A: object
    B: object

    @property
    def mass(self) -> float:
        return float(np.sqrt(self.m2))

    def omega(self, q) -> np.ndarray:
        return np.sqrt(np.sum(np.asarray(q, dtype=float) ** 2, axis=-1) + self.m2)

    def forward(self, q) -> np.ndarray:
        """``(B + i w A) / (2 w)``: the x0 > 0 coefficient of ``exp(-w x0)``."""
        w = self.omega(q)
        return (self.B.evaluate(q) + 1j * w * self.A.evaluate(q)) / (2 * w)

    def backward(self, q) -> np.ndarray:
        """``(B - i w A) / (2 w)``: the x0 < 0 coefficient of ``exp(w x0)``."""
        w = self.omega(q)
        return (self.B.evaluate(q) - 1j * w * self.A.evaluate(q)) / (2 * w)


@dataclass(frozen=True, eq=False)
class WightmanKernel:
    """Mass-shell kernel per matrix entry plus polynomial contact parts."""

    N: int
    D: int
    masses2: tuple
    entries: dict
    contact: dict = field(default_factory=dict)

    def terms(self, a: int, b: int) -> tuple:
        return self.entries[(a, b)]

    def shell(self, a: int, b: int, q) -> list:
        """``[(w_i(q), (B_i + i w_i A_i)/(2 w_i)), ...]``: atoms on the forward shells."""
        return [(t.omega(q), t.forward(q)) for t in self.entries[(a, b)]]

    def evaluate(self, a: int, b: int, p0, q, width: float = 1e-9) -> np.ndarray:
        """Shell weight at ``(p0, q)``; zero off the shells and for ``p0 < 0``."""
        p0 = np.asarray(p0, dtype=float)
        out = np.zeros(np.broadcast(p0, np.asarray(q)[..., 0]).shape, dtype=complex)
        for w, c in self.shell(a, b, q):
            hit = (p0 >= 0) & (np.abs(p0 - w) <= width * np.maximum(1.0, w))
            out = out + np.where(hit, c, 0.0)
        return out

    def laplace(self, a: int, b: int, t, q) -> np.ndarray:
        """``sum_i exp(-w_i t) (B_i + i w_i A_i)/(2 w_i)`` for ``t > 0``."""
        t = np.asarray(t, dtype=float)
        return sum((c * np.exp(-w * t) for w, c in self.shell(a, b, q)), start=np.zeros(np.shape(t)) + 0j)

    def positive_energy(self) -> bool:
        return all(t.m2 > 0 for ts in self.entries.values() for t in ts)


def wightman_kernel_from_green(op) -> WightmanKernel:
    """Partial fractions of every Green entry reduced to forward mass shells."""
    G = green_of(op)
    spec = G.spectrum
    if not spec.distinct:
        raise RepeatedMassUnsupported(f"repeated squared masses {[m.real for m in spec.masses2]}")
    entries, contact = {}, {}
    for a in range(G.N):
        for b in range(G.N):
            pf = green_partial_fractions(G, a, b)
            entries[(a, b)] = tuple(ShellTerm(float(np.real(t.m2)), t.A, t.B) for t in pf.terms)
            contact[(a, b)] = pf.contact
    masses2 = tuple(float(np.real(m)) for m in spec.masses2)
    return WightmanKernel(G.N, G.numerator.nvars, masses2, entries, contact)


# ---------------------------------------------------------------- smoothing helpers


def _gauss(t, s):
    return np.exp(-0.5 * (t / s) ** 2) / (np.sqrt(2 * np.pi) * s)


def laplace_smoothed(w, t0, s):
    """``int_0^inf exp(-w t) g_s(t0 - t) dt`` with ``g_s`` the centred normal density."""
    w = np.asarray(w, dtype=float)
    z = (w * s**2 - t0) / (np.sqrt(2) * s)
    with np.errstate(over="ignore", invalid="ignore"):
        pos = 0.5 * special.erfcx(z) * np.exp(-0.5 * (t0 / s) ** 2)
        neg = 0.5 * np.exp(-w * t0 + 0.5 * (w * s) ** 2) * special.erfc(z)
    return np.where(z >= 0, pos, neg)


def _contact_time(P, q, t0, s):
    """``int dp0/(2 pi) exp(i p0 t0) exp(-s^2 p0^2 / 2) P(p0, q)``."""
    parts = P.split_first()
    out = 0.0
    x = t0 / (np.sqrt(2) * s)
    for k, c in parts.items():
        # (-i d/dt)^k g_s(t) = (-i)^k (-1/(s sqrt2))^k H_k(x) g_s(t)
        hk = np.polynomial.hermite.hermval(x, [0] * k + [1])
        dk = (-1.0 / (np.sqrt(2) * s)) ** k * hk * _gauss(t0, s)
        out = out + c.evaluate(q) * (-1j) ** k * dk
    return out


@dataclass(frozen=True)
class FlResult:
    lhs: np.ndarray
    rhs: np.ndarray
    residual: float
    meta: dict


def _grid(lattice: LatticeConfig):
    p = lattice.momenta(zero_nyquist=False)
    return p.reshape(-1, lattice.D)


def verify_fl_green(op, x, L: int = 64, box: float = 16.0, smoothing: float = 0.5, entries=None,
                    periodic_time: bool = True) -> FlResult:
    """Compare the Green function at ``x`` (``x0 > 0``) with its mass-shell form.

    Both sides are smoothed by a normalized Gaussian of width ``smoothing``:
    the left side is the D-dimensional momentum sum on an ``L^D`` grid of
    side ``box``; the right side sums the forward and backward shell terms
    over spatial momenta with the time integral done in closed form.

    The grid is periodic in time as well, so with ``periodic_time`` the shell
    side also carries the time images ``x0 + n box`` (geometric sums).  This
    matters only when ``1/m`` is comparable to ``box``.
    """
    x = np.asarray(x, dtype=float)
    if x[0] <= 0:
        raise OutOfDomain("verify_fl_green needs x0 > 0")
    if periodic_time and x[0] > box - 5 * smoothing:
        raise OutOfDomain("periodic images need x0 at least 5 smoothing widths below the box size")
    G = green_of(op)
    D = G.numerator.nvars
    if x.shape != (D,):
        raise DimensionMismatch(f"point must have {D} coordinates")
    kern = wightman_kernel_from_green(op)
    s = float(smoothing)
    lat = LatticeConfig(D, L, box / L)
    p = _grid(lat)
    damp = np.exp(-0.5 * s**2 * np.sum(p**2, axis=-1)) * np.exp(1j * p @ x)
    lhs = np.einsum("k,kab->ab", damp, G(p)) / lat.volume
    slat = LatticeConfig(D - 1, L, box / L)
    q = _grid(slat)
    sdamp = np.exp(-0.5 * s**2 * np.sum(q**2, axis=-1)) * np.exp(1j * q @ x[1:])
    N = G.N
    rhs = np.zeros((N, N), dtype=complex)
    back = 0.0
    pairs = entries if entries is not None else [(a, b) for a in range(N) for b in range(N)]
    for a, b in pairs:
        val = 0.0
        for t in kern.terms(a, b):
            w = t.omega(q)
            fw = t.forward(q) * laplace_smoothed(w, x[0], s)
            bw = t.backward(q) * laplace_smoothed(w, -x[0], s)
            val = val + np.sum(sdamp * fw)
            back = max(back, float(np.abs(np.sum(sdamp * bw))) / slat.volume)
            val = val + np.sum(sdamp * bw)
            if periodic_time:
                val = val + np.sum(sdamp * _time_images(t, q, x[0], box, s))
        cp = kern.contact[(a, b)]
        if cp.terms:
            val = val + np.sum(sdamp * _contact_time(cp, q, x[0], s))
        rhs[a, b] = val / slat.volume
    mask = np.zeros((N, N), bool)
    for a, b in pairs:
        mask[a, b] = True
    scale = float(np.max(np.abs(lhs[mask])))
    res = float(np.max(np.abs(lhs - rhs)[mask]) / max(scale, 1e-300))
    return FlResult(lhs, rhs, res, {"L": L, "box": box, "smoothing": s, "backward_max": back,
                                     "masses2": list(kern.masses2)})


def _time_images(term: ShellTerm, q, t0, T, s):
    """Shell contributions at ``t0 + n T`` for ``n != 0`` (far from the smoothing window)."""
    w = term.omega(q)
    den = -np.expm1(-w * T)
    sm = np.exp(0.5 * (w * s) ** 2)
    fwd = term.forward(q) * np.exp(-w * (t0 + T))
    bwd = term.backward(q) * np.exp(w * (t0 - T))
    return sm * (fwd + bwd) / den


def yukawa_smoothed(m: float, x, s: float) -> float:
    """Radial oracle: Gaussian-smoothed ``int dp/(2 pi)^3 exp(ipx) / (p^2 + m^2)``."""
    r = float(np.linalg.norm(x))
    if r == 0:
        val = integrate.quad(lambda k: k**2 * np.exp(-0.5 * (s * k) ** 2) / (k**2 + m**2), 0, np.inf)[0]
        return val / (2 * np.pi**2)
    val = integrate.quad(lambda k: k * np.exp(-0.5 * (s * k) ** 2) / (k**2 + m**2), 0, np.inf,
                         weight="sin", wvar=r)[0]
    return val / (2 * np.pi**2 * r)


def yukawa(m: float, r: float) -> float:
    return float(np.exp(-m * r) / (4 * np.pi * r))


# ---------------------------------------------------------------- convolution identities


def _phi1(x):
    """``(1 - exp(-x)) / x`` for complex ``x``, stable near 0."""
    x = complex(x)
    if abs(x) < 1e-6:
        return 1 - x / 2 + x * x / 6
    return (1 - np.exp(-x)) / x


def _int01(z_first, z_last, delta):
    """``int_0^1 exp(-(z_first s + z_last (1 - s)) delta) ds``."""
    return np.exp(-z_last * delta) * _phi1((z_first - z_last) * delta)


def _quad_complex(fun, a, b):
    # tolerances sit near machine precision, so roundoff warnings are expected;
    # the identity residual reports the achieved accuracy
    kw = dict(limit=500, epsabs=1e-14, epsrel=1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda t: np.real(fun(t)), a, b, **kw)[0]
        im = integrate.quad(lambda t: np.imag(fun(t)), a, b, **kw)[0]
    return complex(re, im)


def conv_lhs(zetas, ts) -> complex:
    """Adaptive quadrature of ``int prod_i exp(-zeta_i |t - t_i|) dt`` over R."""
    zetas = np.asarray(zetas, dtype=complex)
    ts = np.asarray(ts, dtype=float)

    def f(t):
        return np.exp(-np.sum(zetas * np.abs(t - ts)))

    pts = [-np.inf] + list(ts) + [np.inf]
    return sum(_quad_complex(f, pts[k], pts[k + 1]) for k in range(len(pts) - 1))


def conv_rhs(zetas, ts) -> complex:
    """Closed form: two boundary terms plus one interval term per gap."""
    z = np.asarray(zetas, dtype=complex)
    t = np.asarray(ts, dtype=float)
    n = len(z)
    Z = np.sum(z)
    out = np.exp(-np.sum(z * (t - t[0]))) / Z + np.exp(-np.sum(z * (t[-1] - t))) / Z
    for j in range(n - 1):
        d = t[j + 1] - t[j]
        left = np.exp(-np.sum(z[: j + 1] * (t[j] - t[: j + 1])))
        right = np.exp(-np.sum(z[j + 1:] * (t[j + 1:] - t[j + 1])))
        out += d * left * right * _int01(np.sum(z[: j + 1]), np.sum(z[j + 1:]), d)
    return complex(out)


@dataclass(frozen=True)
class IdentityResult:
    lhs: complex
    rhs: complex
    residual: float


def _check_conv(zetas, ts):
    if any(np.real(z) <= 0 for z in zetas):
        raise OutOfDomain("all zeta need positive real part")
    if any(b <= a for a, b in zip(ts[:-1], ts[1:])):
        raise OutOfDomain("times must be strictly increasing")


def conv_identity2(z1, z2, t1: float, t2: float) -> IdentityResult:
    """Two-factor identity: quadrature against the closed form."""
    _check_conv([z1, z2], [t1, t2])
    d = t2 - t1
    rhs = (np.exp(-z2 * d) + np.exp(-z1 * d)) / (z1 + z2) + d * _int01(z1, z2, d)
    lhs = conv_lhs([z1, z2], [t1, t2])
    return IdentityResult(lhs, complex(rhs), float(abs(lhs - rhs) / max(1.0, abs(rhs))))


def conv_identity_n(zetas, ts) -> IdentityResult:
    """n-factor identity (corrected form) against quadrature."""
    _check_conv(list(zetas), list(ts))
    lhs = conv_lhs(zetas, ts)
    rhs = conv_rhs(zetas, ts)
    return IdentityResult(lhs, rhs, float(abs(lhs - rhs) / max(1.0, abs(rhs))))


# ---------------------------------------------------------------- two-point reconstruction


def _mixed_gamma(k1: WightmanKernel, e1, k2: WightmanKernel, e2, q, tau):
    """``int dp0/2pi exp(i p0 tau) G1(p0, q) G2(-p0, -q)`` for ``tau > 0`` (excluding ``delta(tau)``)."""
    tau = np.asarray(tau, dtype=float)[..., None]
    out = 0.0
    t1s, t2s = k1.terms(*e1), k2.terms(*e2)
    for ta in t1s:
        w1 = ta.omega(q)
        cp1, cm1 = ta.forward(q), ta.backward(q)
        for tb in t2s:
            w2 = tb.omega(-q)
            cm2 = tb.backward(-q)
            cp2 = tb.forward(-q)
            out = out + cm1 * cm2 * np.exp(-w2 * tau) / (w1 + w2)
            out = out + cp1 * cp2 * np.exp(-w1 * tau) / (w1 + w2)
            out = out + cp1 * cm2 * tau * np.exp(-w2 * tau) * _phi1_vec((w1 - w2) * tau)
    # Contact parts: P1 hits G2 at negative time, P2 hits G1 at positive time.
    P1 = k1.contact[e1]
    if P1.terms:
        for k, c in P1.split_first().items():
            for tb in t2s:
                w2 = tb.omega(-q)
                out = out + c.evaluate(q) * (1j * w2) ** k * tb.backward(-q) * np.exp(-w2 * tau)
    P2 = k2.contact[e2]
    if P2.terms:
        for k, c in P2.split_first().items():
            for ta in t1s:
                w1 = ta.omega(q)
                out = out + c.evaluate(-q) * (1j * w1) ** k * ta.forward(q) * np.exp(-w1 * tau)
    return out


def _phi1_vec(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-6
    safe = np.where(small, 1.0, x)
    return np.where(small, 1 - x / 2 + x * x / 6, -np.expm1(-safe) / safe)


def schwinger_fl_check(op, y1, y2, e1=(0, 0), e2=(0, 0), L: int = 64, box: float = 16.0,
                       smoothing: float = 0.5, op2=None, nodes: int = 40) -> FlResult:
    """``Gamma(xi) = int dx G_e1(x - y1) G_e2(x - y2)`` with ``xi = y2 - y1``, ``xi0 > 0``.

    Direct side: D-dimensional momentum sum of ``G_e1(p) G_e2(-p)``.
    Reconstructed side: three time regions of the product of shell terms
    (forward/backward exponentials and the interval term), smoothed in time
    by Gauss-Hermite quadrature and summed over spatial momenta.
    """
    y1, y2 = np.asarray(y1, dtype=float), np.asarray(y2, dtype=float)
    xi = y2 - y1
    if xi[0] <= 0:
        raise OutOfDomain("need y2^0 > y1^0")
    op2 = op if op2 is None else op2
    G1, G2 = green_of(op), green_of(op2)
    D = G1.numerator.nvars
    s = float(smoothing)
    lat = LatticeConfig(D, L, box / L)
    p = _grid(lat)
    damp = np.exp(-0.5 * s**2 * np.sum(p**2, axis=-1)) * np.exp(1j * p @ xi)
    g1 = G1(p)[:, e1[0], e1[1]]
    g2 = G2(-p)[:, e2[0], e2[1]]
    direct = complex(np.sum(damp * g1 * g2) / lat.volume)
    k1, k2 = wightman_kernel_from_green(op), wightman_kernel_from_green(op2)
    slat = LatticeConfig(D - 1, L, box / L)
    q = _grid(slat)
    sdamp = np.exp(-0.5 * s**2 * np.sum(q**2, axis=-1)) * np.exp(1j * q @ xi[1:])
    xk, wk = np.polynomial.hermite.hermgauss(nodes)
    if xi[0] < 5 * s:
        raise OutOfDomain("time separation must be at least 5 smoothing widths")
    taus = xi[0] + np.sqrt(2) * s * xk
    # Nodes at tau <= 0 carry Gaussian weight below exp(-12.5) and are dropped.
    keep = taus > 0
    vals = np.stack([_mixed_gamma(k1, e1, k2, e2, q, t) for t in taus[keep]])  # (nodes, Q)
    tsm = np.einsum("k,kq->q", wk[keep] / np.sqrt(np.pi), vals)
    recon = complex(np.sum(sdamp * tsm) / slat.volume)
    res = abs(direct - recon) / max(abs(direct), 1e-300)
    return FlResult(np.array(direct), np.array(recon), float(res),
                    {"L": L, "box": box, "smoothing": s, "entries": [list(e1), list(e2)]})


def two_point_fl_check(op, spec, xi, a: int = 0, b: int = 0, L: int = 32, box: float = 16.0,
                       smoothing: float = 0.5) -> FlResult:
    """``E phi_a(x) phi_b(y)`` at ``xi = x - y`` (``xi0 > 0``) from the shell reconstruction.

    ``S(p) = G(-p)^T Q G(p)`` with ``Q = A + sum lam alpha alpha^T``, so the
    two-point function is ``sum Q_{gg'} Gamma_{(g', b), (g, a)}(xi)``.
    """
    Q = spec.A + spec.second_moment
    N = Q.shape[0]
    direct = 0.0
    recon = 0.0
    for g in range(N):
        for h in range(N):
            if Q[g, h] == 0:
                continue
            r = schwinger_fl_check(op, np.zeros(len(xi)), xi, (h, b), (g, a), L, box, smoothing)
            direct = direct + Q[g, h] * complex(r.lhs)
            recon = recon + Q[g, h] * complex(r.rhs)
    res = abs(direct - recon) / max(abs(direct), 1e-300)
    return FlResult(np.array(direct), np.array(recon), float(res), {"L": L, "box": box, "smoothing": smoothing})

