"""Independent reference computations used by the tests.

Nothing here imports the module under test except to read parameters.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy.optimize import newton
from scipy.special import spherical_jn, spherical_yn


def free_waves(z, ell):
    """(F, G, I, O) from scipy's spherical Bessel functions."""
    z = np.asarray(z, dtype=complex)
    F = z * spherical_jn(ell, z)
    G = -z * spherical_yn(ell, z)
    return F, G, G - 1j * F, G + 1j * F


def free_waves_series(z, ell):
    """F and G for l <= 1 from closed forms, for complex z."""
    z = complex(z)
    if ell == 0:
        return np.sin(z), np.cos(z)
    if ell == 1:
        return np.sin(z) / z - np.cos(z), np.cos(z) / z + np.sin(z)
    raise ValueError("l <= 1 only")


# distance beyond a of the second matching point; well-separated points
# avoid the cancellation of matching at neighbouring grid points
MATCH_GAP = 1.0


def _numerov(V, ell, k, a, h, gap=MATCH_GAP):
    """Regular solution on r = 0, h, ..., a + gap with V cut off beyond a.

    Units hbar = mu = 1: u'' = [l(l+1)/r^2 + 2(V - E)] u, E = k^2/2.
    """
    n = int(round(a / h))
    m = int(round(gap / h))
    r = h * np.arange(n + m + 1)
    v = np.zeros_like(r)
    v[1:n + 1] = V(r[1:n + 1])
    v0 = float(np.asarray(V(np.array([0.0])))[0])
    E = k * k / 2
    with np.errstate(divide="ignore"):
        w = np.where(r > 0, ell * (ell + 1) / np.where(r > 0, r, 1) ** 2, 0.0)
    g = (w + 2 * (v - E)).tolist()
    c = h * h / 12
    b = 2 * (v0 - E) / (4 * ell + 6)
    u = [0j] * len(r)
    u[1] = h ** (ell + 1) * (1 + b * h * h)
    u[2] = (2 * h) ** (ell + 1) * (1 + b * 4 * h * h)
    for i in range(2, len(r) - 1):
        u[i + 1] = (2 * u[i] * (1 + 5 * c * g[i]) - u[i - 1] * (1 - c * g[i - 1])) / (1 - c * g[i + 1])
    return r, np.asarray(u), n, n + m


def _match(V, ell, k, a, h):
    """Coefficients (A, B) in u = A F + B G matched at r = a and a + gap."""
    r, u, n, m = _numerov(V, ell, k, a, h)
    z = k * r[[n, m]]
    F, G, _, _ = free_waves(z, ell)
    det = F[0] * G[1] - F[1] * G[0]
    A = (u[n] * G[1] - u[m] * G[0]) / det
    B = (F[0] * u[m] - F[1] * u[n]) / det
    return A, B


def numerov_phase_shift(V, ell, k, a, h=2e-4):
    """Phase shift (mod pi) of the potential truncated at a; Richardson in h."""
    out = []
    for hh in (h, h / 2):
        A, B = _match(V, ell, float(k), a, hh)
        out.append(math.atan2((B / A).real, 1.0))
    d1, d2 = out
    return d2 + (d2 - d1) / 15


def numerov_incoming_amplitude(V, ell, k, a, h):
    """Coefficient of I_l in the regular solution (proportional to f_l(k))."""
    r, u, n, m = _numerov(V, ell, k, a, h)
    z = k * r[[n, m]]
    _, _, I, O = free_waves(z, ell)
    return (u[n] * O[1] - u[m] * O[0]) / (I[0] * O[1] - I[1] * O[0])


def numerov_siegert(V, ell, seed, a, h=4e-4):
    """Zero of the truncated-potential Jost function near seed, Richardson in h.

    Roundoff in the recurrence limits this to a few 1e-9 for l = 1.
    """
    roots = [
        complex(newton(lambda q: numerov_incoming_amplitude(V, ell, q, a, hh), complex(seed),
                       tol=1e-13, maxiter=60))
        for hh in (h, h / 2)
    ]
    return roots[1] + (roots[1] - roots[0]) / 15


def mp_potential3(kappa0, kappa1, alpha, dps=60):
    """High-precision V3(r) from the closed-form 3x3 Wronskian."""
    ctx = mp.mp.clone()
    ctx.dps = dps
    k0, k1 = ctx.mpf(kappa0), ctx.mpf(kappa1)
    ar, ai = ctx.mpf(alpha.real), ctx.mpf(alpha.imag)
    mod2 = ar**2 + ai**2
    z0 = ctx.atanh(2 * ar * k0 / (k0**2 + mod2))
    z1 = ctx.atanh(2 * ar * k1 / (k1**2 + mod2))
    c = 2 * ar / mod2

    def rows(r):
        g = [r + c, 1, 0, 0, 0]
        s0 = [k0**n * (ctx.sinh(k0 * r + z0) if n % 2 == 0 else ctx.cosh(k0 * r + z0)) for n in range(5)]
        s1 = [k1**n * (ctx.sinh(k1 * r + z1) if n % 2 == 0 else ctx.cosh(k1 * r + z1)) for n in range(5)]
        return g, s0, s1

    def det(f, d):
        return ctx.det(ctx.matrix([[f[c][j] for c in range(3)] for j in d]))

    def V(r):
        r = ctx.mpf(r)
        f = rows(r)
        w = det(f, (0, 1, 2))
        w1 = det(f, (0, 1, 3))
        w2 = det(f, (0, 2, 3)) + det(f, (0, 1, 4))
        return -(w2 / w - (w1 / w) ** 2) - 1 / r**2

    return V


def mp_jost_l0(system, k, dps=40):
    """f_0(k) of the discrete (double-built) system in high precision."""
    ctx = mp.mp.clone()
    ctx.dps = dps
    m, cfg = system.mesh, system.cfg
    N = m.N
    k = ctx.mpc(k)
    E = cfg.h2m * k * k
    C = ctx.matrix(N, N)
    c00 = system.assemble_C(0.0, 0.0).real
    for i in range(N):
        for j in range(N):
            C[i, j] = ctx.mpf(c00[i, j]) - (E if i == j else 0)
    phi = ctx.matrix([ctx.mpf(x) for x in m.phi_at_a])
    l = ctx.matrix([ctx.mpf(x) for x in m.origin_limit])
    x = ctx.lu_solve(C, phi)
    R = cfg.h2m / cfg.a * (phi.T * x)[0]
    chi = (l.T * x)[0]
    L = 1j * k * cfg.a
    return complex(2 * cfg.mu / cfg.hbar**2 * ctx.exp(1j * k * cfg.a) * (1 - L * R) / chi)


def gauss_legendre_integral(fun, a, b, n=200):
    x, w = np.polynomial.legendre.leggauss(n)
    r = 0.5 * (b - a) * x + 0.5 * (b + a)
    return 0.5 * (b - a) * np.sum(w * fun(r), axis=-1)
