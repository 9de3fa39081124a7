"""Shifted Lagrange-Jacobi mesh on [0, a].

Nodes are r_i = a x_i with x_i the zeros of P_N^{(0,beta)}(2x - 1). The
basis functions are

    phi_i(r) = (-1)^{N-i} sqrt((a - r_i)/(a r_i)) P_N^{(0,beta)}(2r/a - 1)
               / (r - r_i) * a^{-beta/2} r^{beta/2 + 1}

and with beta = 2l they behave as r^{l+1} at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NoConvergence

MAX_NEWTON = 100


def jacobi_p(n: int, beta: float, t):
    """P_n^{(0,beta)}(t) and P_{n-1}^{(0,beta)}(t) by the three-term recurrence."""
    t = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t)
    if n == 0:
        return p_prev, np.zeros_like(t)
    p = 1.0 + (beta + 2.0) * (t - 1.0) / 2.0
    for m in range(2, n + 1):
        s = 2 * m + beta
        c1 = 2 * m * (m + beta) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * t - beta**2)
        c3 = 2 * (m - 1) * (m + beta - 1) * s
        p, p_prev = (c2 * p - c3 * p_prev) / c1, p
    return p, p_prev


def jacobi_dp(n: int, beta: float, t):
    """P_n^{(0,beta)}, and its derivative in t (valid for |t| < 1)."""
    t = np.asarray(t, dtype=float)
    p, p_prev = jacobi_p(n, beta, t)
    s = 2 * n + beta
    dp = (n * (-beta - s * t) * p + 2 * n * (n + beta) * p_prev) / (s * (1 - t * t))
    return p, dp


def _newton(n: int, beta: float, t):
    for _ in range(MAX_NEWTON):
        p, dp = jacobi_dp(n, beta, t)
        step = p / dp
        t = t - step
        if np.all(np.abs(step) < 1e-15 * np.maximum(1.0, np.abs(t))):
            # one extra polish step
            p, dp = jacobi_dp(n, beta, t)
            return t - p / dp
    raise NoConvergence(f"Jacobi roots N={n}, beta={beta}: Newton did not converge")


def _bracketed_root(n: int, beta: float, lo: float, hi: float) -> float:
    """Safeguarded Newton inside a bracket holding exactly one root."""
    plo = jacobi_p(n, beta, lo)[0]
    t = 0.5 * (lo + hi)
    for _ in range(MAX_NEWTON):
        p, dp = jacobi_dp(n, beta, t)
        if p == 0:
            return float(t)
        if np.sign(p) == np.sign(plo):
            lo, plo = t, p
        else:
            hi = t
        t_new = t - p / dp
        if not lo < t_new < hi:
            t_new = 0.5 * (lo + hi)
        if abs(t_new - t) < 1e-15 * max(1.0, abs(t)):
            return float(t_new)
        t = t_new
    raise NoConvergence(f"Jacobi root in ({lo}, {hi}) did not converge")


def _interlacing_roots(n: int, beta: float) -> np.ndarray:
    # zeros of P_m interlace those of P_{m-1}; climb from m = 1
    roots = np.array([])
    for m in range(1, n + 1):
        edges = np.concatenate(([-1.0], roots, [1.0]))
        roots = np.array([_bracketed_root(m, beta, edges[j], edges[j + 1]) for j in range(m)])
    return roots


def jacobi_roots(N: int, beta: int) -> np.ndarray:
    """Zeros x_i in (0, 1) of P_N^{(0,beta)}(2x - 1), ascending."""
    if N < 1 or beta < 0:
        raise ValueError(f"need N >= 1 and beta >= 0, got N={N}, beta={beta}")
    i = np.arange(1, N + 1)
    theta = (i - 0.25) * np.pi / (N + (beta + 1) / 2.0)
    t = np.sort(np.cos(theta))
    try:
        t = np.sort(_newton(N, beta, t))
        ok = np.all(np.diff(t) > 1e-12) and t[0] > -1 and t[-1] < 1
    except (NoConvergence, FloatingPointError):
        ok = False
    if not ok:
        t = _interlacing_roots(N, beta)
    return (t + 1.0) / 2.0


def _factorial_ratio(N: int, ell: int) -> float:
    """(N + 2l)! / (N! (2l)!) as a running product."""
    out = 1.0
    for m in range(1, 2 * ell + 1):
        out *= (N + m) / m
    return out


@dataclass(frozen=True)
class MeshConfig:
    N: int
    a: float
    beta: int = 0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"N must be >= 2, got {self.N}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.beta < 0 or self.beta % 2:
            raise ValueError(f"beta must be a non-negative even integer (2*ell), got {self.beta}")

    @property
    def ell(self) -> int:
        return self.beta // 2


@dataclass(frozen=True, eq=False)
class LagrangeMesh:
    """Nodes, boundary values, origin limits and T0 + L(0) for one mesh.

    All arrays are computed once at construction and treated as read-only.
    `kinetic_bloch0` is in units where hbar^2/2mu = 1.
    """

    config: MeshConfig
    x: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, N: int, a: float, ell: int = 0) -> "LagrangeMesh":
        cfg = MeshConfig(N=N, a=float(a), beta=2 * ell)
        return cls(cfg, jacobi_roots(N, cfg.beta))

    @property
    def N(self) -> int:
        return self.config.N

    @property
    def a(self) -> float:
        return self.config.a

    @property
    def beta(self) -> int:
        return self.config.beta

    @property
    def ell(self) -> int:
        return self.config.ell

    @cached_property
    def nodes(self) -> np.ndarray:
        return self.a * self.x

    @cached_property
    def _signs(self) -> np.ndarray:
        i = np.arange(1, self.N + 1)
        return (-1.0) ** (self.N - i)

    @cached_property
    def phi_at_a(self) -> np.ndarray:
        return basis_at_boundary(self.config, self.x)

    @cached_property
    def origin_limit(self) -> np.ndarray:
        return origin_limits(self.config, self.x)

    @cached_property
    def kinetic_bloch0(self) -> np.ndarray:
        return kinetic_bloch0(self.config, self.x)

    @cached_property
    def weights(self) -> np.ndarray:
        """Gauss weights lambda_i for integrals over dr on [0, a].

        Gauss-Jacobi weights for (1+t)^beta on [-1, 1] are
        2^{beta+1} / ((1-t^2) P_N'(t)^2); the factor (r/a)^beta is divided out.
        """
        t = 2 * self.x - 1
        _, dp = jacobi_dp(self.N, self.beta, t)
        return self.a / ((1 - t * t) * dp**2 * self.x**self.beta)

    @cached_property
    def _dp_nodes(self) -> np.ndarray:
        return jacobi_dp(self.N, self.beta, 2 * self.x - 1)[1]

    def basis(self, r) -> np.ndarray:
        """phi_i(r) for every i, shape (len(r), N)."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        a, beta = self.a, self.beta
        ri = self.nodes
        p = jacobi_p(self.N, beta, 2 * r / a - 1)[0]
        diff = r[:, None] - ri[None, :]
        at_node = np.abs(diff) < 1e-14 * a
        ratio = np.where(at_node, 2 * self._dp_nodes[None, :] / a,
                         p[:, None] / np.where(at_node, 1.0, diff))
        pref = self._signs * np.sqrt((a - ri) / (a * ri))
        radial = a ** (-beta / 2) * r ** (beta / 2 + 1)
        return pref[None, :] * ratio * radial[:, None]


def basis_at_boundary(mesh: MeshConfig, roots) -> np.ndarray:
    """phi_i(a); uses P_N^{(0,beta)}(1) = 1."""
    roots = np.asarray(roots, dtype=float)
    N = len(roots)
    i = np.arange(1, N + 1)
    ri = mesh.a * roots
    return (-1.0) ** (N - i) * np.sqrt(mesh.a / (ri * (mesh.a - ri)))


def origin_limits(mesh: MeshConfig, roots) -> np.ndarray:
    """lim_{r->0} phi_i(r) / r^{l+1}."""
    roots = np.asarray(roots, dtype=float)
    N = len(roots)
    ell = mesh.beta // 2
    a = mesh.a
    i = np.arange(1, N + 1)
    ri = a * roots
    return (
        (-1.0) ** (i + 1)
        * np.sqrt((a - ri) / (a * ri**3))
        * _factorial_ratio(N, ell)
        / a**ell
    )


def kinetic_bloch0(mesh: MeshConfig, roots) -> np.ndarray:
    """Matrix elements of -d^2/dr^2 + delta(r - a) d/dr on the mesh.

    Units are hbar^2/2mu = 1. Equal to the exact integral of phi_i' phi_j'
    because the integrand is r^beta times a polynomial of degree 2N - 2.
    """
    roots = np.asarray(roots, dtype=float)
    N = len(roots)
    a, beta = mesh.a, float(mesh.beta)
    r = a * roots
    ar = a - r
    diag = (
        4 * (2 * N + beta + 1) ** 2 - 3 * beta**2 + 8
        - (beta**2 - 4) * a / r
        - 20 * a / ar
    ) / (12 * r * ar)
    ri, rj = r[:, None], r[None, :]
    idx = np.arange(1, N + 1)
    # relative sign fixed by the (-1)^{N-i} convention of phi_i
    sign = (-1.0) ** (idx[:, None] - idx[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        bracket = (
            N * (N + beta + 1) + beta / 2 + 1
            + (a * ri + a * rj - 2 * ri * rj) / (ri - rj) ** 2
            - a / (a - ri)
            - a / (a - rj)
        )
        out = sign * bracket / np.sqrt(ri * rj * (a - ri) * (a - rj))
    out[np.diag_indices(N)] = diag
    return out
