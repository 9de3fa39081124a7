"""Computational R-matrix on a Lagrange-Jacobi mesh.

C(E, B) is assembled in the Gauss approximation (potential sampled at the
nodes only). R(E, B) is available per energy by solving with C, or for all
energies at once from the eigen-decomposition of C(0, B).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
import scipy.linalg

from . import special
from .errors import EigensolveFailure, PotentialSingularAtNode, SingularAtPole
from .mesh import LagrangeMesh

POLE_RTOL = 1e-12


@dataclass(frozen=True)
class ChannelConfig:
    ell: int = 0
    a: float = 5.0
    mu: float = 1.0
    hbar: float = 1.0
    eta: float = 0.0

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("ell must be >= 0")
        if not (self.mu > 0 and self.hbar > 0 and self.a > 0):
            raise ValueError("mu, hbar and a must be positive")
        if self.eta != 0:
            raise special.NonzeroEta("only eta = 0 is implemented")

    @property
    def h2m(self) -> float:
        """hbar^2 / 2 mu."""
        return self.hbar**2 / (2 * self.mu)

    def energy(self, k):
        return self.h2m * np.asarray(k) ** 2

    def log_derivative(self, k):
        return special.log_derivative(k, self.ell, self.a, self.eta)

    def log_derivative_incoming(self, k):
        return special.log_derivative_incoming(k, self.ell, self.a, self.eta)


@dataclass(frozen=True, eq=False)
class RMatrixSpectral:
    """Eigen-decomposition of C(0, B), good for every complex E.

    `boundary` and `origin` hold phi(a)^T v_n and l^T v_n with eigenvectors
    normalised by the unconjugated form v^T v = 1.
    """

    B: complex
    energies: np.ndarray
    boundary: np.ndarray
    origin: np.ndarray
    h2m: float
    a: float

    @property
    def gammas(self) -> np.ndarray:
        """Reduced-width amplitudes gamma_n."""
        return np.sqrt(self.h2m / self.a) * self.boundary

    def _denominator(self, E):
        E = np.asarray(E, dtype=complex)
        d = self.energies - E[..., None]
        if E.ndim == 0:
            scale = np.maximum(1.0, np.abs(self.energies))
            if np.any(np.abs(d) < POLE_RTOL * scale):
                raise SingularAtPole(f"E={complex(E)!r} is an eigenvalue of C(0, B)")
        return d

    def rmatrix(self, E):
        out = np.sum(self.gammas**2 / self._denominator(E), axis=-1)
        return complex(out) if np.ndim(out) == 0 else out

    def chi(self, E):
        out = np.sum(self.origin * self.boundary / self._denominator(E), axis=-1)
        return complex(out) if np.ndim(out) == 0 else out


class RMatrixSystem:
    """One channel, one mesh and one potential.

    `potential` is any callable V(r) vectorised over numpy arrays.
    """

    def __init__(self, cfg: ChannelConfig, mesh: LagrangeMesh, potential: Callable):
        if mesh.ell != cfg.ell or mesh.a != cfg.a:
            raise ValueError("mesh (a, beta = 2 ell) must match the channel")
        self.cfg = cfg
        self.mesh = mesh
        self.potential = potential
        v = np.asarray(potential(mesh.nodes))
        if not np.all(np.isfinite(v)):
            raise PotentialSingularAtNode("potential is not finite at every mesh node")
        self.v_nodes = v

    @classmethod
    def build(cls, potential, N: int, a: float, ell: int | None = None, mu=1.0, hbar=1.0):
        ell = getattr(potential, "ell", 0) if ell is None else ell
        cfg = ChannelConfig(ell=ell, a=a, mu=mu, hbar=hbar)
        return cls(cfg, LagrangeMesh.build(N, a, ell), potential)

    @cached_property
    def _c00(self) -> np.ndarray:
        h2m, m = self.cfg.h2m, self.mesh
        ell = self.cfg.ell
        diag = h2m * ell * (ell + 1) / m.nodes**2 + self.v_nodes
        return h2m * m.kinetic_bloch0 + np.diag(diag)

    def assemble_C(self, E, B=0.0) -> np.ndarray:
        """C(E, B) = C(0, 0) - (hbar^2/2mu)(B/a) phi(a) phi(a)^T - E."""
        phi = self.mesh.phi_at_a
        c = self._c00 - self.cfg.h2m * (B / self.cfg.a) * np.outer(phi, phi)
        return c - E * np.eye(self.mesh.N)

    def _solve(self, E, B):
        E = complex(E)
        spec = self.spectral(B) if np.isreal(B) else None
        if spec is not None:
            spec._denominator(E)  # pole guard
        try:
            return scipy.linalg.solve(self.assemble_C(E, B), self.mesh.phi_at_a.astype(complex))
        except (scipy.linalg.LinAlgError, ValueError) as exc:
            raise SingularAtPole(f"C({E}, {B}) is singular") from exc

    def rmatrix_by_inversion(self, E, B=0.0) -> complex:
        x = self._solve(E, B)
        return complex(self.cfg.h2m / self.cfg.a * self.mesh.phi_at_a @ x)

    def chi_by_inversion(self, E, B=0.0) -> complex:
        """sum_ij l_i [C^{-1}]_ij phi_j(a)."""
        x = self._solve(E, B)
        return complex(self.mesh.origin_limit @ x)

    def spectral(self, B=0.0) -> RMatrixSpectral:
        B = complex(B)
        cache = self.__dict__.setdefault("_spectral_cache", {})
        if B in cache:
            return cache[B]
        c = self.assemble_C(0.0, B)
        try:
            if B.imag == 0:
                energies, vecs = scipy.linalg.eigh(c.real)
            else:
                energies, vecs = scipy.linalg.eig(c)
                norm = np.sqrt(np.sum(vecs * vecs, axis=0))
                vecs = vecs / norm
        except scipy.linalg.LinAlgError as exc:
            raise EigensolveFailure(str(exc)) from exc
        if not np.all(np.isfinite(energies)):
            raise EigensolveFailure("non-finite eigenvalues")
        out = RMatrixSpectral(
            B=B,
            energies=np.asarray(energies, dtype=complex),
            boundary=self.mesh.phi_at_a @ vecs,
            origin=self.mesh.origin_limit @ vecs,
            h2m=self.cfg.h2m,
            a=self.cfg.a,
        )
        if B.imag == 0:
            cache[B] = out
        return out

    def rmatrix(self, E, B=0.0):
        return self.spectral(B).rmatrix(E)

    def smatrix(self, k, B=0.0):
        """S = (I/O) (1 - [L* - B] R) / (1 - [L - B] R) at z = ka."""
        cfg = self.cfg
        k = np.asarray(k, dtype=complex)
        R = self.rmatrix(cfg.energy(k), B)
        L = cfg.log_derivative(k)
        Ls = cfg.log_derivative_incoming(k)
        z = k * cfg.a
        ratio = np.exp(special.log_incoming(z, cfg.ell) - special.log_outgoing(z, cfg.ell))
        out = ratio * (1 - (Ls - B) * R) / (1 - (L - B) * R)
        return complex(out) if out.ndim == 0 else out

    def internal_wavefunction(self, k, r, B=0.0):
        """u_l(k, r) on [0, a], normalised to I - S O at r = a."""
        cfg, m = self.cfg, self.mesh
        k = complex(k)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r < 0) or np.any(r > cfg.a * (1 + 1e-12)):
            raise ValueError("r must lie in [0, a]")
        E = complex(cfg.energy(k))
        x = self._solve(E, B)  # C^{-1} phi(a)
        R = cfg.h2m / cfg.a * (m.phi_at_a @ x)
        L = cfg.log_derivative(k)
        O = special.riccati_waves(k * cfg.a, cfg.ell).O
        pref = -1j * k * cfg.hbar**2 / (cfg.mu * O) / (1 - (L - B) * R)
        return pref * (m.basis(r) @ x)
