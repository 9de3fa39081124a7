"""Jost function from the R-matrix.

    f_l(k)  = C_l (2 k^l mu / hbar^2) O_l(ka) [1 - (L - B) R(E, B)] / chi(B)
    f_l(-k) = C_l (2 k^l mu / hbar^2) I_l(ka) [1 - (L* - B) R(E, B)] / chi(B)

B = 0 is the default route (one eigensolve serves every k).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import warnings

import numpy as np
import scipy.linalg

from . import special
from .rmatrix import RMatrixSystem

# advisory region, see JostCalculator.near_pseudostate
PSEUDO_LINE_MARGIN = 0.2
PSEUDO_RADIUS = 0.15


@dataclass(frozen=True)
class JostValue:
    k: complex
    f: complex
    f_minus: complex
    overflow: bool = False
    near_pseudostate: bool = False

    @property
    def s_check(self) -> complex:
        return self.f_minus / self.f

    @property
    def flagged(self) -> bool:
        return self.overflow or self.near_pseudostate


@dataclass(frozen=True, eq=False)
class JostCalculator:
    """Calculated Jost function for one RMatrixSystem.

    `pseudostates` (located Siegert pseudostates, usually from
    `siegert.locate_pseudostates`) only feeds the advisory flag.
    """

    system: RMatrixSystem
    pseudostates: tuple = field(default=())

    def with_pseudostates(self, ks) -> "JostCalculator":
        return replace(self, pseudostates=tuple(complex(k) for k in ks))

    @property
    def cfg(self):
        return self.system.cfg

    def _prefactor(self, k):
        cfg = self.cfg
        return special.barrier_factor(cfg.ell) * 2 * k**cfg.ell * cfg.mu / cfg.hbar**2

    def _combine(self, log_wave, k, bracket, chi):
        with np.errstate(divide="ignore", invalid="ignore"):
            val = self._prefactor(k) * bracket / chi
            out = np.where(val == 0, 0, np.exp(log_wave + np.log(np.where(val == 0, 1, val))))
        return complex(out) if np.ndim(out) == 0 else out

    def f(self, k, B=0.0):
        """f_l(k) with a real (cached) boundary parameter."""
        cfg = self.cfg
        k = np.asarray(k, dtype=complex)
        spec = self.system.spectral(B)
        E = cfg.energy(k)
        bracket = 1 - (cfg.log_derivative(k) - B) * spec.rmatrix(E)
        return self._combine(special.log_outgoing(k * cfg.a, cfg.ell), k, bracket, spec.chi(E))

    def f_minus(self, k, B=0.0):
        """f_l(-k), from I_l and the incoming log-derivative."""
        cfg = self.cfg
        k = np.asarray(k, dtype=complex)
        spec = self.system.spectral(B)
        E = cfg.energy(k)
        bracket = 1 - (cfg.log_derivative_incoming(k) - B) * spec.rmatrix(E)
        return self._combine(special.log_incoming(k * cfg.a, cfg.ell), k, bracket, spec.chi(E))

    def f_inversion(self, k, B=0.0) -> complex:
        """f_l(k) from one linear solve instead of the spectral sums.

        Slower per k but free of the eigenvector roundoff that the spectral
        sums carry; used to polish Jost zeros.
        """
        cfg = self.cfg
        k = complex(k)
        E = cfg.energy(k)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            x = self.system._solve(E, B)
        phi = self.system.mesh.phi_at_a
        R = complex(cfg.h2m / cfg.a * phi @ x)
        chi = complex(self.system.mesh.origin_limit @ x)
        bracket = 1 - (cfg.log_derivative(k) - B) * R
        return self._combine(special.log_outgoing(k * cfg.a, cfg.ell), k, bracket, chi)

    def f_bL(self, k) -> complex:
        """f_l(k) with B = L_l(k): no R-matrix, one linear solve per k."""
        cfg = self.cfg
        k = complex(k)
        chi = self.system.chi_by_inversion(cfg.energy(k), cfg.log_derivative(k))
        return self._combine(special.log_outgoing(k * cfg.a, cfg.ell), k, 1.0, chi)

    def chi(self, k, B=0.0):
        return self.system.spectral(B).chi(self.cfg.energy(np.asarray(k, dtype=complex)))

    def near_pseudostate(self, k) -> bool:
        if not self.pseudostates:
            return False
        ps = np.asarray(self.pseudostates)
        line = ps.imag.max()
        return bool(k.imag < line - PSEUDO_LINE_MARGIN or np.min(np.abs(ps - k)) < PSEUDO_RADIUS)

    def flags(self, k):
        """(overflow, near_pseudostate) arrays for an array of k."""
        k = np.asarray(k, dtype=complex)
        overflow = np.abs((k * self.cfg.a).imag) > special.OVERFLOW_IM
        near = np.zeros(k.shape, dtype=bool)
        if self.pseudostates:
            ps = np.asarray(self.pseudostates)
            dist = np.min(np.abs(k[..., None] - ps), axis=-1)
            near = (k.imag < ps.imag.max() - PSEUDO_LINE_MARGIN) | (dist < PSEUDO_RADIUS)
        return overflow, near

    def evaluate(self, k, B=0.0) -> JostValue:
        k = complex(k)
        overflow, near = self.flags(k)
        return JostValue(
            k=k,
            f=self.f(k, B),
            f_minus=self.f_minus(k, B),
            overflow=bool(overflow),
            near_pseudostate=bool(near),
        )

    def smatrix(self, k, B=0.0):
        return self.system.smatrix(k, B)

    def phase_shift(self, k):
        """Calculated phase shift(s) at real k > 0, see `unwrap_phase`."""
        k = np.asarray(k, dtype=float)
        return unwrap_phase(self.f(k))


def unwrap_phase(f_values):
    """delta = -arg f(k) for real k, since f(-k) = conj f(k) there.

    Values are unwrapped along the array and shifted by a multiple of pi so
    the last one lies in (-pi/2, pi/2].
    """
    f_values = np.asarray(f_values, dtype=complex)
    delta = -np.unwrap(np.angle(np.atleast_1d(f_values)))
    shift = np.pi * np.round(delta[-1] / np.pi)
    if delta[-1] - shift <= -np.pi / 2:
        shift -= np.pi
    delta = delta - shift
    return float(delta[0]) if f_values.ndim == 0 else delta


def exact_phase_shift(potential, k):
    return unwrap_phase(potential.exact_jost(np.asarray(k, dtype=float).astype(complex)))
