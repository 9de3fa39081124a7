"""Free radial waves at eta = 0.

The incoming and outgoing waves are the Riccati-Hankel functions

    O_l(z) = G_l(z) + i F_l(z) = (-i)^l e^{iz} p_l(z)
    I_l(z) = G_l(z) - i F_l(z) =   i^l e^{-iz} p_l(-z)

with the terminating series p_l(z) = sum_m (l+m)!/(m!(l-m)!) (i/2z)^m.
All derivatives returned here are taken with respect to z; multiply by k
to get d/dr.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonzeroEta, ZeroArgument

# |Im z| beyond which e^{|Im z|} products may overflow a double.
OVERFLOW_IM = math.log(np.finfo(float).max) / 4.0
# Above this |Im z| callers should work with log_outgoing/log_incoming only.
LOG_SCALE_IM = 200.0


def _check_eta(eta: float) -> None:
    if eta != 0:
        raise NonzeroEta(f"eta={eta!r}: only eta = 0 is implemented")


def _check_z(z, ell: int) -> None:
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    if ell >= 1 and np.any(np.asarray(z) == 0):
        raise ZeroArgument("irregular wave is singular at z = 0 for ell >= 1")


def _series_coefficients(ell: int) -> list[float]:
    return [
        math.factorial(ell + m) / (math.factorial(m) * math.factorial(ell - m))
        for m in range(ell + 1)
    ]


def _hankel_poly(z, ell: int, sign: int):
    """p_l(sign*z) and its z-derivative."""
    w = sign * 0.5j
    p = np.zeros_like(z, dtype=complex)
    dp = np.zeros_like(z, dtype=complex)
    for m, c in enumerate(_series_coefficients(ell)):
        term = c * w**m * z ** (-m) if m else c + 0 * z
        p = p + term
        if m:
            dp = dp - m * term / z
    return p, dp


@dataclass(frozen=True)
class InOutPair:
    """I_l, O_l and their z-derivatives at one argument (or array of them)."""

    I: complex
    O: complex
    dI: complex
    dO: complex
    overflow: bool

    def wronskian(self):
        """I O' - O I'; equals 2i identically."""
        return self.I * self.dO - self.O * self.dI


def riccati_waves(z, ell: int, eta: float = 0.0) -> InOutPair:
    _check_eta(eta)
    _check_z(z, ell)
    z = np.asarray(z, dtype=complex)
    p, dp = _hankel_poly(z, ell, +1)
    q, dq = _hankel_poly(z, ell, -1)
    eo = (-1j) ** ell * np.exp(1j * z)
    ei = (1j) ** ell * np.exp(-1j * z)
    O = eo * p
    I = ei * q
    dO = eo * (1j * p + dp)
    dI = ei * (-1j * q + dq)
    overflow = bool(np.any(np.abs(z.imag) > OVERFLOW_IM))
    if z.ndim == 0:
        O, I, dO, dI = complex(O), complex(I), complex(dO), complex(dI)
    return InOutPair(I=I, O=O, dI=dI, dO=dO, overflow=overflow)


def log_outgoing(z, ell: int):
    """Principal-branch-free log of O_l(z): l*log(-i) + iz + log p_l(z)."""
    _check_z(z, ell)
    z = np.asarray(z, dtype=complex)
    p, _ = _hankel_poly(z, ell, +1)
    return ell * (-0.5j * np.pi) + 1j * z + np.log(p)


def log_incoming(z, ell: int):
    _check_z(z, ell)
    z = np.asarray(z, dtype=complex)
    q, _ = _hankel_poly(z, ell, -1)
    return ell * (0.5j * np.pi) - 1j * z + np.log(q)


def _regular_series(z, ell: int, terms: int = 40):
    # z j_l(z) = z^{l+1}/(2l+1)!! * sum_m (-z^2/2)^m / (m! prod_{j=1..m}(2l+2j+1))
    total = np.zeros_like(z, dtype=complex)
    term = np.ones_like(z, dtype=complex)
    for m in range(terms):
        total = total + term
        term = term * (-0.5 * z * z) / ((m + 1) * (2 * ell + 2 * m + 3))
    return barrier_factor(ell) * z ** (ell + 1) * total


def regular_wave(z, ell: int, eta: float = 0.0):
    """F_l(z) = z j_l(z), the wave regular at the origin."""
    _check_eta(eta)
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1.0
    out = np.empty_like(z)
    if np.any(small):
        out[small] = _regular_series(z[small], ell)
    if np.any(~small):
        w = riccati_waves(z[~small], ell)
        out[~small] = (w.O - w.I) / 2j
    return complex(out) if out.ndim == 0 else out


def irregular_wave(z, ell: int, eta: float = 0.0):
    """G_l(z) = -z y_l(z)."""
    w = riccati_waves(z, ell, eta)
    return (w.O + w.I) / 2


def barrier_factor(ell: int, eta: float = 0.0) -> float:
    """C_l(0) = 1/(2l+1)!!."""
    _check_eta(eta)
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    out = 1.0
    for j in range(3, 2 * ell + 2, 2):
        out /= j
    return out


def log_derivative(k, ell: int, a: float, eta: float = 0.0):
    """L_l(k) = a O_l'(ka)/O_l(ka), with the derivative taken in r.

    Computed from the series ratio so no exponentials enter; for ell = 0
    this is exactly i k a.
    """
    _check_eta(eta)
    z = np.asarray(k, dtype=complex) * a
    if ell == 0:
        out = 1j * z
    else:
        _check_z(z, ell)
        p, dp = _hankel_poly(z, ell, +1)
        out = z * (1j + dp / p)
    return complex(out) if out.ndim == 0 else out


def log_derivative_incoming(k, ell: int, a: float, eta: float = 0.0):
    """a I_l'(ka)/I_l(ka); the continuation of conj(L(conj k))."""
    _check_eta(eta)
    z = np.asarray(k, dtype=complex) * a
    if ell == 0:
        out = -1j * z
    else:
        _check_z(z, ell)
        q, dq = _hankel_poly(z, ell, -1)
        out = z * (-1j + dq / q)
    return complex(out) if out.ndim == 0 else out


def asymptotic_waves(z, ell: int) -> InOutPair:
    """Leading large-|z| forms O ~ e^{i(z - l pi/2)}, I ~ e^{-i(z - l pi/2)}."""
    z = np.asarray(z, dtype=complex)
    phase = z - ell * np.pi / 2
    O = np.exp(1j * phase)
    I = np.exp(-1j * phase)
    dO, dI = 1j * O, -1j * I
    overflow = bool(np.any(np.abs(z.imag) > OVERFLOW_IM))
    if z.ndim == 0:
        O, I, dO, dI = complex(O), complex(I), complex(dO), complex(dI)
    return InOutPair(I=I, O=O, dI=dI, dO=dO, overflow=overflow)
