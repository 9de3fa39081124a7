"""Three short-range test potentials with closed-form Jost functions.

Potential1 is the s-wave Bargmann (Eckart) potential with one bound or
virtual state; Potential2 (s-wave) and Potential3 (p-wave) share the same
Jost function with a resonance at k = -i alpha. Units: hbar = mu = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from numpy.polynomial import Polynomial

from .errors import AtExactPole, ConstraintViolated, InvalidParams, SingularPotential

SCAN_POINTS = 10_000


def _exact_ratio(num, den, k):
    if np.ndim(k) == 0:
        if den == 0:
            raise AtExactPole(f"k={k!r} is a pole of the exact Jost function")
        return complex(num / den)
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / den


@dataclass(frozen=True)
class SiegertLocation:
    k: complex
    kind: str  # bound, virtual, resonance, mirror_resonance


@dataclass(frozen=True)
class Potential1:
    """V(r) = -4 k0^2 b e^{-2 k0 r} / (1 + b e^{-2 k0 r})^2, b = (k0+k1)/(k0-k1)."""

    kappa0: float = 2.0
    kappa1: float = 1.0
    ell: int = field(default=0, init=False)
    tag: str = field(default="1", init=False)

    def __post_init__(self):
        if not self.kappa0 > 0:
            raise InvalidParams("kappa0 must be positive")
        if not self.kappa0 > self.kappa1:
            raise InvalidParams("kappa0 > kappa1 is required for a regular potential")
        if self.kappa1 > 0 and not self.beta_v > 1:
            raise InvalidParams("beta_V must exceed 1 when kappa1 > 0")

    @property
    def beta_v(self) -> float:
        return (self.kappa0 + self.kappa1) / (self.kappa0 - self.kappa1)

    def __call__(self, r):
        e = self.beta_v * np.exp(-2 * self.kappa0 * np.asarray(r, dtype=float))
        return -4 * self.kappa0**2 * e / (1 + e) ** 2

    def exact_jost(self, k):
        k = np.asarray(k, dtype=complex)
        return _exact_ratio(k - 1j * self.kappa1, k + 1j * self.kappa0, k)

    def siegert_locations(self) -> list[SiegertLocation]:
        kind = "bound" if self.kappa1 > 0 else "virtual"
        return [SiegertLocation(1j * self.kappa1, kind)]

    def jost_poles(self) -> list[complex]:
        return [-1j * self.kappa0]


def _zeta(kappa: float, alpha: complex) -> float:
    return math.atanh(2 * alpha.real * kappa / (kappa**2 + abs(alpha) ** 2))


@dataclass(frozen=True)
class _ResonanceParams:
    kappa0: float = 1.5
    kappa1: float = 9.75
    alpha: complex = 0.1 + 0.5j

    def _validate(self):
        if not (self.kappa0 > 0 and self.kappa1 > 0):
            raise InvalidParams("kappa0 and kappa1 must be positive")
        if not (self.alpha.real > 0 and self.alpha.imag > 0):
            raise InvalidParams("alpha must have positive real and imaginary parts")
        if not self.kappa1 > self.kappa0:
            raise InvalidParams("only kappa1 > kappa0 is supported")

    @property
    def zeta0(self) -> float:
        return _zeta(self.kappa0, complex(self.alpha))

    @property
    def zeta1(self) -> float:
        return _zeta(self.kappa1, complex(self.alpha))

    def exact_jost(self, k):
        k = np.asarray(k, dtype=complex)
        a = complex(self.alpha)
        num = (k + 1j * a) * (k + 1j * a.conjugate())
        den = (k + 1j * self.kappa0) * (k + 1j * self.kappa1)
        return _exact_ratio(num, den, k)

    def siegert_locations(self) -> list[SiegertLocation]:
        a = complex(self.alpha)
        return [
            SiegertLocation(-1j * a, "resonance"),
            SiegertLocation(-1j * a.conjugate(), "mirror_resonance"),
        ]

    def jost_poles(self) -> list[complex]:
        return [-1j * self.kappa0, -1j * self.kappa1]


@dataclass(frozen=True)
class Potential2(_ResonanceParams):
    """s-wave potential with a resonance at k = -i alpha."""

    scan_radius: float = 10.0
    ell: int = field(default=0, init=False)
    tag: str = field(default="2", init=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        self._validate()
        # D(0) > 0 together with D ~ (k1 - k0) e^{(k0+k1) r}/4 at large r
        if not self.kappa1 * math.tanh(self.zeta0) > self.kappa0 * math.tanh(self.zeta1):
            raise SingularPotential("denominator changes sign: k1 tanh(zeta0) <= k0 tanh(zeta1)")
        d = self._denominator(np.linspace(0.0, self.scan_radius, SCAN_POINTS))
        if np.any(d <= 0):
            raise SingularPotential("denominator vanishes on the scan grid")

    def _denominator(self, r):
        A = self.kappa0 * r + self.zeta0
        B = self.kappa1 * r + self.zeta1
        return self.kappa1 * np.sinh(A) * np.cosh(B) - self.kappa0 * np.sinh(B) * np.cosh(A)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        k0, k1 = self.kappa0, self.kappa1
        A = k0 * r + self.zeta0
        B = k1 * r + self.zeta1
        num = (k0**2 - k1**2) * (k1**2 * np.sinh(A) ** 2 - k0**2 * np.sinh(B) ** 2)
        return num / self._denominator(r) ** 2


def _taylor(m: int, odd: bool) -> np.ndarray:
    """Coefficients in x of the first m terms of sinh (odd) or cosh."""
    c = np.zeros(2 * m + 1)
    for n in range(m):
        p = 2 * n + 1 if odd else 2 * n
        c[p] = 1.0 / math.factorial(p)
    return c


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


@dataclass(frozen=True)
class Potential3(_ResonanceParams):
    """p-wave potential sharing Potential2's Jost function.

    V(r) = -d^2/dr^2 ln W[r + c, sinh(k0 r + z0), sinh(k1 r + z1)] - 1/r^2
    with c = 2 alpha_R/|alpha|^2 and the zeta_i of Potential2. The Wronskian vanishes like r at the
    origin, so below `taylor_cutoff` the sinh/cosh factors are replaced by
    `taylor_terms`-term Taylor polynomials, W is formed as a polynomial,
    and the factor r is divided out before taking the log-derivative.
    """

    taylor_cutoff: float = 0.05
    taylor_terms: int = 6
    scan_radius: float = 10.0
    ell: int = field(default=1, init=False)
    tag: str = field(default="3", init=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        self._validate()
        lhs = 1 / self.kappa0 + 1 / self.kappa1
        rhs = 2 * self.alpha.real / abs(self.alpha) ** 2
        if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs)):
            raise ConstraintViolated(f"1/k0 + 1/k1 = {lhs!r} != 2 alpha_R/|alpha|^2 = {rhs!r}")
        r = np.linspace(0.0, self.scan_radius, SCAN_POINTS)
        reduced = np.where(r < self.taylor_cutoff, self._reduced_poly(r),
                           self._wronskian(np.maximum(r, self.taylor_cutoff))[0] / np.maximum(r, 1e-300))
        s = np.sign(reduced)
        if np.any(s == 0) or np.any(s != s[0]):
            raise SingularPotential("Wronskian vanishes on the scan grid")

    @property
    def shift(self) -> float:
        return 2 * self.alpha.real / abs(self.alpha) ** 2

    def _rows(self, r, order: int):
        """Derivatives 0..order of the three Wronskian functions."""
        g = [r + self.shift, np.ones_like(r)] + [np.zeros_like(r)] * (order - 1)
        cols = [g]
        for kappa, zeta in ((self.kappa0, self.zeta0), (self.kappa1, self.zeta1)):
            x = kappa * r + zeta
            sh, ch = np.sinh(x), np.cosh(x)
            cols.append([kappa**n * (sh if n % 2 == 0 else ch) for n in range(order + 1)])
        return cols

    def _wronskian(self, r):
        """W, W', W'' by differentiating one row at a time."""
        f = self._rows(np.asarray(r, dtype=float), 4)

        def det(d0, d1, d2):
            return _det3([[f[c][d] for c in range(3)] for d in (d0, d1, d2)])

        return det(0, 1, 2), det(0, 1, 3), det(0, 2, 3) + det(0, 1, 4)

    def _wronskian_poly(self) -> Polynomial:
        m = self.taylor_terms
        cols = [[Polynomial([self.shift, 1.0]), Polynomial([1.0]), Polynomial([0.0])]]
        for kappa, zeta in ((self.kappa0, self.zeta0), (self.kappa1, self.zeta1)):
            scale = kappa ** np.arange(2 * m + 1)
            sh = Polynomial(_taylor(m, True) * scale)
            ch = Polynomial(_taylor(m, False) * scale)
            f = sh * math.cosh(zeta) + ch * math.sinh(zeta)
            cols.append([f, f.deriv(1), f.deriv(2)])
        return _det3([[cols[c][d] for c in range(3)] for d in range(3)])

    def _reduced(self) -> Polynomial:
        # W(0) vanishes under the parameter constraint; drop the rounding residue
        c = self._wronskian_poly().coef
        return Polynomial(c[1:])

    def _reduced_poly(self, r):
        return self._reduced()(r)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        out = np.empty_like(r)
        small = r < self.taylor_cutoff
        if np.any(small):
            q = self._reduced()
            rs = r[small]
            q0, q1, q2 = q(rs), q.deriv(1)(rs), q.deriv(2)(rs)
            out[small] = -(q2 / q0 - (q1 / q0) ** 2)
        if np.any(~small):
            rl = r[~small]
            w, w1, w2 = self._wronskian(rl)
            out[~small] = -(w2 / w - (w1 / w) ** 2) - 1 / rl**2
        return float(out[0]) if scalar else out


POTENTIALS = {"1": Potential1, "2": Potential2, "3": Potential3}

# mesh defaults used for each potential's results
DEFAULT_MESH = {"1": (5.0, 40), "2": (5.0, 70), "3": (5.0, 50)}


def make_potential(tag: str, params: Mapping[str, object] | None = None):
    """Build potential `tag` ("1", "2" or "3") from a flat parameter mapping."""
    tag = str(tag)
    if tag not in POTENTIALS:
        raise InvalidParams(f"unknown potential {tag!r}; choose 1, 2 or 3")
    kwargs = dict(params or {})
    if "alpha" in kwargs:
        kwargs["alpha"] = complex(kwargs["alpha"])
    if "alpha_r" in kwargs or "alpha_i" in kwargs:
        kwargs["alpha"] = complex(float(kwargs.pop("alpha_r", 0.1)), float(kwargs.pop("alpha_i", 0.5)))
    for name in ("kappa0", "kappa1", "taylor_cutoff", "scan_radius"):
        if name in kwargs:
            kwargs[name] = float(kwargs[name])
    if "taylor_terms" in kwargs:
        kwargs["taylor_terms"] = int(kwargs["taylor_terms"])
    try:
        return POTENTIALS[tag](**kwargs)
    except TypeError as exc:
        raise InvalidParams(str(exc)) from None


def exact_siegert_locations(potential) -> tuple[list[SiegertLocation], list[complex]]:
    """Exact Siegert states and, separately, exact Jost-function poles."""
    return potential.siegert_locations(), potential.jost_poles()
