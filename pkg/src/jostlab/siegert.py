"""Siegert states and pseudostates.

Three routes are provided:

* `find_jost_zeros`: Newton iteration on the calculated Jost function, any l.
* `quadratic_siegert_l0`: the quadratic eigenproblem obtained by setting
  B = L_0(k) = ika in C(E, B), linearized to a real 2N x 2N problem.
* `iterative_bL`: repeatedly take the eigenvalue of C(0, L(k)) nearest the
  previous energy.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import EigensolveFailure, NoConvergence, SingularAtPole, UnsupportedPartialWave
from .jost import JostCalculator
from .potentials import SiegertLocation

log = logging.getLogger(__name__)

AXIS_TOL = 1e-6
MATCH_RADIUS = 0.05
BAND_HALF_WIDTH = 0.3

NEWTON_TOL = 1e-11
NEWTON_MAX_ITER = 50
STALL_STEP = 1e-6
MERGE_RADIUS = 1e-5
POLISH_STEPS = 3
POLISH_RADIUS = 1e-8
ITERATIVE_TOL = 1e-10

KINDS = ("bound", "virtual", "resonance", "mirror_resonance", "pseudostate")
METHODS = ("jost_zero", "quadratic_eig", "iterative")


@dataclass(frozen=True)
class SiegertState:
    k: complex
    E: complex
    kind: str
    method: str
    residual: float

    def as_dict(self) -> dict:
        return {
            "k_re": self.k.real,
            "k_im": self.k.imag,
            "E_re": self.E.real,
            "E_im": self.E.imag,
            "class": self.kind,
            "method": self.method,
            "residual": self.residual,
        }


@dataclass
class ZeroSearch:
    """States found by `find_jost_zeros` plus how many seeds were dropped."""

    states: list = field(default_factory=list)
    n_seeds: int = 0
    n_dropped: int = 0

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]


LINE_RADIUS = 10.0


def _matches_exact(k, exact_locations):
    return any(abs(complex(k) - loc.k) < MATCH_RADIUS for loc in exact_locations)


def pseudostate_line(poles=(), roots=(), exact_locations=()) -> float | None:
    """Im k around which pseudostates cluster.

    With roots given, the median Im k of the off-axis lower-half-plane roots
    with |k| < LINE_RADIUS that match no exact location; the band moves up as
    a grows, so it is measured rather than predicted. Otherwise the Im k of
    the shallowest exact Jost pole.
    """
    cand = [
        complex(q).imag for q in roots
        if complex(q).imag < 0 and abs(complex(q).real) >= AXIS_TOL
        and abs(complex(q)) < LINE_RADIUS and not _matches_exact(q, exact_locations)
    ]
    if cand:
        return float(np.median(cand))
    poles = list(poles)
    if not poles:
        return None
    return max(complex(p).imag for p in poles)


def classify(k, exact_locations=(), poles=(), line=None) -> str:
    """Class of a Siegert state at wave number k.

    Exact locations (SiegertLocation objects) win within MATCH_RADIUS; then
    anything in the band of width 2*BAND_HALF_WIDTH around the pseudostate
    line is a pseudostate; everything else goes by quadrant. `line` defaults
    to the exact-pole estimate.
    """
    k = complex(k)
    for loc in exact_locations:
        if abs(k - loc.k) < MATCH_RADIUS:
            return loc.kind
    if line is None:
        line = pseudostate_line(poles)
    if line is not None and abs(k.imag - line) <= BAND_HALF_WIDTH:
        return "pseudostate"
    if abs(k.real) < AXIS_TOL:
        return "bound" if k.imag > 0 else "virtual"
    if k.imag < 0:
        return "resonance" if k.real > 0 else "mirror_resonance"
    # off-axis upper half plane: not a physical Siegert state
    return "pseudostate"


def _exact_info(potential):
    if potential is None or not hasattr(potential, "siegert_locations"):
        return [], []
    return potential.siegert_locations(), potential.jost_poles()


def default_seeds(potential=None, re_range=(-8.0, 8.0), im_range=(-3.0, 2.0), step=0.4):
    """Rectangular seed lattice plus the exact Siegert locations."""
    re = np.arange(re_range[0], re_range[1] + step / 2, step)
    im = np.arange(im_range[0], im_range[1] + step / 2, step)
    lattice = (re[None, :] + 1j * im[:, None]).ravel()
    exact = [loc.k for loc in _exact_info(potential)[0]]
    return np.concatenate([np.asarray(exact, dtype=complex), lattice])


def _classified(ks, potential):
    exact, poles = _exact_info(potential)
    line = pseudostate_line(poles, ks, exact)
    return [classify(q, exact, poles, line) for q in ks]


def _merge(ks, residuals, radius=MERGE_RADIUS):
    kept: list[tuple[complex, float]] = []
    for k, res in sorted(zip(ks, residuals), key=lambda t: t[1]):
        if all(abs(k - q) >= radius for q, _ in kept):
            kept.append((k, res))
    return kept


def _polish(calc: JostCalculator, k: complex) -> complex:
    d = calc.cfg.a if k.imag < 0 else 0.0
    q = complex(k)
    try:
        with np.errstate(all="ignore"):
            for _ in range(POLISH_STEPS):
                h = 1e-6 * max(1.0, abs(q))
                g = lambda z: calc.f_inversion(z) * np.exp(-1j * z * d)
                step = g(q) / ((g(q + h) - g(q - h)) / (2 * h))
                if not np.isfinite(step):
                    return complex(k)
                q -= step
                if abs(step) < NEWTON_TOL:
                    break
    except SingularAtPole:
        return complex(k)
    return q if abs(q - k) < POLISH_RADIUS else complex(k)


def find_jost_zeros(
    calc: JostCalculator,
    seeds=None,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
    potential=None,
) -> ZeroSearch:
    """Newton iteration on f_l(k) from every seed at once.

    Seeds in the lower half plane iterate on g(k) = f_l(k) exp(-ika), which
    has the same zeros but not the exponential growth that shrinks the Newton
    basins of roots deep in that half plane; seeds with Im k >= 0 iterate on
    f_l(k) itself, which is tame there. The derivative is a central difference with
    step 1e-6 max(1, |k|). Seeds that hit `max_iter` or leave the finite
    domain are dropped. Near pseudostates roundoff puts a floor of roughly
    1e-9 under the Newton step; a seed whose step is below STALL_STEP and no
    longer halving is accepted as converged at that floor. Roots in the
    overflow region are dropped as well. Each surviving root then gets up to
    POLISH_STEPS Newton steps on the linear-solve route `f_inversion`, kept
    only if they stay within POLISH_RADIUS.
    """
    potential = calc.system.potential if potential is None else potential
    if seeds is None:
        seeds = default_seeds(potential)
    a = calc.cfg.a

    k = np.atleast_1d(np.asarray(seeds, dtype=complex)).copy()
    damp = np.where(k.imag < 0, a, 0.0)

    def g(q, d):
        return calc.f(q) * np.exp(-1j * q * d)

    active = np.ones(k.shape, dtype=bool)
    done = np.zeros(k.shape, dtype=bool)
    last = np.full(k.shape, np.inf)
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            idx = np.flatnonzero(active)
            if idx.size == 0:
                break
            kk = k[idx]
            h = 1e-6 * np.maximum(1.0, np.abs(kk))
            d = damp[idx]
            f0 = g(kk, d)
            df = (g(kk + h, d) - g(kk - h, d)) / (2 * h)
            step = f0 / df
            bad = ~np.isfinite(step)
            k[idx] = kk - np.where(bad, 0, step)
            size = np.abs(step)
            stalled = (size < STALL_STEP) & (size > 0.5 * last[idx])
            last[idx] = size
            conv = ~bad & ((size < tol) | stalled)
            done[idx[conv]] = True
            active[idx[conv | bad]] = False
        residual = np.abs(calc.f(k)) if k.size else np.array([])
    overflow, _ = calc.flags(k)
    ok = done & np.isfinite(residual) & ~overflow
    merged = [(_polish(calc, q), r) for q, r in _merge(k[ok], residual[ok])]
    kinds = _classified([q for q, _ in merged], potential)
    h2m = calc.cfg.h2m
    states = [
        SiegertState(k=complex(q), E=complex(h2m * q * q), kind=kind,
                     method="jost_zero", residual=float(r))
        for (q, r), kind in zip(merged, kinds)
    ]
    states.sort(key=lambda s: (s.k.real, s.k.imag))
    dropped = int(np.count_nonzero(~ok))
    log.info("jost zeros: %d seeds, %d dropped, %d distinct roots", k.size, dropped, len(states))
    return ZeroSearch(states=states, n_seeds=int(k.size), n_dropped=dropped)


def quadratic_siegert_l0(system, potential=None) -> list[SiegertState]:
    """All 2N roots of [C(0,0) - (hbar^2/2mu)(ik) phi phi^T - (hbar^2/2mu) k^2] v = 0.

    With lam = ik and h = hbar^2/2mu the problem reads
    lam^2 v = lam phi phi^T v - C(0,0)/h v, so the real companion matrix

        [[0, I], [-C(0,0)/h, phi phi^T]]

    acting on w = [v, lam v] has eigenvalue lam; k = -i lam.
    """
    cfg = system.cfg
    if cfg.ell != 0 or cfg.eta != 0:
        raise UnsupportedPartialWave("the quadratic Siegert problem requires l = 0 and eta = 0")
    potential = system.potential if potential is None else potential
    N = system.mesh.N
    h = cfg.h2m
    c0 = system.assemble_C(0.0, 0.0).real
    phi = system.mesh.phi_at_a
    pp = np.outer(phi, phi)
    comp = np.block([[np.zeros((N, N)), np.eye(N)], [-c0 / h, pp]])
    try:
        lam, w = scipy.linalg.eig(comp)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolveFailure(str(exc)) from exc
    ks = [complex(-1j * q) for q in lam]
    kinds = _classified(ks, potential)
    states = []
    for j in range(2 * N):
        v = w[:N, j]
        q = lam[j]
        res = np.linalg.norm(c0 @ v - h * q * (pp @ v) + h * q * q * v) / np.linalg.norm(v)
        states.append(SiegertState(k=ks[j], E=complex(h * ks[j] ** 2), kind=kinds[j],
                                   method="quadratic_eig", residual=float(res)))
    states.sort(key=lambda s: (s.k.real, s.k.imag))
    return states


def _continue_sqrt(E, h2m, k_prev):
    k = np.sqrt(complex(E) / h2m)
    return k if abs(k - k_prev) <= abs(-k - k_prev) else -k


def iterative_bL(system, k0, max_iter: int = 500, tol: float = ITERATIVE_TOL,
                 potential=None) -> SiegertState:
    """Iterate E <- eigenvalue of C(0, L_l(k(E))) nearest the previous E.

    The square root E -> k is continued from the previous iterate. Raises
    NoConvergence when |E_{j+1} - E_j| stays above `tol`.
    """
    cfg = system.cfg
    potential = system.potential if potential is None else potential
    k = complex(k0)
    E = complex(cfg.energy(k))
    for it in range(1, max_iter + 1):
        B = complex(cfg.log_derivative(k))
        try:
            ev = scipy.linalg.eigvals(system.assemble_C(0.0, B))
        except scipy.linalg.LinAlgError as exc:
            raise EigensolveFailure(str(exc)) from exc
        E_new = complex(ev[np.argmin(np.abs(ev - E))])
        k = _continue_sqrt(E_new, cfg.h2m, k)
        delta = abs(E_new - E)
        E = E_new
        if delta < tol:
            exact, poles = _exact_info(potential)
            log.debug("iterative B=L converged in %d steps", it)
            return SiegertState(k=k, E=E, kind=classify(k, exact, poles),
                                method="iterative", residual=float(delta))
    raise NoConvergence(f"iterative B=L(k) from k0={complex(k0)!r}: no convergence in {max_iter} steps")


def locate_pseudostates(calc: JostCalculator, seeds=None) -> list[complex]:
    """Pseudostate wave numbers found as Jost zeros (for the advisory flag)."""
    return [s.k for s in find_jost_zeros(calc, seeds) if s.kind == "pseudostate"]
