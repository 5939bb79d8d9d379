"""
Variation of the frequencies under motion of the gap endpoints, and the
inverse problem (eta, eta^(t)) -> gaps by damped Newton iteration.

For endpoint velocities (a', b') the frequencies move by

    (eta', etat') = -(1/2) X (a', b')

where row k of the eta block is ``O^(k)(c) P(c) / T'(c)`` and row k of the
time block is ``3 O^(k)(c) Qt(c) / T'(c)``, with c running over
``a_1..a_n, b_1..b_n``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .abelian import FrequencySet, frequencies, solve_normalized_polys, strict_inequality_sum
from .curve import GapSet, GapSetError
from .quadrature import DEFAULT_TOL, QuadratureError

log = logging.getLogger(__name__)


class NewtonError(RuntimeError):
    def __init__(self, message, best=None, residual=None, history=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.history = history or []


@dataclass(frozen=True)
class VariationMatrix:
    X: np.ndarray

    @property
    def cond(self):
        return float(np.linalg.cond(self.X))

    @property
    def det(self):
        return float(np.linalg.det(self.X))


def assemble_jacobian(gs: GapSet, nd=None, time_poly="Qt", tol=DEFAULT_TOL) -> VariationMatrix:
    """The 2n x 2n matrix X; ``time_poly="Q"`` uses Q instead of Qt in the time rows.

    The Q variant coincides with the Qt one on velocities with eta' = 0.
    """
    nd = nd or solve_normalized_polys(gs, tol)
    n = gs.n
    if time_poly not in ("Qt", "Q"):
        raise ValueError("time_poly must be 'Qt' or 'Q'")
    R = nd.Qt if time_poly == "Qt" else nd.Q
    pts = np.concatenate([gs.a, gs.b])
    dT = np.array([gs.dT_at_root(c) for c in pts])
    X = np.zeros((2 * n, 2 * n))
    for k in range(n):
        Ok = nd.O[k](pts)
        X[k] = Ok * nd.P(pts) / dT
        X[n + k] = 3.0 * Ok * R(pts) / dT
    return VariationMatrix(X)


def frequency_vector(gs, tol=DEFAULT_TOL):
    fs = frequencies(gs, tol=tol)
    return np.concatenate([fs.eta, fs.etat])


def _from_vector(v):
    n = len(v) // 2
    return GapSet(tuple(zip(v[:n], v[n:])))


def fd_jacobian(gs, h=1e-6, tol=DEFAULT_TOL):
    """Central differences of (eta, etat) in (a_1..a_n, b_1..b_n); compare with -X/2."""
    x = np.concatenate([gs.a, gs.b])
    J = np.zeros((2 * gs.n, 2 * gs.n))
    for i in range(2 * gs.n):
        e = np.zeros_like(x)
        e[i] = h
        J[:, i] = (frequency_vector(_from_vector(x + e), tol) - frequency_vector(_from_vector(x - e), tol)) / (2 * h)
    return J


def perturbed_seed(gs, rng, rel=0.05, max_tries=1000):
    """Endpoints scaled by independent factors in [1-rel, 1+rel], resampled until admissible."""
    x = np.concatenate([gs.a, gs.b])
    for _ in range(max_tries):
        try:
            return _from_vector(x * (1.0 + rel * rng.uniform(-1.0, 1.0, x.size)))
        except GapSetError:
            continue
    raise GapSetError(f"no admissible {rel:.0%} perturbation in {max_tries} draws")


@dataclass
class NewtonOptions:
    tol: float = 1e-8
    max_iter: int = 50
    quad_tol: float = DEFAULT_TOL
    time_poly: str = "Qt"
    min_step: float = 1e-14
    polish: bool = True


@dataclass
class NewtonResult:
    gapset: GapSet
    residual: float
    iterations: int
    history: list = field(default_factory=list)


def _residual_norm(F, n):
    return float(np.max(np.abs(F[:n])) + np.max(np.abs(F[n:]))) if n else 0.0


def invert_frequencies(eta, etat, seed: GapSet, opts=None) -> NewtonResult:
    """Find gaps whose (eta, eta^(t)) match the targets, starting from ``seed``.

    ``history`` records (iteration, residual, damping factor) tuples.
    """
    opts = opts or NewtonOptions()
    target = np.concatenate([np.asarray(eta, float), np.asarray(etat, float)])
    n = seed.n
    if len(target) != 2 * n:
        raise ValueError("target length must match the seed's gap count")
    if not np.all(np.isfinite(target)):
        raise ValueError("targets must be finite")
    gs = seed
    F = frequency_vector(gs, opts.quad_tol) - target
    r = _residual_norm(F, n)
    history = [(0, r, 1.0)]
    it = 0
    polished = not opts.polish or r <= opts.tol
    while True:
        if r <= opts.tol and polished:
            return NewtonResult(gs, r, it, history)
        if it >= opts.max_iter:
            raise NewtonError(f"no convergence in {opts.max_iter} iterations", gs, r, history)
        nd = solve_normalized_polys(gs, opts.quad_tol)
        if strict_inequality_sum(gs, nd) <= 1.0:
            raise NewtonError("interlacing inequality violated at an iterate", gs, r, history)
        X = assemble_jacobian(gs, nd, opts.time_poly, opts.quad_tol).X
        step = 2.0 * np.linalg.solve(X, F)
        x = np.concatenate([gs.a, gs.b])
        damping = 1.0
        accepted = False
        while np.max(np.abs(damping * step)) >= opts.min_step * max(1.0, np.max(np.abs(x))):
            try:
                cand = _from_vector(x + damping * step)
                Fc = frequency_vector(cand, opts.quad_tol) - target
            except (GapSetError, QuadratureError):
                # inadmissible or numerically degenerate candidate: shorten the step
                damping *= 0.5
                continue
            rc = _residual_norm(Fc, n)
            if rc < r or (r <= opts.tol and rc <= opts.tol):
                accepted = True
                break
            damping *= 0.5
        it += 1
        if not accepted:
            if r <= opts.tol:
                return NewtonResult(gs, r, it - 1, history)
            raise NewtonError("targets unreachable: damped step collapsed", gs, r, history)
        if r <= opts.tol:
            polished = True
        gs, F, r = cand, Fc, rc
        history.append((it, r, damping))
        log.debug("newton iter %d residual %.3e damping %.3g", it, r, damping)
