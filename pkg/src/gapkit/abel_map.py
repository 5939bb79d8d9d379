"""
The Abel map from divisors to characters of pi_1(Omega), through harmonic
measures:

    A_k(D) = (1/2) sum_j (omega(E_k, lam_j) - omega(E_k, b_j)) eps_j   mod 1
"""

from dataclasses import dataclass

import numpy as np

from .divisor import Divisor
from .potential import harmonic_measure
from .quadrature import DEFAULT_TOL

CIRCLE_TOL = 1e-8


def circle_distance(x, y=0.0):
    d = np.abs(np.mod(np.asarray(x, dtype=float) - y, 1.0))
    return np.minimum(d, 1.0 - d)


@dataclass(frozen=True)
class Character:
    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(np.mod(a, 1.0)) for a in self.alpha))

    def __neg__(self):
        return Character(tuple(-a for a in self.alpha))

    def __add__(self, other):
        return Character(tuple(a + b for a, b in zip(self.alpha, other.alpha)))

    def distance(self, other):
        if not self.alpha:
            return 0.0
        return float(np.max(circle_distance(np.array(self.alpha), np.array(other.alpha))))

    def close_to(self, other, tol=CIRCLE_TOL):
        return self.distance(other) <= tol

    def to_json(self):
        return {"alpha": list(self.alpha)}


def _raw_abel(D: Divisor, tol):
    gs = D.gs
    out = np.zeros(gs.n)
    for k in range(1, gs.n + 1):
        tot = 0.0
        for j, (lam, eps) in enumerate(D.entries, start=1):
            b = gs.b[j - 1]
            if lam == b:
                continue
            tot += eps * (harmonic_measure(gs, k, lam, tol) - harmonic_measure(gs, k, b, tol))
        out[k - 1] = 0.5 * tot
    return out


def abel(D: Divisor, tol=DEFAULT_TOL) -> Character:
    return Character(tuple(_raw_abel(D, tol)))


def abel_trajectory(gs, j, grid, eps=1, base=None, tol=DEFAULT_TOL):
    """A(D) as lam_j runs over ``grid`` with sign ``eps``; other entries from ``base``."""
    base = base or Divisor.D0(gs)
    rows = []
    for lam in grid:
        entries = list(base.entries)
        entries[j - 1] = (float(lam), eps)
        rows.append(_raw_abel(Divisor(gs, tuple(entries)), tol))
    return np.array(rows)


def abel_continuity_modulus(gs, j, grid, eps=1, base=None, tol=DEFAULT_TOL):
    """Largest change of any A_k between neighbouring grid points (circle metric)."""
    traj = abel_trajectory(gs, j, grid, eps, base, tol)
    if len(traj) < 2:
        return 0.0
    return float(np.max(circle_distance(np.diff(traj, axis=0))))
