"""
Divisors, the resolvent product R_D, the Weyl pair m_+/m_- and related
quantities: the shifted pair n_+/n_-, the companion divisor D_1, the trace
quantities Q1, Q2, and canonical products on the negative axis.

    R_D(z)  = i prod(z - lam_j) / (2 sqrt(T(z)))
    m_pm(z) = -1/(2 R_D(z)) +- sum_j eps_j / (2 R_D'(lam_j) (lam_j - z))

The sum runs over interior lam_j only. R_D is positive on (-inf, 0) and
Herglotz in the upper half plane.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from .abelian import martin_value, solve_normalized_polys
from .curve import GapSet, eval_sqrtT
from .potential import green_function
from .quadrature import DEFAULT_TOL


class DivisorError(ValueError):
    pass


@dataclass(frozen=True)
class Divisor:
    gs: GapSet
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.gs.n:
            raise DivisorError(f"need {self.gs.n} entries, got {len(self.entries)}")
        canon = []
        for j, (lam, eps) in enumerate(self.entries, start=1):
            lam = float(lam)
            eps = int(eps)
            a, b = self.gs.gap(j)
            if not a <= lam <= b:
                raise DivisorError(f"lambda_{j}={lam} not in gap [{a}, {b}]")
            if eps not in (-1, 1):
                raise DivisorError(f"eps_{j} must be +1 or -1")
            if lam in (a, b):
                eps = 1
            canon.append((lam, eps))
        object.__setattr__(self, "entries", tuple(canon))

    @classmethod
    def D0(cls, gs):
        return cls(gs, tuple((b, 1) for _, b in gs.gaps))

    @property
    def lam(self):
        return np.array([e[0] for e in self.entries])

    @property
    def eps(self):
        return np.array([e[1] for e in self.entries])

    def antipodal(self):
        """D_*: every sign flipped."""
        return Divisor(self.gs, tuple((l, -e) for l, e in self.entries))

    def interior(self):
        """Indices (0-based) of entries strictly inside their gap."""
        return [j for j, (l, _) in enumerate(self.entries) if self.gs.a[j] < l < self.gs.b[j]]

    def to_json(self):
        return {"entries": [[l, e] for l, e in self.entries]}

    @classmethod
    def from_json(cls, gs, obj):
        if isinstance(obj, dict):
            obj = obj.get("entries")
        if not isinstance(obj, (list, tuple)):
            raise DivisorError("Divisor JSON needs an 'entries' list")
        out = []
        for item in obj:
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise DivisorError(f"malformed divisor entry {item!r}")
            out.append((float(item[0]), int(item[1])))
        return cls(gs, tuple(out))


def resolvent_R(D: Divisor, z, side="auto"):
    """R_D(z). At a branch point the limit is returned: 0 or complex infinity."""
    gs = D.gs
    zz = np.asarray(z, dtype=complex)
    num = np.ones_like(zz)
    for l in D.lam:
        num = num * (zz - l)
    root, flag = eval_sqrtT(gs, zz, side, return_flag=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 1j * num / (2.0 * np.asarray(root))
    flag = np.asarray(flag)
    if np.any(flag):
        hits = np.isin(zz, D.lam)
        out = np.where(flag & hits, 0.0, np.where(flag, complex(np.inf, 0), out))
    return out if out.ndim else complex(out)


class WeylPair:
    """Evaluators for R, m_+, m_-, n_+, n_- of a divisor."""

    def __init__(self, D: Divisor):
        self.D = D
        gs = D.gs
        idx = D.interior()
        self._poles = np.array([D.lam[j] for j in idx])
        self._eps = np.array([D.eps[j] for j in idx], dtype=float)
        dR = []
        for j in idx:
            lj = D.lam[j]
            others = np.prod([lj - D.lam[i] for i in range(gs.n) if i != j]) if gs.n > 1 else 1.0
            dR.append((1j * others / (2.0 * eval_sqrtT(gs, lj))).real)
        self._dR = np.array(dR)
        # residue weights of eps_j / (2 R'(lam_j) (lam_j - z))
        self._w = self._eps / (2.0 * self._dR) if len(idx) else np.zeros(0)

    def R(self, z, side="auto"):
        return resolvent_R(self.D, z, side)

    def _split(self, z):
        zz = np.asarray(z, dtype=complex)
        s = np.zeros_like(zz)
        for w, l in zip(self._w, self._poles):
            s = s + w / (l - zz)
        return s

    def m_plus(self, z, side="auto"):
        v = -1.0 / (2.0 * np.asarray(self.R(z, side))) + self._split(z)
        return v if np.ndim(v) else complex(v)

    def m_minus(self, z, side="auto"):
        v = -1.0 / (2.0 * np.asarray(self.R(z, side))) - self._split(z)
        return v if np.ndim(v) else complex(v)

    @cached_property
    def m_plus0(self):
        """m_+(0) in closed form; -1/(2R) vanishes at the band edge 0."""
        return float(np.sum(self._w / self._poles)) if len(self._w) else 0.0

    def n_plus(self, z, side="auto"):
        return self.m_plus(z, side) - self.m_plus0

    def n_minus(self, z, side="auto"):
        return self.m_minus(z, side) + self.m_plus0

    def pole_weights(self):
        """Interior poles lam_j with the dR'(lam_j) values used in the split."""
        return self._poles.copy(), self._dR.copy()


def weyl_pair(D: Divisor) -> WeylPair:
    return WeylPair(D)


def _regular_product(wp: WeylPair, x, j):
    """-R n_+ n_- at real x in gap j, with the pole at lam_j cancelled."""
    D = wp.D
    R = np.real(wp.R(x))
    npl = np.real(wp.n_plus(x))
    nmi = np.real(wp.n_minus(x))
    lam, eps = D.entries[j - 1]
    a, b = D.gs.gap(j)
    if a < lam < b:
        if eps > 0:
            return -(R * npl) * nmi
        return -(R * nmi) * npl
    return -R * npl * nmi


def companion_divisor(D: Divisor, grid=64) -> Divisor:
    """D_1: the zeros of -R n_+ n_- (one per closed gap), signed by which n vanishes."""
    wp = weyl_pair(D)
    gs = D.gs
    out = []
    for j in range(1, gs.n + 1):
        a, b = gs.gap(j)
        L = b - a
        inner = a + L * (np.arange(grid) + 0.5) / grid
        edge = L * 10.0 ** -np.arange(3, 13)
        xs = np.unique(np.concatenate([a + edge, inner, b - edge]))
        lam_j = D.entries[j - 1][0]
        xs = xs[np.abs(xs - lam_j) > 1e-9 * L]
        f = lambda x: float(_regular_product(wp, x, j))
        vals = np.array([f(x) for x in xs])
        change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if len(change):
            i = change[0]
            root = brentq(f, xs[i], xs[i + 1], xtol=1e-12 * L, rtol=4 * np.finfo(float).eps)
            npl = abs(complex(wp.n_plus(root)))
            nmi = abs(complex(wp.n_minus(root)))
            out.append((root, 1 if npl <= nmi else -1))
        elif np.all(vals < 0):
            out.append((b, 1))
        else:
            out.append((a, 1))
    return Divisor(gs, tuple(out))


@dataclass(frozen=True)
class TraceData:
    Q1: float
    Q2: float
    V0: float

    def to_json(self):
        return {"Q1": self.Q1, "Q2": self.Q2, "V0": self.V0}


def trace_data(D: Divisor, nd=None, tol=DEFAULT_TOL) -> TraceData:
    gs = D.gs
    nd = nd or solve_normalized_polys(gs, tol)
    Q1 = float(np.sum(0.5 * (gs.a + gs.b) - D.lam))
    Q2 = float(sum(e * martin_value(gs, nd, l, tol) for l, e in D.entries))
    return TraceData(Q1, Q2, 0.5 * Q1)


def canonical_product_neg_axis(D: Divisor, s, tol=DEFAULT_TOL):
    """L_D(-s) = prod sqrt((s+lam_j)/(s+b_j)) exp(-eps_j G(-s, lam_j)/2)."""
    if not s > 0:
        raise ValueError("s must be positive")
    gs = D.gs
    if gs.n == 0:
        return 1.0
    gf = green_function(gs, -float(s), tol)
    logL = 0.0
    for (lam, eps), b in zip(D.entries, gs.b):
        logL += 0.5 * (np.log(s + lam) - np.log(s + b)) - 0.5 * eps * gf(lam)
    return float(np.exp(logL))


def ratio_identity_residual(D: Divisor, s_grid=(1.0, 10.0, 100.0), D1=None, tol=DEFAULT_TOL):
    """max over s of |n_+(-s) + sqrt(s) L_{D1}(-s)/L_D(-s)| / (1 + |n_+(-s)|).

    The product identity L_D L_{D*} = prod (s+lam_j)/(s+b_j) is checked on the
    same grid and the larger of the two residuals is returned.
    """
    D1 = D1 or companion_divisor(D)
    wp = weyl_pair(D)
    Ds = D.antipodal()
    worst = 0.0
    for s in s_grid:
        npl = float(np.real(wp.n_plus(-s)))
        LD = canonical_product_neg_axis(D, s, tol)
        r = abs(npl + np.sqrt(s) * canonical_product_neg_axis(D1, s, tol) / LD) / (1.0 + abs(npl))
        exact = float(np.prod((s + D.lam) / (s + D.gs.b)))
        p = abs(LD * canonical_product_neg_axis(Ds, s, tol) - exact) / exact
        worst = max(worst, r, p)
    return worst


def wronskian_residual(D: Divisor, s_grid=(1.0, 10.0, 100.0), tol=DEFAULT_TOL):
    """Relative deviation of det L_D(-s) from 1/R_{D_0}(-s)."""
    D1 = companion_divisor(D)
    Ds = D.antipodal()
    D1s = D1.antipodal()
    R0 = weyl_pair(Divisor.D0(D.gs))
    worst = 0.0
    for s in s_grid:
        rs = np.sqrt(s)
        det = rs * canonical_product_neg_axis(D1s, s, tol) * canonical_product_neg_axis(D, s, tol) + (
            canonical_product_neg_axis(Ds, s, tol) * rs * canonical_product_neg_axis(D1, s, tol)
        )
        target = 1.0 / float(np.real(R0.R(-s)))
        worst = max(worst, abs(det - target) / abs(target))
    return worst


def mplus0_residual(D: Divisor, tol=DEFAULT_TOL):
    """m_+(0) - (Q2(D) - Q2(D_1))."""
    D1 = companion_divisor(D)
    nd = solve_normalized_polys(D.gs, tol)
    return weyl_pair(D).m_plus0 - (trace_data(D, nd, tol).Q2 - trace_data(D1, nd, tol).Q2)


def random_divisor(rng, gs, endpoint_prob=0.0):
    entries = []
    for a, b in gs.gaps:
        if rng.uniform() < endpoint_prob:
            entries.append((b if rng.uniform() < 0.5 else a, 1))
        else:
            entries.append((a + (b - a) * rng.uniform(0.05, 0.95), int(rng.choice([-1, 1]))))
    return Divisor(gs, tuple(entries))
