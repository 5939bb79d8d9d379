"""
Green functions and harmonic measures of Omega = C minus E.

The Green function with pole lam0 (in a gap, or on the negative axis) is
``G(z) = Re int dW`` with the third-kind differential

    dW = i N(lam) dlam / ((lam - lam0) sqrt(T(lam)))

and N real of degree <= n. On the real points of Omega, ``i/sqrt(T(x+i0))``
equals ``sigma(x)/|T(x)|^{1/2}`` for a region sign sigma (see
:meth:`GapSet.region_sigma`), so dW is real there and purely imaginary on
the bands. Single-valuedness of Re W becomes one vanishing (principal
value) integral per gap, and the logarithmic pole becomes the residue
condition ``sigma(lam0) N(lam0) / |T(lam0)|^{1/2} = -1``.

Everything is computed on E/b_1; Green functions are invariant under that
dilation.
"""

from functools import lru_cache

import numpy as np

from .abelian import solve_normalized_polys
from .curve import GapSet
from .nodal import NodalPoly, product_columns
from .quadrature import (
    DEFAULT_TOL,
    chebyshev_partial,
    chebyshev_pole,
    half_line_integral,
    tail_integral,
)


class PoleProximityError(ValueError):
    pass


class GreenFunction:
    """Green function of Omega with a real pole ``lam0`` in a gap or in (-inf, 0)."""

    def __init__(self, gs: GapSet, lam0, tol=DEFAULT_TOL):
        self.gs = gs
        self.lam0 = float(lam0)
        self.tol = tol
        self.scale = float(gs.b[0]) if gs.n else 1.0
        self.sgs = gs.scaled(1.0 / self.scale) if gs.n else gs
        self.p0 = self.lam0 / self.scale
        kind, j = self.sgs.locate(self.p0)
        if kind not in ("gap", "neg"):
            raise ValueError(f"pole {lam0} is not in a gap or on the negative axis")
        self.pole_kind, self.pole_gap = kind, j
        self.N = self._solve()

    # representation -------------------------------------------------------------

    def _gap_weight(self, j):
        a, b = self.sgs.gap(j)
        return lambda x: 1.0 / np.sqrt(self.sgs.abs_T_except(x, (a, b)))

    def _solve(self):
        """N on the gap centres; rows and columns are equilibrated since the
        residue row grows like |p0|^n for a far pole."""
        gs, p0, n = self.sgs, self.p0, self.sgs.n
        nodes = 0.5 * (gs.a + gs.b)
        rows = np.zeros((n + 1, n + 1))
        rhs = np.zeros(n + 1)
        for j in range(1, n + 1):
            a, b = gs.gap(j)
            w = self._gap_weight(j)

            def g(x, w=w):
                return product_columns(x, nodes) * w(x)[:, None]

            rows[j - 1] = chebyshev_pole(g, a, b, p0, tol=self.tol)
        sigma = gs.region_sigma(p0)
        rows[n] = product_columns(p0, nodes)[0]
        rhs[n] = -np.sqrt(gs.abs_T(p0)) / sigma
        rs = np.linalg.norm(rows, axis=1)
        rows, rhs = rows / rs[:, None], rhs / rs
        cs = np.linalg.norm(rows, axis=0)
        coef = np.linalg.solve(rows / cs, rhs) / cs
        return NodalPoly.from_columns(nodes, coef[:n], coef[n])

    def _density(self, x):
        """sigma N / |T|^{1/2} / (x - p0) without the weight split (scaled coords)."""
        return self.N(x) / ((x - self.p0) * np.sqrt(self.sgs.abs_T(x)))

    # evaluation -------------------------------------------------------------------

    def __call__(self, z):
        z = float(z)
        if z == -np.inf:
            return 0.0
        x = z / self.scale
        gs = self.sgs
        kind, j = gs.locate(x)
        if kind in ("band", "top"):
            return 0.0
        span = (gs.gap(self.pole_gap)[1] - gs.gap(self.pole_gap)[0]) if self.pole_kind == "gap" else abs(self.p0)
        if abs(x - self.p0) < 1e-8 * span:
            raise PoleProximityError(
                f"z={z} is within 1e-8 of the pole {self.lam0}; split off -log|z - lam0| first"
            )
        sigma = gs.region_sigma(x)
        if kind == "gap":
            a, b = gs.gap(j)
            w = self._gap_weight(j)
            g = lambda t: sigma * self.N(t) * w(t)
            start = a
            if self.pole_kind == "gap" and self.pole_gap == j and x > self.p0:
                start = b
            val = chebyshev_pole(g, a, b, self.p0, start, x, tol=self.tol)
            return float(val)
        # negative axis
        if self.pole_kind == "neg" and x < self.p0:
            f = lambda t: sigma * self._density(t)
            return float(tail_integral(f, x, tol=self.tol))
        if self.pole_kind == "neg":
            # p0 < x < 0: integrate from 0, the pole stays outside the path
            pass
        roots_r = [r for r in gs.roots if r != 0.0]

        def g(t):
            absTr = np.ones_like(t)
            for r in roots_r:
                absTr = absTr * np.abs(t - r)
            return sigma * self.N(t) / ((t - self.p0) * np.sqrt(absTr))

        return float(-half_line_integral(g, x, tol=self.tol))


@lru_cache(maxsize=512)
def _green_cached(gs, lam0, tol):
    return GreenFunction(gs, lam0, tol)


def green_function(gs: GapSet, lam0, tol=DEFAULT_TOL) -> GreenFunction:
    return _green_cached(gs, float(lam0), float(tol))


def green_value(gs: GapSet, lam0, z, tol=DEFAULT_TOL):
    """G(z, lam0) for z in a gap, on the spectrum (0) or in (-inf, 0).

    A pole at a gap endpoint gives the degenerate Green function 0.
    """
    j = gs.gap_index(lam0)
    if j is not None and lam0 in gs.gap(j):
        return 0.0
    return green_function(gs, lam0, tol)(z)


def green_asymptotic_ratio(gs: GapSet, lam0, s, tol=DEFAULT_TOL):
    """G(-s, lam0) sqrt(s) / 2, which tends to the Martin value M(lam0)."""
    return green_value(gs, lam0, -float(s), tol) * np.sqrt(s) / 2.0


def harmonic_measure(gs: GapSet, k, z, tol=DEFAULT_TOL):
    """omega(E_k, z) with E_k = E cap [0, a_k], for real z.

    Points of E return the indicator of E_k. In gap j,
    ``omega = [j >= k] + (sigma_j/pi) int_{a_j}^z O^(k)/|T|^{1/2}``; on the
    negative axis ``omega = 1 - (sigma/pi) int_z^0 O^(k)/|T|^{1/2}``.
    """
    if not 1 <= k <= gs.n:
        raise ValueError(f"k={k} out of range 1..{gs.n}")
    z = float(z)
    a_k = gs.a[k - 1]
    kind, j = gs.locate(z)
    if kind == "top":
        return 0.0
    if kind == "band":
        return 1.0 if z <= a_k else 0.0
    nd = solve_normalized_polys(gs, tol)
    O = nd.O[k - 1]
    sigma = gs.region_sigma(z)
    if kind == "gap":
        a, b = gs.gap(j)
        g = lambda t: O(t) / np.sqrt(gs.abs_T_except(t, (a, b)))
        base = 1.0 if j >= k else 0.0
        return float(base + sigma / np.pi * chebyshev_partial(g, a, b, a, z, tol))
    roots_r = [r for r in gs.roots if r != 0.0]

    def g(t):
        absTr = np.ones_like(t)
        for r in roots_r:
            absTr = absTr * np.abs(t - r)
        return O(t) / np.sqrt(absTr)

    return float(1.0 - sigma / np.pi * half_line_integral(g, z, tol))


def green_critical_points(gs: GapSet, lam0=-1.0, tol=DEFAULT_TOL):
    """Real critical points of G(., lam0): the zeros of the numerator N in the gaps."""
    gf = green_function(gs, lam0, tol)
    r = np.sort(gf.N.roots().real) * gf.scale
    return np.array([x for x in r if gs.gap_index(x, closed=False) is not None])


def widom_sum(gs: GapSet, lam0=-1.0, tol=DEFAULT_TOL):
    """Finite-gap Widom sum: G(c, lam0) summed over the critical points in the gaps."""
    gf = green_function(gs, lam0, tol)
    return float(sum(gf(c) for c in green_critical_points(gs, lam0, tol)))
