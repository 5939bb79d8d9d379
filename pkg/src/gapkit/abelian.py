"""
Normalized abelian differentials on w^2 = T(z) and the KdV frequencies.

    dTheta      = (1/2) P(z) dz / sqrt(T)      P monic, deg n
    dTheta^(1)  = (3/2) Q(z) dz / sqrt(T)      Q = z P1, P1 monic, deg n+1
    dTheta^(t)  = (3/2) Qt(z) dz / sqrt(T)     Qt = Q - (C/3) P
    dtheta_k    = O^(k)(z) dz / sqrt(T)        deg O^(k) <= n-1

P and Q have vanishing integrals over every gap. O^(k) is normalized by
``int_{gap j} O^(k) / sqrt(T(x+i0)) dx = i*pi*delta_kj``, which makes
``omega(E_k, z) = -Im int_{b_1}^z dtheta_k / pi`` the harmonic measure of
``E_k = E cap [0, a_k]``, and gives eta_k = -A_{O^(k)} with positive eta_k.

Moments are assembled on the rescaled set E/b_1, where all endpoints lie in
(0, 1], in the product basis of :mod:`gapkit.nodal` on the gap centres, and
mapped back with the homogeneity degrees of each differential.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curve import GapSet
from .nodal import NodalPoly, product_columns
from .quadrature import DEFAULT_TOL, chebyshev_integral, chebyshev_partial


class MomentSystemError(RuntimeError):
    pass


@dataclass(frozen=True)
class NormalizedDifferentials:
    """P, Q, Qt and O^(k) as :class:`NodalPoly` objects on the gap centres.

    Use :func:`to_power_basis` for ascending coefficients in z.
    """

    P: NodalPoly
    Q: NodalPoly
    Qt: NodalPoly
    O: tuple
    C: float

    @property
    def A_Q(self):
        c = to_power_basis(self.Q)
        return float(c[-2]) if len(c) >= 2 else 0.0

    def leading_O(self):
        """A_{O^(k)}: coefficient of z^{n-1} in each O^(k)."""
        n = len(self.O)
        return np.array([_pad(to_power_basis(o), n)[n - 1] for o in self.O])

    def to_json(self):
        return {
            "P": to_power_basis(self.P).tolist(),
            "Q": to_power_basis(self.Q).tolist(),
            "Qt": to_power_basis(self.Qt).tolist(),
            "O": [to_power_basis(o).tolist() for o in self.O],
            "C": self.C,
        }


@dataclass(frozen=True)
class FrequencySet:
    eta: np.ndarray
    eta1: np.ndarray
    etat: np.ndarray

    def to_json(self):
        return {"eta": self.eta.tolist(), "eta1": self.eta1.tolist(), "etat": self.etat.tolist()}


def segment_moments(gs: GapSet, p, q, basis, tol=DEFAULT_TOL):
    """``int_p^q f_i(lam) / |T(lam)|^{1/2} dlam`` for the columns of ``basis(lam)``.

    ``p`` and ``q`` must be consecutive branch points.
    """

    def g(lam):
        w = 1.0 / np.sqrt(gs.abs_T_except(lam, (p, q)))
        return basis(lam) * w[:, None]

    return chebyshev_integral(g, p, q, tol)


def _moment_basis(nodes):
    """Columns: the n+1 product columns, then the same times z."""

    def basis(lam):
        lam = np.asarray(lam, dtype=float)
        c = product_columns(lam, nodes)
        return np.hstack([c, lam[:, None] * c])

    return basis


def _solve(M, rhs, what):
    """Solve with column equilibration (the product columns differ in scale)."""
    scale = np.linalg.norm(M, axis=0)
    scale[scale == 0] = 1.0
    Ms = M / scale
    try:
        sol = np.linalg.solve(Ms, rhs)
    except np.linalg.LinAlgError as exc:
        raise MomentSystemError(f"{what}: singular moment matrix (cond={np.linalg.cond(Ms):.3e})") from exc
    if not np.all(np.isfinite(sol)):
        raise MomentSystemError(f"{what}: non-finite solution (cond={np.linalg.cond(Ms):.3e})")
    return sol / (scale[:, None] if sol.ndim > 1 else scale)


def _solve_scaled(gs: GapSet, tol):
    """P, Q, O on the gap centres for a set with b_1 = 1."""
    n = gs.n
    nodes = 0.5 * (gs.a + gs.b)
    basis = _moment_basis(nodes)
    m = np.array([segment_moments(gs, a, b, basis, tol) for a, b in gs.gaps])
    lag, full, zlag, zfull = m[:, :n], m[:, n], m[:, n + 1 : 2 * n + 1], m[:, 2 * n + 1]
    P = NodalPoly.from_columns(nodes, _solve(lag, -full, "P"), 1.0)
    Q = NodalPoly.from_columns(nodes, _solve(zlag, -zfull, "Q"), 1.0, zshift=1)
    # int_{gap j} O/|T|^{1/2} = i*pi*u_j * delta_kj with u_j the gap phase
    rhs = np.zeros((n, n))
    for j in range(1, n + 1):
        rhs[j - 1, j - 1] = (1j * np.pi * gs.gap_phase(j)).real
    oc = _solve(lag, rhs, "O")
    O = tuple(NodalPoly.from_columns(nodes, oc[:, k], 0.0) for k in range(n))
    return P, Q, O


def _pad(c, size):
    out = np.zeros(size)
    out[: len(c)] = c[:size]
    return out


def to_power_basis(p):
    """Ascending coefficients of ``p`` in powers of z."""
    return p.to_power()


@lru_cache(maxsize=256)
def _solve_cached(gs: GapSet, tol):
    n = gs.n
    if n == 0:
        P = NodalPoly([], [[1.0]])
        Q = NodalPoly([], [[0.0, 1.0]])
        return NormalizedDifferentials(P, Q, Q, (), 0.0)
    beta = float(gs.b[0])
    Pt, Qs, Ot = _solve_scaled(gs.scaled(1.0 / beta), tol)
    P = Pt.rescaled(beta, n)
    Q = Qs.rescaled(beta, n + 1)
    O = tuple(o.rescaled(beta, n - 0.5) for o in Ot)
    A_Q = float(_pad(to_power_basis(Q), n + 2)[n])
    C = 3.0 * (A_Q - 0.5 * gs.A_T)
    Qt = Q - (C / 3.0) * P
    return NormalizedDifferentials(P, Q, Qt, O, C)


def solve_normalized_polys(gs: GapSet, tol=DEFAULT_TOL) -> NormalizedDifferentials:
    return _solve_cached(gs, float(tol))


def _band_integrals(gs: GapSet, polys, tol):
    """Signed ``int_{band j} p / sqrt(T(x+i0))`` for every band j = 1..n."""
    out = np.zeros((gs.n, len(polys)))
    for j in range(1, gs.n + 1):
        lo, hi = gs.band(j)

        def g(lam, lo=lo, hi=hi):
            w = 1.0 / np.sqrt(gs.abs_T_except(lam, (lo, hi)))
            return np.stack([p(lam) * w for p in polys], axis=1)

        out[j - 1] = chebyshev_integral(g, lo, hi, tol) / gs.band_phase(j)
    return out


@lru_cache(maxsize=256)
def _frequencies_cached(gs: GapSet, tol):
    n = gs.n
    if n == 0:
        e = np.zeros(0)
        return FrequencySet(e, e.copy(), e.copy())
    beta = float(gs.b[0])
    sgs = gs.scaled(1.0 / beta)
    nd = _solve_cached(sgs, tol)
    bands = _band_integrals(sgs, [nd.P, nd.Q], tol)
    # eta_k = int_0^{a_k} dTheta: bands k..n lie below a_k
    tails = np.cumsum(bands[::-1], axis=0)[::-1]
    eta = 0.5 * tails[:, 0] * beta**0.5
    eta1 = 1.5 * tails[:, 1] * beta**1.5
    C = nd.C * beta
    return FrequencySet(eta, eta1, eta1 - C * eta)


def frequencies(gs: GapSet, nd=None, tol=DEFAULT_TOL) -> FrequencySet:
    """Frequencies eta, eta^(1), eta^(t) of ``gs``.

    ``nd`` is accepted for interface symmetry; the computation always uses
    the rescaled normalized polynomials of ``gs``.
    """
    return _frequencies_cached(gs, float(tol))


def leading_coeff_identity_residual(gs, nd=None, fs=None, tol=DEFAULT_TOL):
    """max_k |eta_k + A_{O^(k)}| / eta_k (0 for the empty set)."""
    if gs.n == 0:
        return 0.0
    nd = nd or solve_normalized_polys(gs, tol)
    fs = fs or frequencies(gs, tol=tol)
    A = nd.leading_O()
    return float(np.max(np.abs(fs.eta + A) / np.abs(fs.eta)))


def martin_value(gs: GapSet, nd, lam, tol=DEFAULT_TOL):
    """M(lam) = Im Theta(lam) for lam in a closed gap."""
    j = gs.gap_index(lam)
    if j is None:
        raise ValueError(f"lambda={lam} is not in a closed gap")
    nd = nd or solve_normalized_polys(gs, tol)
    a, b = gs.gap(j)
    if lam == a or lam == b:
        return 0.0

    def g(x):
        return nd.P(x) / np.sqrt(gs.abs_T_except(x, (a, b)))

    # Im Theta = Re(-i Theta), and -i/sqrt(T) = -sigma_j/|T|^{1/2} on gap j
    sigma = (-1.0) ** (j - 1) * gs.sqrt_sign
    return float(-0.5 * sigma * chebyshev_partial(g, a, b, a, lam, tol))


def poly_roots(p):
    """Real zeros of a :class:`NodalPoly`, Newton-refined on the nodal form."""
    return p.roots()


def interlacing_ok(gs, nd):
    """Zeros of P and Q alternate: 0 = q_0 < p_1 < q_1 < ... < p_n < q_n."""
    pz = poly_roots(nd.P)
    qz = poly_roots(nd.Q)
    merged = np.empty(2 * gs.n + 1)
    merged[0::2] = qz
    merged[1::2] = pz
    return bool(np.all(np.diff(merged) > 0))


def gap_zero_counts(gs, poly):
    """Number of real zeros of ``poly`` in each closed gap, and outside all gaps."""
    z = poly_roots(poly)
    counts = [int(np.sum((z >= a) & (z <= b))) for a, b in gs.gaps]
    return counts, len(z) - sum(counts)


def strict_inequality_sum(gs, nd):
    """sum_j T_1(c_j) / (P'(c_j) Q(c_j)) over the zeros c_j of P."""
    c = poly_roots(nd.P)
    return float(np.sum(gs.T1_poly(c) / (nd.P.derivative(c) * nd.Q(c))))
