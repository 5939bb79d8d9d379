"""
Quadrature for integrands with inverse square-root endpoint singularities.

All rules here go through the affine Chebyshev substitution

    lambda = m + h*cos(theta),   m = (p+q)/2,  h = (q-p)/2,

under which dlambda / sqrt((lambda-p)(q-lambda)) = -dtheta, so the
singular weight disappears and the remaining integrand is smooth in theta.
Full segments use Gauss-Chebyshev (the midpoint rule in theta) with node
doubling; partial segments use Gauss-Legendre in theta. Convergence is
judged by a mixed test, absolute for values below 1 and relative above.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_TOL = 1e-11
MIN_NODES = 8
MAX_NODES = 4096


class QuadratureError(RuntimeError):
    """Raised when a rule fails to converge; carries the achieved estimate."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class SingularIntegrand:
    """``g(lambda) / sqrt((lambda-p)(q-lambda))`` on ``[p, q]``.

    ``g`` must accept numpy arrays. ``ends`` selects which endpoints carry
    the inverse square-root: ``"both"``, ``"left"`` or ``"right"``. For the
    single-endpoint variants the integrand is ``g/sqrt(lambda-p)`` or
    ``g/sqrt(q-lambda)``.
    """

    g: Callable
    p: float
    q: float
    ends: str = "both"


def _max_abs(x):
    return float(np.max(np.abs(x))) if np.ndim(x) else abs(x)


def _converged(cur, prev, tol):
    """Mixed test: |cur - prev| <= tol * max(1, |cur|), worst component."""
    return _max_abs(cur - prev) <= tol * max(1.0, _max_abs(cur))


def _chebyshev_sum(g, p, q, m):
    theta = (np.arange(m) + 0.5) * np.pi / m
    lam = 0.5 * (p + q) + 0.5 * (q - p) * np.cos(theta)
    vals = np.asarray(g(lam))
    return (np.pi / m) * vals.sum(axis=0)


def chebyshev_integral(g, p, q, tol=DEFAULT_TOL):
    """``int_p^q g(lam)/sqrt((lam-p)(q-lam)) dlam`` for smooth ``g``.

    ``g`` may be vector valued: if ``g(lam)`` has shape ``(m, k)`` the
    result has shape ``(k,)`` and convergence is judged on the worst
    component.
    """
    if not q > p:
        raise ValueError(f"empty segment [{p}, {q}]")
    m = MIN_NODES
    prev = _chebyshev_sum(g, p, q, m)
    while m < MAX_NODES:
        m *= 2
        cur = _chebyshev_sum(g, p, q, m)
        err = _max_abs(cur - prev)
        if _converged(cur, prev, tol):
            return cur
        prev = cur
    raise QuadratureError(
        f"Gauss-Chebyshev did not converge on [{p}, {q}] with {MAX_NODES} nodes",
        estimate=prev,
        error=err,
    )


def chebyshev_nodes_value(g, p, q, m):
    """Plain m-node Gauss-Chebyshev value (no refinement)."""
    return _chebyshev_sum(g, p, q, m)


def _theta_of(x, p, q):
    """theta with x = m + h cos(theta), via half angles so both ends are exact:
    q - x = (q-p) sin^2(theta/2) and x - p = (q-p) cos^2(theta/2)."""
    L = q - p
    if x - p <= q - x:
        return float(np.pi - 2.0 * np.arcsin(np.sqrt(max(x - p, 0.0) / L)))
    return float(2.0 * np.arcsin(np.sqrt(max(q - x, 0.0) / L)))


def _legendre_theta(u, t0, t1, tol):
    """Adaptive-in-order Gauss-Legendre for ``int_{t0}^{t1} u(theta) dtheta``."""
    if t1 == t0:
        return 0.0
    m = MIN_NODES
    prev = None
    while m <= MAX_NODES:
        x, w = np.polynomial.legendre.leggauss(m)
        th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * x
        vals = np.asarray(u(th))
        w = w.reshape((-1,) + (1,) * (vals.ndim - 1))
        cur = 0.5 * (t1 - t0) * (w * vals).sum(axis=0)
        if prev is not None and _converged(cur, prev, tol):
            return cur
        prev = cur
        m *= 2
    raise QuadratureError(
        f"Gauss-Legendre in theta did not converge on [{t0}, {t1}]", estimate=prev
    )


def chebyshev_partial(g, p, q, x0, x1, tol=DEFAULT_TOL):
    """``int_{x0}^{x1} g(lam)/sqrt((lam-p)(q-lam)) dlam`` with p <= x0, x1 <= q.

    Orientation is respected (the result changes sign if x0 > x1).
    """
    h = 0.5 * (q - p)
    m = 0.5 * (p + q)
    t0 = _theta_of(x0, p, q)
    t1 = _theta_of(x1, p, q)

    def u(th):
        return g(m + h * np.cos(th))

    # dlam/sqrt(...) = -dtheta, so int_{x0}^{x1} = int_{t1}^{t0} in theta
    return _legendre_theta(u, t1, t0, tol)


def _log_kernel(th, th0):
    return np.log(np.abs(np.sin(0.5 * (th - th0)) / np.sin(0.5 * (th + th0))))


def chebyshev_pole(g, p, q, lam0, x0=None, x1=None, tol=DEFAULT_TOL):
    """Integral of ``g(lam)/((lam-lam0) sqrt((lam-p)(q-lam)))`` over [x0, x1].

    Defaults to the full segment. If ``lam0`` lies inside the range the
    Cauchy principal value is returned. The pole part is removed by the
    divided difference ``(g(lam)-g(lam0))/(lam-lam0)`` and the remaining
    kernel ``1/(h(cos theta - cos theta0))`` is integrated in closed form;
    over the full segment that kernel has principal value zero.
    """
    full = x0 is None and x1 is None
    x0 = p if x0 is None else x0
    x1 = q if x1 is None else x1
    if not (p < lam0 < q):
        # pole outside the open segment: integrand is regular up to the weight
        def gr(lam):
            vals = np.asarray(g(lam))
            d = lam - lam0
            return vals / (d[:, None] if vals.ndim > 1 else d)

        if full:
            return chebyshev_integral(gr, p, q, tol)
        return chebyshev_partial(gr, p, q, x0, x1, tol)

    h = 0.5 * (q - p)
    g0 = np.asarray(g(np.array([lam0])))[0]
    eps = 1e-5 * h
    dg0 = (np.asarray(g(np.array([lam0 + eps])))[0] - np.asarray(g(np.array([lam0 - eps])))[0]) / (2 * eps)

    def dd(lam):
        lam = np.asarray(lam, dtype=float)
        d = lam - lam0
        vals = np.asarray(g(lam))
        near = np.abs(d) < 1e-7 * h
        dsafe = np.where(near, 1.0, d)
        if vals.ndim > 1:
            out = (vals - g0) / dsafe[:, None]
            out[near] = dg0
        else:
            out = (vals - g0) / dsafe
            out = np.where(near, dg0, out)
        return out

    th0 = _theta_of(lam0, p, q)
    if full:
        return chebyshev_integral(dd, p, q, tol)
    reg = chebyshev_partial(dd, p, q, x0, x1, tol)
    ta = _theta_of(x1, p, q)
    tb = _theta_of(x0, p, q)
    # int_{ta}^{tb} dtheta / (h (cos theta - cos th0))
    kern = -(_log_kernel(tb, th0) - _log_kernel(ta, th0)) / (h * np.sin(th0))
    return reg + g0 * kern


def half_line_integral(g, x, tol=DEFAULT_TOL):
    """``int_x^0 g(lam)/sqrt(-lam) dlam`` for x < 0 and smooth ``g``.

    With lam = -t^2 this is ``int_0^sqrt(-x) 2 g(-t^2) dt``; long ranges are
    split into geometric panels.
    """
    if x >= 0:
        return 0.0
    tmax = np.sqrt(-x)
    edges = [0.0]
    step = 1.0
    while edges[-1] < tmax:
        edges.append(min(tmax, edges[-1] + step))
        step *= 2.0
    total = 0.0
    for t0, t1 in zip(edges[:-1], edges[1:]):
        total = total + _legendre_theta(lambda t: 2.0 * g(-t * t), t0, t1, tol)
    return total


def tail_integral(f, x, tol=DEFAULT_TOL):
    """``int_{-inf}^{x} f(lam) dlam`` for x < 0 and f = O(|lam|^{-3/2}).

    Uses lam = x/u^2 which maps the tail to u in (0, 1] with a smooth
    integrand when f has an expansion in powers of 1/lam times |lam|^{-1/2}.
    """
    if x >= 0:
        raise ValueError("tail_integral needs x < 0")

    def u_int(u):
        lam = x / (u * u)
        return f(lam) * (-2.0 * x) / (u ** 3)

    return _legendre_theta(u_int, 0.0, 1.0, tol)


def quad_singular(ing: SingularIntegrand, tol=DEFAULT_TOL):
    """Integrate a :class:`SingularIntegrand`; ``tol`` is absolute below 1 and relative above."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    p, q, g = ing.p, ing.q, ing.g
    if ing.ends == "both":
        return chebyshev_integral(g, p, q, tol)
    # one endpoint: lam = p + L u^2 (or q - L u^2) gives the smooth integrand 2 sqrt(L) g
    L = q - p
    if ing.ends == "left":
        return _legendre_theta(lambda u: 2.0 * np.sqrt(L) * g(p + L * u * u), 0.0, 1.0, tol)
    if ing.ends == "right":
        return _legendre_theta(lambda u: 2.0 * np.sqrt(L) * g(q - L * u * u), 0.0, 1.0, tol)
    raise ValueError(f"unknown ends={ing.ends!r}")
