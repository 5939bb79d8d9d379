"""
The explicit comb model cos(pi Delta(mu)) = f(mu) = cos(pi mu) - rho mu sin(pi mu).

Spectrum in the mu variable is {|f| <= 1}. It consists of the bands
``[k, mu_{k+1}^-]`` (k >= 0) and the gaps ``(mu_k^-, k)``, where mu_k^- in
(k-1, k) is the root of ``f = (-1)^k``. The map z = 1/mu^2 sends these to
the spectral set with gaps ``(a_k, b_k) = (1/k^2, 1/(mu_k^-)^2)``. On the gap
``Delta = k + i*upsilon`` with ``cosh(pi upsilon) = |f|``, so the slit height
is ``upsilon_k = arccosh(max |f|) / pi``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .curve import GapSet
from .potential import widom_sum


def sincospi(mu):
    """(sin(pi mu), cos(pi mu)) with the argument reduced first, exact at integers."""
    mu = np.asarray(mu, dtype=float)
    m = np.round(mu)
    r = mu - m
    sign = 1.0 - 2.0 * np.mod(m, 2.0)
    return sign * np.sin(np.pi * r), sign * np.cos(np.pi * r)


def f_rho(rho, mu):
    mu = np.asarray(mu, dtype=float)
    s, c = sincospi(mu)
    return c - rho * mu * s


def _arccosh(x):
    x = max(float(x), 1.0 + 1e-15)
    return float(np.log(x + np.sqrt(x * x - 1.0)))


@dataclass(frozen=True)
class CombModel:
    rho: float
    K: int
    mu_minus: np.ndarray  # mu_k^-, k = 1..K
    mu_plus: np.ndarray  # k
    upsilon: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def rows(self):
        for k in range(self.K):
            yield (k + 1, self.mu_minus[k], self.mu_plus[k], self.upsilon[k], self.a[k], self.b[k])


def _mu_minus(rho, k):
    """Root of f = (-1)^k in (k-1, k), the lower end of gap k in mu."""
    target = (-1.0) ** k
    g = lambda m: float(f_rho(rho, m)) - target
    lo = k - 1.0
    # f(k-1) = -target, and g has the sign of target just left of k
    d = 0.5
    while np.sign(g(k - d)) != np.sign(target):
        d *= 0.5
        if d < 1e-15:
            raise RuntimeError(f"cannot bracket mu_{k}^- for rho={rho}")
    return brentq(g, lo, k - d, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def band_edges(rho, K) -> CombModel:
    if not rho > 0:
        raise ValueError("rho must be positive")
    if K < 1:
        raise ValueError("K must be >= 1")
    ks = np.arange(1, K + 1)
    mm = np.array([_mu_minus(rho, k) for k in ks])
    ups = np.empty(K)
    for i, k in enumerate(ks):
        res = minimize_scalar(
            lambda m: -abs(float(f_rho(rho, m))), bounds=(mm[i], float(k)), method="bounded", options={"xatol": 1e-12}
        )
        ups[i] = _arccosh(-res.fun) / np.pi
    return CombModel(rho, K, mm, ks.astype(float), ups, 1.0 / ks.astype(float) ** 2, 1.0 / mm**2)


def export_gapset(cm: CombModel, n) -> GapSet:
    """The n outermost gaps (a_k, b_k), k = 1..n, as a finite GapSet."""
    if n > cm.K:
        raise ValueError(f"n={n} exceeds K={cm.K}")
    return GapSet(tuple((float(cm.a[k]), float(cm.b[k])) for k in range(n)))


@dataclass(frozen=True)
class CombDiagnostics:
    S1: np.ndarray
    S2: np.ndarray
    log_terms: np.ndarray
    S2_increments: np.ndarray
    tail_constant: float
    increment_limit: float
    height_ratio: np.ndarray
    widom_proxy: float
    widom_gaps: int

    def to_json(self):
        return {
            "S1_final": float(self.S1[-1]),
            "S2_final": float(self.S2[-1]),
            "tail_constant_k2_log": self.tail_constant,
            "increment_last": float(self.S2_increments[-1]),
            "increment_limit_4_over_pi_rho": self.increment_limit,
            "pi_upsilon_over_log_last": float(self.height_ratio[-1]),
            "widom_proxy": self.widom_proxy,
            "widom_gaps": self.widom_gaps,
        }


def spectral_diagnostics(cm: CombModel, widom_gaps=4) -> CombDiagnostics:
    """Partial sums of log(a_k/b_{k+1}) and of 1/b_{k+1} - 1/a_k, with fitted limits.

    ``height_ratio`` is pi*upsilon_k / log((2k+1)rho), which tends to 1.
    """
    if cm.K < 10:
        raise ValueError("diagnostics need K >= 10")
    ks = np.arange(1, cm.K)
    logs = np.log(cm.a[:-1] / cm.b[1:])
    incr = 1.0 / cm.b[1:] - 1.0 / cm.a[:-1]
    tail = float(ks[-1] ** 2 * logs[-1])
    kk = np.arange(1, cm.K + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.pi * cm.upsilon / np.log((2 * kk + 1) * cm.rho)
    wg = min(widom_gaps, cm.K)
    wsum = widom_sum(export_gapset(cm, wg), -1.0) if wg > 0 else 0.0
    return CombDiagnostics(
        np.cumsum(logs), np.cumsum(incr), logs, incr, tail, 4.0 / (np.pi * cm.rho), ratio, wsum, wg
    )
