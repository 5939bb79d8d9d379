"""
A compact, seeded property suite used by ``gapkit selftest``.

Every randomized check draws from one ``numpy.random.default_rng(seed)``
stream in a fixed order, so the report is a pure function of the seed.
Values are reported in ``%.3e`` form; no timings are recorded.
"""

from fractions import Fraction

import numpy as np

from .abel_map import Character, abel
from .abelian import interlacing_ok, leading_coeff_identity_residual, solve_normalized_polys, strict_inequality_sum
from .adic import avoidance_certificate, construct_avoiding_beta, crt_consistency, torus_sample
from .comb import band_edges, f_rho
from .curve import random_gapset
from .divisor import Divisor, random_divisor, ratio_identity_residual, weyl_pair
from .frequency_map import NewtonOptions, assemble_jacobian, fd_jacobian, frequency_vector, invert_frequencies, perturbed_seed
from .potapov import PotapovFactor, factor_matrix, point_mass_herglotz, trace_model, transform_pair
from .quadrature import DEFAULT_TOL


def _fmt(x):
    return f"{float(x):.3e}"


class _Report:
    def __init__(self):
        self.rows = []

    def add(self, name, value, bound, ok):
        self.rows.append({"name": name, "value": _fmt(value), "bound": _fmt(bound), "pass": bool(ok)})

    def upper(self, name, value, bound):
        self.add(name, value, bound, value <= bound)

    def lower(self, name, value, bound):
        self.add(name, value, bound, value > bound)


def run_selftest(seed=0, quad_tol=DEFAULT_TOL, depth=30):
    rng = np.random.default_rng(seed)
    rep = _Report()

    sets = [random_gapset(rng, int(rng.integers(1, 5))) for _ in range(5)]
    rep.upper("leading_coeff_identity", max(leading_coeff_identity_residual(g, tol=quad_tol) for g in sets), 1e-8)

    worst = 0.0
    for n in (1, 2):
        g = random_gapset(rng, n)
        J = fd_jacobian(g, tol=quad_tol)
        X = assemble_jacobian(g, tol=quad_tol).X
        worst = max(worst, float(np.max(np.abs(J + 0.5 * X) / np.abs(J))))
    rep.upper("jacobian_vs_fd", worst, 1e-5)

    worst = 0.0
    for n in (1, 2):
        g = random_gapset(rng, n)
        v = frequency_vector(g, quad_tol)
        res = invert_frequencies(v[:n], v[n:], perturbed_seed(g, rng), NewtonOptions(quad_tol=quad_tol))
        worst = max(worst, float(np.max(np.abs(np.concatenate([res.gapset.a - g.a, res.gapset.b - g.b])))))
    rep.upper("round_trip_endpoints", worst, 1e-7)

    ok = True
    margin = np.inf
    for _ in range(10):
        g = random_gapset(rng, int(rng.integers(1, 5)))
        nd = solve_normalized_polys(g, quad_tol)
        ok &= interlacing_ok(g, nd)
        margin = min(margin, strict_inequality_sum(g, nd) - 1.0)
    rep.add("interlacing", 0.0 if ok else 1.0, 0.0, ok)
    rep.lower("strict_inequality_margin", margin, 1e-10)

    g = random_gapset(rng, 2)
    D = random_divisor(rng, g)
    wp = weyl_pair(D)
    s = -np.array([0.5, 3.0, 40.0])
    rel = np.abs(wp.m_plus(s) + wp.m_minus(s) + 1.0 / wp.R(s))
    rep.upper("weyl_sum_identity", float(np.max(rel)), 1e-10)
    rep.upper("ratio_identity", ratio_identity_residual(random_divisor(rng, random_gapset(rng, 1)), tol=quad_tol), 1e-6)

    A = abel(D, quad_tol)
    rep.upper("abel_D0", max(abel(Divisor.D0(g), quad_tol).alpha), 0.0)
    zero = Character((0.0,) * g.n)
    rep.upper("abel_antisymmetry", (A + abel(D.antipodal(), quad_tol)).distance(zero), 1e-9)

    cm = band_edges(1.0, 50)
    k = np.arange(1, 51)
    rep.upper("comb_mu_plus", float(np.max(np.abs(f_rho(1.0, k) - (-1.0) ** k))), 1e-12)
    mu = rng.uniform(0.0, 20.0, 100)
    rep.upper("comb_trace_identity", float(np.max(np.abs(trace_model(1.0, mu) - f_rho(1.0, mu)))), 1e-14)
    rep.upper("comb_gap_asymptotic", abs((cm.mu_minus[-1] - 49.0) * np.pi * 49.0 / 2.0 - 1.0), 0.05)

    n1 = point_mass_herglotz([1.0], [2.0])
    z = -0.3
    r1, _ = transform_pair(n1, n1, PotapovFactor(0.4))
    r12, _ = transform_pair(r1, n1, PotapovFactor(0.6))
    r2, _ = transform_pair(n1, n1, PotapovFactor(1.0))
    rep.upper("potapov_additivity", abs(r12(z) - r2(z)), 1e-12)
    rep.upper("potapov_det", abs(np.linalg.det(factor_matrix(PotapovFactor(0.7, 0.3), 0.2 + 0.5j)) - 1.0), 1e-12)

    cert = avoidance_certificate(construct_avoiding_beta(depth), depth=depth)
    rep.add("adic_certificate", len(cert.failures), 0, cert.ok)
    bad = sum(crt_consistency(torus_sample(Fraction(int(rng.integers(1, 10**6)), int(rng.integers(1, 1000))), "1/k", 36)) for _ in range(20))
    rep.add("crt_consistency", bad, 0, bad == 0)

    return {"seed": int(seed), "checks": rep.rows, "passed": all(r["pass"] for r in rep.rows)}
