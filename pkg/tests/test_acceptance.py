"""
The twelve acceptance criteria at their stated tolerances.

Each criterion test records one PASS/FAIL line (listed again in the terminal
summary). Two sub-checks cannot be met as stated; they run as strict xfail
tests of their own and the criterion line reports them as FAIL.
"""

import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from gapkit.abel_map import Character, abel
from gapkit.abelian import (
    interlacing_ok,
    leading_coeff_identity_residual,
    martin_value,
    solve_normalized_polys,
    strict_inequality_sum,
)
from gapkit.adic import avoidance_certificate, construct_avoiding_beta, crt_consistency, torus_sample
from gapkit.comb import band_edges, f_rho, spectral_diagnostics
from gapkit.curve import GapSet, random_gapset
from gapkit.divisor import (
    Divisor,
    canonical_product_neg_axis,
    random_divisor,
    ratio_identity_residual,
    trace_data,
    weyl_pair,
)
from gapkit.frequency_map import (
    assemble_jacobian,
    fd_jacobian,
    frequency_vector,
    invert_frequencies,
    perturbed_seed,
)
from gapkit.potapov import (
    PotapovFactor,
    point_mass_herglotz,
    trace_model,
    transform_chain,
    transform_pair,
    two_term_expansion,
)
from gapkit.potential import green_asymptotic_ratio

from conftest import record_criterion

pytestmark = pytest.mark.acceptance


def _divisor_instances(seed, count, n_max=3):
    rng = np.random.default_rng(seed)
    return [random_divisor(rng, random_gapset(rng, int(rng.integers(1, n_max + 1)))) for _ in range(count)]


def test_criterion_01_leading_coefficient_identity():
    rng = np.random.default_rng(101)
    sets = [random_gapset(rng, n) for n in (1, 2, 3, 4) for _ in range(5)]
    t0 = time.perf_counter()
    worst = max(leading_coeff_identity_residual(g) for g in sets)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed <= 10.0
    record_criterion(1, ok, f"leading-coefficient identity: worst rel {worst:.1e} on 20 sets, {elapsed:.1f} s")
    assert ok


def test_criterion_02_jacobian_against_finite_differences():
    rng = np.random.default_rng(102)
    t0 = time.perf_counter()
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(2):
            g = random_gapset(rng, n)
            J = fd_jacobian(g, h=1e-6)
            X = assemble_jacobian(g).X
            worst = max(worst, float(np.max(np.abs(J + 0.5 * X) / np.abs(J))))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-5 and elapsed <= 60.0
    record_criterion(2, ok, f"Jacobian vs central differences: worst rel {worst:.1e}, {elapsed:.1f} s")
    assert ok


def test_criterion_03_inversion_round_trip():
    rng = np.random.default_rng(103)
    err = 0.0
    iters = 0
    for i in range(10):
        g = random_gapset(rng, 1 + i % 4)
        v = frequency_vector(g)
        res = invert_frequencies(v[: g.n], v[g.n :], perturbed_seed(g, rng, rel=0.05))
        err = max(err, float(np.max(np.abs(np.concatenate([res.gapset.a - g.a, res.gapset.b - g.b])))))
        iters = max(iters, res.iterations)

    g = GapSet(((6.0, 6.7), (3.0, 4.5), (1.0, 2.0)))
    n = g.n
    v = frequency_vector(g)
    etat = v[n:].copy()
    etat[1] *= 1.01
    res = invert_frequencies(v[:n], etat, g)
    w = frequency_vector(res.gapset)
    eta_drift = float(np.max(np.abs(w[:n] - v[:n])))
    etat_err = abs(w[n + 1] - etat[1])

    ok = err <= 1e-7 and iters <= 15 and eta_drift <= 1e-8 and etat_err <= 1e-8
    record_criterion(
        3, ok,
        f"round trip: max endpoint error {err:.1e}, max {iters} iterations; "
        f"etat +1%: eta drift {eta_drift:.1e}",
    )
    assert ok


def test_criterion_04_interlacing_and_strict_inequality():
    rng = np.random.default_rng(104)
    all_interlace = True
    margin = np.inf
    for _ in range(50):
        g = random_gapset(rng, int(rng.integers(1, 5)))
        nd = solve_normalized_polys(g)
        all_interlace &= interlacing_ok(g, nd)
        margin = min(margin, strict_inequality_sum(g, nd) - 1.0)
    ok = bool(all_interlace) and margin > 1e-10
    record_criterion(4, ok, f"interlacing on 50 sets: {bool(all_interlace)}; min sum - 1 = {margin:.3e}")
    assert ok


def test_criterion_05_weyl_identities():
    Ds = _divisor_instances(105, 5)
    s = np.logspace(-3, 4, 30)
    weyl = 0.0
    for D in Ds:
        wp = weyl_pair(D)
        z = -s
        weyl = max(weyl, float(np.max(np.abs(wp.m_plus(z) + wp.m_minus(z) + 1.0 / wp.R(z)))))

    D = Ds[0]
    wp = weyl_pair(D)
    pts = []
    j = 1
    while len(pts) < 10:
        lo, hi = D.gs.band(j) if j <= D.gs.n else (D.gs.a[0], D.gs.a[0] + 5.0)
        pts += list(np.linspace(lo, hi, 5)[1:-1])
        j += 1
    decreasing = True
    for x in pts[:10]:
        d = [abs((wp.m_plus(x + 1j * e) + np.conj(wp.m_minus(x + 1j * e))).real) for e in (1e-2, 1e-4, 1e-6)]
        decreasing &= d[0] > d[1] > d[2]

    slope = 0.0
    for D in Ds:
        Q1 = trace_data(D).Q1
        z = -1e4
        fit = (2.0 * np.sqrt(-z) * weyl_pair(D).R(z).real - 1.0) * z
        slope = max(slope, abs(fit - Q1) / abs(Q1))

    ok = weyl < 1e-10 and bool(decreasing) and slope <= 0.01
    record_criterion(
        5, ok,
        f"Weyl sum {weyl:.1e}; defect decreasing at 10 band points: {bool(decreasing)}; "
        f"Q1 slope fit rel {slope:.1e}",
    )
    assert ok


def _literal_q2(D, s=1e4):
    return np.sqrt(s) * (1.0 - canonical_product_neg_axis(D, s))


def _criterion_06_literal():
    errs = []
    for D in _divisor_instances(106, 10):
        Q2 = trace_data(D).Q2
        errs.append(abs(_literal_q2(D) - Q2) / abs(Q2))
    return np.array(errs)


def test_criterion_06_canonical_product_and_green_asymptotics():
    literal = _criterion_06_literal()
    extrap = 0.0
    for D in _divisor_instances(106, 10):
        Q2 = trace_data(D).Q2
        est = 2.0 * _literal_q2(D, 4e4) - _literal_q2(D, 1e4)
        extrap = max(extrap, abs(est - Q2) / abs(Q2))

    rng = np.random.default_rng(1066)
    green = 0.0
    for _ in range(5):
        g = random_gapset(rng, int(rng.integers(1, 4)))
        j = int(rng.integers(1, g.n + 1))
        a, b = g.gap(j)
        lam0 = a + rng.uniform(0.2, 0.8) * (b - a)
        M = martin_value(g, None, lam0)
        green = max(green, abs(green_asymptotic_ratio(g, lam0, 1e4) - M) / M)

    passed = int(np.sum(literal <= 0.02))
    ok = passed == len(literal) and extrap <= 0.02 and green <= 0.02
    record_criterion(
        6, ok,
        f"sqrt(s)(1-L) at s=1e4 within 2% on {passed}/{len(literal)} (worst {literal.max():.1%}); "
        f"extrapolated worst {extrap:.2%}; Green ratio worst {green:.2%}",
    )
    assert extrap <= 0.02 and green <= 0.02


@pytest.mark.xfail(strict=True, reason="O(1/sqrt(s)) correction exceeds 2% when |Q2| is small")
def test_criterion_06_literal_at_1e4():
    assert np.all(_criterion_06_literal() <= 0.02)


def test_criterion_07_ratio_identity():
    rng = np.random.default_rng(107)
    worst = 0.0
    for n in (1, 2):
        for _ in range(4):
            worst = max(worst, ratio_identity_residual(random_divisor(rng, random_gapset(rng, n))))
    ok = worst <= 1e-6
    record_criterion(7, ok, f"ratio identity on 1- and 2-gap sets, s in {{1,10,100}}: worst {worst:.1e}")
    assert ok


def test_criterion_08_abel_map():
    g = GapSet(((6.0, 6.7), (3.0, 4.5), (1.0, 2.0)))
    zero_exact = abel(Divisor.D0(g)).alpha == (0.0,) * g.n
    anti = 0.0
    for D in _divisor_instances(108, 8):
        A = abel(D) + abel(D.antipodal())
        anti = max(anti, A.distance(Character((0.0,) * D.gs.n)))
    endpoint = abel(Divisor(GapSet(((1.0, 2.0),)), ((1.0, 1),))).alpha[0]
    ok = zero_exact and anti <= 1e-9 and abs(endpoint - 0.5) <= 1e-12
    record_criterion(8, ok, f"A(D0) == 0: {zero_exact}; antisymmetry {anti:.1e}; endpoint value {endpoint:.15f}")
    assert ok


def _upsilon_literal_ratio():
    cm = band_edges(1.0, 200)
    return cm.upsilon[199] / np.log((2 * 200 + 1) * 1.0)


def test_criterion_09_comb_model():
    rho = 1.0
    cm = band_edges(rho, 201)
    k = np.arange(1, 202)
    mu_plus_exact = bool(np.all(cm.mu_plus == k))
    gap = (cm.mu_minus[200] - 200.0) * np.pi * rho * 200 / 2.0
    scaled = spectral_diagnostics(band_edges(rho, 200)).height_ratio[-1]
    literal = _upsilon_literal_ratio()
    mu = np.random.default_rng(109).uniform(0.0, 20.0, 100)
    trace = float(np.max(np.abs(trace_model(rho, mu) - f_rho(rho, mu))))
    attainable = mu_plus_exact and abs(gap - 1.0) <= 0.05 and trace <= 1e-14 and abs(scaled - 1.0) <= 0.05
    ok = attainable and abs(literal - 1.0) <= 0.05
    record_criterion(
        9, ok,
        f"mu+ = k exact: {mu_plus_exact}; gap scaling {gap:.5f}; upsilon/log {literal:.4f} "
        f"(pi*upsilon/log {scaled:.4f}); trace {trace:.1e}",
    )
    assert attainable


@pytest.mark.xfail(strict=True, reason="upsilon_k/log((2k+1)rho) tends to 1/pi, not 1")
def test_criterion_09_upsilon_literal():
    assert abs(_upsilon_literal_ratio() - 1.0) <= 0.05


def test_criterion_10_potapov_ledger():
    n = point_mass_herglotz([1.0, 0.3], [2.0, 0.5])
    r12 = transform_chain(n, n, [PotapovFactor(0.4), PotapovFactor(0.35)])
    r = transform_pair(n, n, PotapovFactor(0.75))
    add = max(abs(r12[i](z) - r[i](z)) for i in (0, 1) for z in (-0.3, -0.01, 0.5j, 2.0 + 1j))

    m = point_mass_herglotz([1.0, 2.0], [1.5, 4.0])
    sigma = two_term_expansion(m).sigma
    slope = 0.0
    for rho in (0.25 / sigma, 0.5 / sigma, 0.9 / sigma):
        got = two_term_expansion(transform_pair(m, m, PotapovFactor(rho))[0])
        slope = max(slope, abs(got.sigma * (1.0 / sigma - rho) - 1.0))

    q = point_mass_herglotz([1.0, 0.5], [2.0, 3.0])
    general = 0.0
    for phi in (0.2, 0.7, 1.2, 2.5):
        got = two_term_expansion(transform_pair(q, q, PotapovFactor(0.7, phi), inverse=True)[0])
        general = max(
            general,
            abs(got.w / -np.tan(phi) - 1.0),
            abs(got.sigma * 0.7 * np.cos(phi) ** 2 - 1.0),
        )
    ok = add <= 1e-12 and slope <= 0.01 and general <= 0.01
    record_criterion(10, ok, f"additivity {add:.1e}; slope transfer rel {slope:.1e}; general phi rel {general:.1e}")
    assert ok


def test_criterion_11_adic_avoidance():
    t0 = time.perf_counter()
    cert = avoidance_certificate(construct_avoiding_beta(30), depth=30)
    rng = np.random.default_rng(111)
    bad = 0
    for _ in range(100):
        x = Fraction(int(rng.integers(1, 10**9)), int(rng.integers(1, 10**4)))
        bad += crt_consistency(torus_sample(x, "1/k", 30), 30)
    elapsed = time.perf_counter() - t0
    ok = cert.ok and bad == 0 and elapsed <= 30.0
    record_criterion(
        11, ok,
        f"depth-30 certificate ok: {cert.ok} ({len(cert.failures)} failures); CRT violations {bad}; {elapsed:.1f} s",
    )
    assert ok


def test_criterion_12_selftest_determinism():
    cmd = [sys.executable, "-m", "gapkit", "selftest", "--seed", "7"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    ok = same and runs[0].returncode == 0
    record_criterion(12, ok, f"selftest --seed 7 byte-identical: {same}; exit code {runs[0].returncode}")
    assert ok
