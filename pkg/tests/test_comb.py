import numpy as np
import pytest
from scipy.optimize import brentq

from gapkit.abelian import frequencies
from gapkit.comb import band_edges, export_gapset, f_rho, sincospi, spectral_diagnostics


@pytest.fixture(scope="module")
def comb200():
    return band_edges(1.0, 200)


def test_band_edges_at_integers(comb200):
    k = np.arange(1, 201)
    assert np.all(f_rho(1.0, k) == (-1.0) ** k)
    assert np.all(comb200.mu_plus == k)


def test_sincospi_exact_at_integers_and_halves():
    s, c = sincospi(np.array([0.0, 0.5, 1.0, 1.5, 7.0, -3.0]))
    assert np.all(s == [0.0, 1.0, 0.0, -1.0, 0.0, 0.0])
    assert np.all(c[[0, 2, 4, 5]] == [1.0, -1.0, -1.0, -1.0])


def test_ordering(comb200):
    cm = comb200
    k = np.arange(1, 201)
    assert np.all((k - 1 < cm.mu_minus) & (cm.mu_minus < k))
    assert np.all(cm.upsilon > 0)
    gs = export_gapset(cm, 200)
    assert gs.n == 200


def test_first_gap_oracle():
    # mu_1^- solves cos(pi mu) - mu sin(pi mu) = -1 in (0, 1)
    mu = brentq(lambda m: np.cos(np.pi * m) - m * np.sin(np.pi * m) + 1.0, 0.1, 0.99, xtol=1e-15)
    gs = export_gapset(band_edges(1.0, 3), 1)
    assert gs.gaps[0][0] == 1.0
    assert gs.gaps[0][1] == pytest.approx(1.0 / mu**2, rel=1e-13)


def test_gap_width_example():
    cm = band_edges(1.0, 10)
    w = cm.mu_minus[5] - 5.0  # mu_6^- - 5
    assert w == pytest.approx(2.0 / (5.0 * np.pi), rel=0.15)


def test_gap_width_trend(comb200):
    k = np.array([10, 50, 100, 199])
    dev = np.abs((comb200.mu_minus[k] - k) * np.pi * k / 2.0 - 1.0)
    assert np.all(np.diff(dev) < 0)
    assert dev[-1] < 1e-3


def test_height_trend(comb200):
    d = spectral_diagnostics(comb200)
    r = d.height_ratio[[49, 99, 199]]
    assert np.all(np.diff(r) > 0)
    assert np.all(np.abs(r - 1.0) < 0.05)


def test_spectrum_indicator(comb200):
    cm = comb200
    rng = np.random.default_rng(0)
    mu = rng.uniform(0.0, 30.0, 1000)
    k = np.ceil(mu).astype(int)
    in_gap = mu > cm.mu_minus[k - 1]
    f = np.abs(f_rho(1.0, mu))
    assert np.all(f[~in_gap] <= 1.0 + 1e-12)
    assert np.all(f[in_gap] >= 1.0 - 1e-12)


def test_rho_monotonicity():
    models = [band_edges(rho, 30) for rho in (0.5, 1.0, 2.0)]
    k = np.arange(1, 30)
    ups = np.array([m.upsilon for m in models])
    widths = np.array([m.mu_minus[1:] - k for m in models])
    assert np.all(np.diff(ups, axis=0) > 0)
    assert np.all(np.diff(widths, axis=0) < 0)


def test_truncation_stability(comb200):
    cm = band_edges(1.0, 100)
    assert np.max(np.abs(cm.mu_minus - comb200.mu_minus[:100])) <= 1e-12
    assert np.max(np.abs(cm.upsilon - comb200.upsilon[:100])) <= 1e-12


def test_diagnostics():
    d1 = spectral_diagnostics(band_edges(1.0, 101))
    assert d1.S2_increments[99] == pytest.approx(4.0 / np.pi, rel=0.1)
    d2 = spectral_diagnostics(band_edges(2.0, 101))
    assert d2.S2_increments[99] == pytest.approx(0.5 * d1.S2_increments[99], rel=0.02)
    # log(a_k / b_{k+1}) ~ 4/(pi rho k^2): the partial sums are Cauchy at rate 1/K
    S1 = d1.S1
    for K in (10, 25, 50):
        assert abs(S1[2 * K - 1] - S1[K - 1]) <= 4.0 / (np.pi * K)
    assert d1.tail_constant == pytest.approx(4.0 / np.pi, rel=0.05)
    assert d1.widom_proxy > 0
    with pytest.raises(ValueError):
        spectral_diagnostics(band_edges(1.0, 5))


def test_export_feeds_frequencies():
    fs = frequencies(export_gapset(band_edges(1.0, 10), 6))
    assert np.all(fs.eta > 0) and np.all(np.diff(fs.eta) < 0)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        band_edges(0.0, 10)
    with pytest.raises(ValueError):
        band_edges(1.0, 0)
    with pytest.raises(ValueError):
        export_gapset(band_edges(1.0, 3), 4)
