import numpy as np
import pytest
from hypothesis import given

from gapkit.abel_map import Character, abel, abel_continuity_modulus, abel_trajectory, circle_distance
from gapkit.adic import xi0_membership
from gapkit.comb import band_edges, export_gapset
from gapkit.divisor import Divisor
from gapkit.potential import harmonic_measure

from conftest import divisors


def test_d0_maps_to_origin(three_gap):
    A = abel(Divisor.D0(three_gap))
    assert A.alpha == (0.0, 0.0, 0.0)


def test_single_gap_left_endpoint(one_gap):
    A = abel(Divisor(one_gap, ((1.0, 1),)))
    assert A.alpha[0] == pytest.approx(0.5, abs=1e-12)


@given(divisors())
def test_antisymmetry(D):
    A = abel(D)
    As = abel(D.antipodal())
    assert (A + As).distance(Character((0.0,) * D.gs.n)) <= 1e-9
    assert As.close_to(-A, 1e-9)


def test_character_arithmetic():
    c = Character((0.75, -0.25, 1.5))
    assert c.alpha == (0.75, 0.75, 0.5)
    assert (c + c).alpha == (0.5, 0.5, 0.0)
    assert circle_distance(0.95) == pytest.approx(0.05)
    assert c.to_json() == {"alpha": [0.75, 0.75, 0.5]}


def test_sweep_endpoints(three_gap):
    gs = three_gap
    for j in range(1, gs.n + 1):
        a, b = gs.gap(j)
        traj = abel_trajectory(gs, j, [a, b])
        for k in range(1, gs.n + 1):
            w = harmonic_measure(gs, k, a) - harmonic_measure(gs, k, b)
            assert traj[0, k - 1] == pytest.approx(0.5 * w, abs=1e-12)
            assert traj[1, k - 1] == 0.0


def test_loop_closes(three_gap):
    a, b = three_gap.gap(2)
    up = abel_trajectory(three_gap, 2, np.linspace(a, b, 21), eps=1)
    down = abel_trajectory(three_gap, 2, np.linspace(b, a, 21), eps=-1)
    # the circle glues (a, +1) to (a, -1) and (b, +1) to (b, -1)
    assert np.max(circle_distance(up[-1] - down[0])) < 1e-12
    assert np.max(circle_distance(down[-1] - up[0])) < 1e-12


def test_continuity_modulus_bound(three_gap):
    gs = three_gap
    for j in range(1, gs.n + 1):
        a, b = gs.gap(j)
        grid = np.linspace(a, b, 41)
        mod = abel_continuity_modulus(gs, j, grid)
        incr = max(
            np.max(np.abs(np.diff([harmonic_measure(gs, k, x) for x in grid]))) for k in range(1, gs.n + 1)
        )
        assert mod <= 0.5 * incr + 1e-12


def test_sweep_monotonicity(three_gap):
    # A_j moves monotonically as lam_j sweeps gap j; A_k for k != j has a single turning point,
    # since omega(E_k, .) takes equal values at both ends of gap j
    gs = three_gap
    for j in range(1, gs.n + 1):
        a, b = gs.gap(j)
        traj = abel_trajectory(gs, j, np.linspace(a, b, 61)[1:-1])
        for k in range(1, gs.n + 1):
            d = np.diff(traj[:, k - 1])
            flips = np.sum(np.diff(np.sign(d)) != 0)
            assert flips == (0 if k == j else 1)


def test_finitely_supported_divisor_is_in_model_set():
    # outer gaps of the comb spectral set; lam_j at midpoints for j < 5 and b_j beyond
    gs = export_gapset(band_edges(1.0, 30), 24)
    entries = tuple(((0.5 * (a + b), 1) if j < 5 else (b, 1)) for j, (a, b) in enumerate(gs.gaps, start=1))
    A = abel(Divisor(gs, entries))
    v = xi0_membership(A.alpha, 0.1, 24)
    assert v.consistent
    generic = abel(Divisor(gs, tuple((0.5 * (a + b), 1) for a, b in gs.gaps)))
    assert not xi0_membership(generic.alpha, 0.1, 24).consistent
