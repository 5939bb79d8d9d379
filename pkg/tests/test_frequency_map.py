import numpy as np
import pytest
from hypothesis import given, settings

from gapkit.abelian import solve_normalized_polys, strict_inequality_sum
from gapkit.curve import GapSet, random_gapset
from gapkit.frequency_map import (
    NewtonError,
    NewtonOptions,
    assemble_jacobian,
    fd_jacobian,
    frequency_vector,
    invert_frequencies,
    perturbed_seed,
)

from conftest import gapsets


def _rel_err(gs):
    J = fd_jacobian(gs, h=1e-6)
    X = assemble_jacobian(gs).X
    return np.abs(J + 0.5 * X) / np.abs(J)


def test_one_gap_entries(one_gap):
    err = _rel_err(one_gap)
    assert err[0, 0] <= 1e-5  # eta row, a_1
    assert err[0, 1] <= 1e-5  # eta row, b_1
    assert np.all(err <= 1e-5)


@settings(max_examples=6)
@given(gapsets(n_max=4))
def test_jacobian_matches_finite_differences(gs):
    assert np.max(_rel_err(gs)) <= 1e-5


def test_jacobian_invertible(rng):
    for _ in range(5):
        vm = assemble_jacobian(random_gapset(rng, 3))
        assert abs(vm.det) > 0 and np.isfinite(vm.cond)


def test_q_variant_agrees_on_zero_eta_velocity(three_gap):
    # velocities with eta' = 0 are mapped identically by the Q and Qt time rows
    n = three_gap.n
    Xt = assemble_jacobian(three_gap).X
    Xq = assemble_jacobian(three_gap, time_poly="Q").X
    _, _, vt = np.linalg.svd(Xt[:n])
    null = vt[n:].T
    assert np.allclose(Xt[n:] @ null, Xq[n:] @ null, atol=1e-10 * np.abs(Xt).max())
    with pytest.raises(ValueError):
        assemble_jacobian(three_gap, time_poly="P")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_round_trip(n):
    rng = np.random.default_rng(100 + n)
    gs = random_gapset(rng, n)
    v = frequency_vector(gs)
    res = invert_frequencies(v[:n], v[n:], perturbed_seed(gs, rng))
    assert res.iterations <= 15
    assert np.max(np.abs(np.concatenate([res.gapset.a - gs.a, res.gapset.b - gs.b]))) < 1e-7


def test_quadratic_convergence():
    rng = np.random.default_rng(11)
    gs = random_gapset(rng, 2)
    v = frequency_vector(gs)
    res = invert_frequencies(v[:2], v[2:], perturbed_seed(gs, rng), NewtonOptions(tol=1e-12, polish=False))
    r = np.array([h[1] for h in res.history])
    small = [(r[i], r[i + 1]) for i in range(len(r) - 1) if 1e-11 < r[i + 1] and r[i] <= 1e-3]
    assert small, "no iterate in the quadratic regime"
    assert all(b <= 50.0 * a * a for a, b in small)


def test_targets_at_seed(three_gap):
    v = frequency_vector(three_gap)
    res = invert_frequencies(v[:3], v[3:], three_gap)
    assert res.iterations <= 1
    assert np.allclose(res.gapset.a, three_gap.a, atol=1e-12)


@pytest.mark.parametrize("time_poly", ["Qt", "Q"])
def test_zero_eta_velocity(three_gap, time_poly):
    n = three_gap.n
    v = frequency_vector(three_gap)
    etat = v[n:].copy()
    etat[1] *= 1.01
    res = invert_frequencies(v[:n], etat, three_gap, NewtonOptions(time_poly=time_poly))
    w = frequency_vector(res.gapset)
    assert np.max(np.abs(w[:n] - v[:n])) <= 1e-8
    assert abs(w[n + 1] - etat[1]) <= 1e-8
    nd = solve_normalized_polys(res.gapset)
    assert strict_inequality_sum(res.gapset, nd) > 1.0


def test_unreachable_targets(one_gap):
    v = frequency_vector(one_gap)
    with pytest.raises(NewtonError) as info:
        invert_frequencies(-v[:1], v[1:], one_gap)
    assert info.value.best is not None and info.value.residual > 0


def test_bad_target_length(one_gap):
    with pytest.raises(ValueError):
        invert_frequencies([1.0, 2.0], [1.0], one_gap)
    with pytest.raises(ValueError):
        invert_frequencies([np.nan], [1.0], one_gap)
