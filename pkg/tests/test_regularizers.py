import numpy as np
import pytest
from scipy import optimize

from django_ogs_deblur.regularizers import (
    GroupConfig,
    MMConfig,
    mm_objective,
    mm_weights,
    ogs_prox,
    ogs_value,
)


def naive_energy(v, K, eps):
    rows, cols = v.shape
    lo, hi = (K - 1) // 2, K // 2
    energy = np.empty_like(v)
    for r in range(rows):
        for c in range(cols):
            total = eps
            for k1 in range(-lo, hi + 1):
                for k2 in range(-lo, hi + 1):
                    total += v[(r + k1) % rows, (c + k2) % cols] ** 2
            energy[r, c] = total
    return energy


def naive_weights(v, K, eps):
    rows, cols = v.shape
    lo, hi = (K - 1) // 2, K // 2
    energy = naive_energy(v, K, eps)
    d = np.zeros_like(v)
    for i in range(rows):
        for j in range(cols):
            for a in range(-lo, hi + 1):
                for b in range(-lo, hi + 1):
                    d[i, j] += energy[(i - a) % rows, (j - b) % cols] ** -0.5
    return d


def smoothed_objective(x, v0, gamma, K, eps):
    """Objective and gradient written out group by group."""
    x = x.reshape(v0.shape)
    rows, cols = v0.shape
    lo, hi = (K - 1) // 2, K // 2
    value = 0.5 * np.sum((x - v0) ** 2)
    grad = x - v0
    for r in range(rows):
        for c in range(cols):
            members = [
                ((r + k1) % rows, (c + k2) % cols)
                for k1 in range(-lo, hi + 1)
                for k2 in range(-lo, hi + 1)
            ]
            norm = np.sqrt(eps + sum(x[m] ** 2 for m in members))
            value += gamma * norm
            for m in members:
                grad[m] += gamma * x[m] / norm
    return value, grad.ravel()


def l1_objective(x, v0, gamma):
    return 0.5 * np.sum((x - v0) ** 2) + gamma * np.sum(np.abs(x))


def test_group_extent():
    for K in range(1, 8):
        cfg = GroupConfig(K=K)
        assert cfg.K_l + cfg.K_r + 1 == K
    assert (GroupConfig(K=3).K_l, GroupConfig(K=3).K_r) == (1, 1)
    assert (GroupConfig(K=2).K_l, GroupConfig(K=2).K_r) == (0, 1)
    with pytest.raises(ValueError):
        GroupConfig(K=0)


def test_mm_config_validation():
    with pytest.raises(ValueError):
        MMConfig(gamma_prox=0.0)
    with pytest.raises(ValueError):
        MMConfig(tol=0.0)
    with pytest.raises(ValueError):
        MMConfig(max_iter=0)


def test_ogs_value_of_zero():
    assert ogs_value(np.zeros((5, 5)), GroupConfig(K=3)) == 0.0


def test_ogs_value_with_single_pixel_groups_is_l1():
    v = np.random.default_rng(3).standard_normal((6, 7))
    assert ogs_value(v, GroupConfig(K=1)) == pytest.approx(np.abs(v).sum(), rel=1e-12)


def test_ogs_value_counts_every_overlapping_group():
    v = np.zeros((6, 6))
    v[2, 4] = -1.5
    assert ogs_value(v, GroupConfig(K=3)) == pytest.approx(9 * 1.5, rel=1e-12)


def test_mm_weights_single_pixel_constant():
    d = mm_weights(np.full((4, 4), -0.8), GroupConfig(K=1))
    np.testing.assert_allclose(d, 1.0 / 0.8, rtol=1e-9)


def test_mm_weights_of_zero_field():
    d = mm_weights(np.zeros((5, 5)), GroupConfig(K=3, eps_group=1e-10))
    np.testing.assert_allclose(d, 9 * (1e-10) ** -0.5, rtol=1e-12)


@pytest.mark.parametrize("K", [2, 3, 4])
def test_mm_weights_match_nested_loops(K):
    v = np.random.default_rng(K).standard_normal((5, 5))
    cfg = GroupConfig(K=K)
    expected = naive_weights(v, K, cfg.eps_group)
    np.testing.assert_allclose(mm_weights(v, cfg), expected, rtol=1e-12)


def test_mm_weights_single_pixel_formula():
    v = np.random.default_rng(8).standard_normal((6, 6))
    cfg = GroupConfig(K=1)
    np.testing.assert_allclose(mm_weights(v, cfg), (cfg.eps_group + v**2) ** -0.5, rtol=1e-12)


def test_prox_of_zero_is_zero():
    out = ogs_prox(np.zeros((4, 4)), MMConfig(gamma_prox=2.0), GroupConfig(K=3))
    np.testing.assert_array_equal(out, np.zeros((4, 4)))


def test_prox_with_vanishing_weight_is_identity():
    v0 = np.random.default_rng(0).standard_normal((6, 6))
    out = ogs_prox(v0, MMConfig(gamma_prox=1e-15), GroupConfig(K=3))
    assert np.abs(out - v0).max() < 1e-9


def random_prox_input(seed):
    rng = np.random.default_rng(seed)
    return rng.choice([-1.0, 1.0], size=(4, 4)) * rng.uniform(0.5, 2.0, size=(4, 4))


@pytest.mark.parametrize("seed", range(7))
@pytest.mark.parametrize("K", [2, 3])
def test_prox_matches_numerical_minimizer(K, seed):
    v0 = random_prox_input(seed)
    gamma, eps = 0.5, 1e-4
    out = ogs_prox(
        v0, MMConfig(gamma_prox=gamma, tol=1e-15, max_iter=20000), GroupConfig(K=K, eps_group=eps)
    )
    reference = optimize.minimize(
        smoothed_objective,
        v0.ravel(),
        args=(v0, gamma, K, eps),
        jac=True,
        method="L-BFGS-B",
        options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 10000},
    )
    found = smoothed_objective(out, v0, gamma, K, eps)[0]
    assert abs(found - reference.fun) < 1e-6


@pytest.mark.parametrize("seed", range(7))
def test_single_pixel_prox_matches_scalar_minimizer(seed):
    v0 = random_prox_input(seed)
    gamma = 0.9
    out = ogs_prox(v0, MMConfig(gamma_prox=gamma), GroupConfig(K=1))
    reference = np.empty_like(v0)
    for idx, value in np.ndenumerate(v0):
        res = optimize.minimize_scalar(
            lambda x: 0.5 * (x - value) ** 2 + gamma * abs(x),
            bounds=(-abs(value) - 1.0, abs(value) + 1.0),
            method="bounded",
            options={"xatol": 1e-12},
        )
        reference[idx] = res.x
    assert abs(l1_objective(out, v0, gamma) - l1_objective(reference, v0, gamma)) < 1e-6


@pytest.mark.parametrize("K", [2, 3, 5])
def test_majorizer_never_increases_the_objective(K):
    rng = np.random.default_rng(100 + K)
    for _ in range(5):
        v0 = rng.standard_normal((8, 8))
        history = []
        ogs_prox(
            v0,
            MMConfig(gamma_prox=rng.uniform(0.1, 2.0), tol=1e-12, max_iter=50),
            GroupConfig(K=K),
            history=history,
        )
        assert len(history) >= 2
        for before, after in zip(history, history[1:]):
            assert after <= before * (1 + 1e-12) + 1e-12


def test_history_reports_the_smoothed_objective():
    v0 = np.random.default_rng(4).standard_normal((5, 5))
    mm = MMConfig(gamma_prox=0.7, max_iter=1)
    cfg = GroupConfig(K=3)
    history = []
    out = ogs_prox(v0, mm, cfg, history=history)
    assert history[0] == pytest.approx(0.7 * ogs_value(v0, cfg, smoothed=True))
    assert history[-1] == pytest.approx(mm_objective(out, v0, 0.7, cfg))


@pytest.mark.parametrize("K", [1, 2, 3])
def test_prox_shrinks_without_changing_sign(K):
    v0 = np.random.default_rng(K).standard_normal((7, 7))
    out = ogs_prox(v0, MMConfig(gamma_prox=0.3), GroupConfig(K=K))
    assert np.all(np.abs(out) <= np.abs(v0))
    assert np.all(out * v0 >= 0)


def test_prox_commutes_with_circular_shifts():
    v0 = np.random.default_rng(21).standard_normal((6, 8))
    mm, cfg = MMConfig(gamma_prox=0.4), GroupConfig(K=3)
    shifted = ogs_prox(np.roll(v0, (2, -3), axis=(0, 1)), mm, cfg)
    np.testing.assert_allclose(shifted, np.roll(ogs_prox(v0, mm, cfg), (2, -3), axis=(0, 1)), atol=1e-14)
