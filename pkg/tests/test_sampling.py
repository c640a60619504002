"""Gaussian samplers: Wiener paths, invariant-measure state draws,
stationary traces, and the multiparameter field."""

import numpy as np
import pytest

from ergokit import (
    FactorizationError,
    InvalidParameterError,
    PathSample,
    empirical_autocov,
    invariant_state_ensemble,
    invariant_state_from_path,
    ou_ensemble,
    sample_invariant_state,
    sample_levy_field,
    sample_ou,
    sample_wiener,
    stream,
)


def test_stream_determinism_and_independence():
    a = stream(42, index=3).standard_normal(8)
    b = stream(42, index=3).standard_normal(8)
    c = stream(42, index=4).standard_normal(8)
    d = stream(43, index=3).standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_stream_rejects_bad_seed_and_index():
    with pytest.raises(InvalidParameterError):
        stream(-1)
    with pytest.raises(InvalidParameterError):
        stream(2**64)
    with pytest.raises(InvalidParameterError):
        stream(7, index=-1)


def test_path_sample_validation():
    with pytest.raises(InvalidParameterError):
        PathSample([0.0, 1.0, 1.0], [0.0, 0.5, 0.5])
    with pytest.raises(InvalidParameterError):
        PathSample([0.0, 1.0], [0.0, 0.5, 1.0])
    with pytest.raises(InvalidParameterError):
        PathSample([[0.0, 1.0]], [[0.0, 0.5]])


def test_path_sample_lookup():
    p = PathSample([0.0, 0.5, 1.25], [1.0, 2.0, 3.0])
    assert len(p) == 3
    assert p.value_at(0.5) == 2.0
    assert p.value_at(1.25) == 3.0
    # hits within the lookup tolerance resolve to the sampled node
    assert p.value_at(0.5 + 1e-13) == 2.0
    with pytest.raises(KeyError):
        p.value_at(0.75)


def test_wiener_pins_origin_and_is_deterministic():
    times = np.linspace(0.0, 2.0, 9)
    p = sample_wiener(times, seed=11)
    q = sample_wiener(times, seed=11)
    r = sample_wiener(times, seed=11, index=1)
    assert p.values[0] == 0.0
    assert np.array_equal(p.values, q.values)
    assert not np.array_equal(p.values, r.values)
    with pytest.raises(InvalidParameterError):
        sample_wiener([-0.5, 0.5], seed=11)


def test_wiener_standardized_increments_are_unit_normals():
    times = np.linspace(0.0, 20.0, 20001)
    p = sample_wiener(times, seed=101)
    z = np.diff(p.values) / np.sqrt(np.diff(times))
    n = z.size
    assert abs(z.mean()) < 3.0 / np.sqrt(n)
    assert abs(z.var(ddof=1) - 1.0) < 3.0 * np.sqrt(2.0 / (n - 1))


def test_wiener_covariance_is_min_of_times():
    times = np.array([0.25, 0.5, 1.0])
    n = 4000
    vals = np.array([sample_wiener(times, seed=202, index=i).values for i in range(n)])
    cov = vals.T @ vals / n
    expect = np.minimum.outer(times, times)
    # var of w(s) w(t) is s t + min(s, t)^2
    tol = 4.0 * np.sqrt((np.outer(times, times) + expect**2) / n)
    assert np.all(np.abs(cov - expect) < tol)


def test_invariant_state_marginal_and_joint_law():
    lam = 0.7
    x = np.linspace(0.0, 1.0, 5)
    n = 4000
    ens = invariant_state_ensemble(lam, x, n, seed=303)
    assert ens.shape == (n, 5)
    assert np.all(ens[:, 0] == 0.0)
    second = ens**2
    expect = x ** (2.0 * lam)
    tol = 4.0 * np.sqrt(2.0) * np.maximum(expect, 1e-12) / np.sqrt(n)
    assert np.all(np.abs(second.mean(axis=0) - expect) < tol)
    # joint second moment at a pair of nodes is min(x, y)^(2 lam)
    cross = (ens[:, 2] * ens[:, 4]).mean()
    want = 0.5 ** (2.0 * lam)
    assert abs(cross - want) < 4.0 * np.std(ens[:, 2] * ens[:, 4]) / np.sqrt(n)


def test_invariant_state_nonneg_is_modulus_of_signed_draw():
    lam = 0.4
    x = np.linspace(0.0, 1.0, 33)
    signed = sample_invariant_state(lam, x, seed=77, index=5)
    folded = sample_invariant_state(lam, x, seed=77, index=5, nonneg=True)
    assert np.array_equal(folded.values, np.abs(signed.values))
    assert np.all(folded.values >= 0.0)


def test_invariant_state_rejects_bad_grid_and_rate():
    x = np.linspace(0.0, 1.0, 9)
    with pytest.raises(InvalidParameterError):
        sample_invariant_state(0.0, x, seed=1)
    with pytest.raises(InvalidParameterError):
        sample_invariant_state(0.5, np.linspace(0.1, 1.0, 9), seed=1)
    with pytest.raises(InvalidParameterError):
        sample_invariant_state(0.5, x[::-1], seed=1)


def test_refinement_reuses_the_coarse_draw_exactly():
    # one path on the union of image times makes the coarse and fine
    # draws agree wherever the grids share a node
    lam = 0.7
    fine = np.linspace(0.0, 1.0, 9)
    coarse = fine[::2]
    path = sample_wiener(fine[1:] ** (2.0 * lam), seed=404)
    g_fine = invariant_state_from_path(path, fine, lam)
    g_coarse = invariant_state_from_path(path, coarse, lam)
    assert np.array_equal(g_coarse.values, g_fine.values[::2])


def test_state_from_path_requires_the_image_times():
    lam = 0.5
    path = sample_wiener(np.array([0.25, 1.0]), seed=9)
    with pytest.raises(KeyError):
        invariant_state_from_path(path, np.linspace(0.0, 1.0, 5), lam)


def test_ou_first_value_is_the_raw_draw():
    lam, times = 0.8, np.linspace(0.0, 5.0, 51)
    p = sample_ou(lam, times, seed=55, index=2)
    z = stream(55, index=2).standard_normal(times.size)
    assert p.values[0] == z[0]
    q = sample_ou(lam, times, seed=55, index=2)
    assert np.array_equal(p.values, q.values)


def test_ou_innovations_recover_the_driving_draws():
    # the trace is the exact stationary AR(1) discretization: stripping
    # one decay step must return the stream's normals
    lam, n = 1.0, 500
    times = np.linspace(0.0, 49.9, n)
    p = sample_ou(lam, times, seed=606)
    z = stream(606).standard_normal(n)
    delta = times[1] - times[0]
    decay = np.exp(-lam * delta)
    scale = np.sqrt(-np.expm1(-2.0 * lam * delta))
    innov = (p.values[1:] - decay * p.values[:-1]) / scale
    np.testing.assert_allclose(innov, z[1:], atol=1e-11)


def test_ou_autocovariance_decays_exponentially():
    lam = 0.5
    times = np.linspace(0.0, 30.0, 601)
    ens = ou_ensemble(lam, times, 400, seed=707)
    for tau in (0.0, 0.5, 1.0, 2.0):
        gamma, se = empirical_autocov(ens, times, tau)
        assert abs(gamma - np.exp(-lam * tau)) < 4.0 * se


def test_ou_nonuniform_grid_matches_the_recursion():
    lam = 0.9
    dts = np.array([0.1, 0.3, 0.05, 0.2, 0.4, 0.15])
    times = np.concatenate(([0.0], np.cumsum(dts)))
    p = sample_ou(lam, times, seed=808)
    z = stream(808).standard_normal(times.size)
    decay = np.exp(-lam * dts)
    drive = np.concatenate(([z[0]], np.sqrt(-np.expm1(-2.0 * lam * dts)) * z[1:]))
    manual = np.empty(times.size)
    manual[0] = drive[0]
    for k in range(1, times.size):
        manual[k] = decay[k - 1] * manual[k - 1] + drive[k]
    np.testing.assert_allclose(p.values, manual, rtol=1e-14, atol=0.0)


def test_ou_uniform_grid_matches_the_recursion():
    lam = 0.9
    times = np.linspace(0.0, 10.0, 401)
    p = sample_ou(lam, times, seed=909)
    z = stream(909).standard_normal(times.size)
    dts = np.diff(times)
    decay = np.exp(-lam * dts)
    drive = np.concatenate(([z[0]], np.sqrt(-np.expm1(-2.0 * lam * dts)) * z[1:]))
    manual = np.empty(times.size)
    manual[0] = drive[0]
    for k in range(1, times.size):
        manual[k] = decay[k - 1] * manual[k - 1] + drive[k]
    np.testing.assert_allclose(p.values, manual, rtol=0.0, atol=1e-10)


def test_ou_rejects_nonpositive_rate():
    with pytest.raises(InvalidParameterError):
        sample_ou(0.0, np.linspace(0.0, 1.0, 5), seed=1)
    with pytest.raises(InvalidParameterError):
        sample_ou(-0.5, np.linspace(0.0, 1.0, 5), seed=1)


def test_empirical_autocov_constant_rows_closed_form():
    times = np.linspace(0.0, 0.3, 4)
    values = np.array([[1.0] * 4, [3.0] * 4])
    gamma, se = empirical_autocov(values, times, 0.0)
    assert gamma == 1.0
    assert se == 0.0
    gamma, se = empirical_autocov(values, times, 0.1)
    assert gamma == pytest.approx(1.0)
    assert se == pytest.approx(0.0, abs=1e-15)


def test_empirical_autocov_validation():
    times = np.linspace(0.0, 1.0, 11)
    values = np.zeros((3, 11))
    with pytest.raises(InvalidParameterError):
        empirical_autocov(values[0], times, 0.1)
    with pytest.raises(InvalidParameterError):
        empirical_autocov(values, np.sqrt(np.linspace(0.0, 1.0, 11)), 0.1)
    with pytest.raises(InvalidParameterError):
        empirical_autocov(values, times, 0.033)
    with pytest.raises(InvalidParameterError):
        empirical_autocov(values, times, -0.1)
    with pytest.raises(InvalidParameterError):
        empirical_autocov(values, times, 1.2)


def test_levy_field_pins_the_origin():
    out = sample_levy_field(np.array([0.0, 0.5, 1.0]), seed=13)
    assert out[0] == 0.0
    again = sample_levy_field(np.array([0.0, 0.5, 1.0]), seed=13)
    assert np.array_equal(out, again)
    other = sample_levy_field(np.array([0.0, 0.5, 1.0]), seed=13, index=1)
    assert not np.array_equal(out, other)


def test_levy_field_on_the_line_is_wiener():
    pts = np.array([0.25, 0.5, 1.0])
    n = 500
    vals = np.array([sample_levy_field(pts, seed=14, index=i) for i in range(n)])
    cov = vals.T @ vals / n
    expect = np.minimum.outer(pts, pts)
    tol = 4.0 * np.sqrt((np.outer(pts, pts) + expect**2) / n)
    assert np.all(np.abs(cov - expect) < tol)
    assert np.all(np.abs(vals.mean(axis=0)) < 4.0 / np.sqrt(n))


def test_levy_field_plane_draw_is_finite_and_pinned():
    side = np.linspace(0.0, 1.0, 10)
    xx, yy = np.meshgrid(side, side)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    out = sample_levy_field(pts, seed=15)
    assert out.shape == (100,)
    assert np.all(np.isfinite(out))
    assert out[0] == 0.0


def test_levy_field_rejects_bad_point_sets():
    with pytest.raises(InvalidParameterError):
        sample_levy_field(np.linspace(0.0, 1.0, 2001), seed=1)
    with pytest.raises(InvalidParameterError):
        sample_levy_field(np.array([[0.1], [0.1]]), seed=1)
    with pytest.raises(InvalidParameterError):
        sample_levy_field(np.zeros((2, 2, 2)), seed=1)
