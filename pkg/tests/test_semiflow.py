"""Linear semiflow and the population models riding on it: transport,
mass laws, and the statistical probes of the invariant measure."""

import math

import numpy as np
import pytest

from ergokit import (
    ExtinctionError,
    GridFunction,
    InstabilityError,
    InvalidParameterError,
    SizeStructuredConfig,
    boundary_trace,
    grid_mass,
    linear_semiflow,
    mass_near_zero,
    maturity_model_reduction,
    nonlinear_density_flow,
    normalize_density,
    sample_invariant_state,
    sensitive_dependence_probe,
    size_structured_closed_form,
    size_structured_step,
    stationarity_test,
    turbulence_report,
)


def _linear_state(n=101):
    return GridFunction(np.linspace(0.0, 1.0, n))


def _bump(grid, center, width):
    # compactly supported smooth bump, zero outside |x - center| < width
    z = (grid - center) / width
    out = np.zeros_like(grid)
    inside = np.abs(z) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - z[inside] ** 2))
    return out


def test_linear_semiflow_on_linear_state_is_exact():
    lam, t = 0.7, 1.3
    v = _linear_state()
    out = linear_semiflow(lam, v, t)
    np.testing.assert_allclose(out.values, math.exp((lam - 1.0) * t) * v.grid, rtol=1e-13)
    assert out.values[0] == 0.0


def test_linear_semiflow_time_zero_is_identity():
    v = GridFunction(np.sin(np.pi * np.linspace(0.0, 1.0, 64)) ** 2)
    out = linear_semiflow(1.2, v, 0.0)
    np.testing.assert_allclose(out.values, v.values, rtol=1e-14, atol=1e-15)


def test_linear_semiflow_semigroup_property():
    lam = 1.5
    grid = np.linspace(0.0, 1.0, 1025)
    v = GridFunction(grid * (1.0 - grid))
    one_hop = linear_semiflow(lam, v, 0.8)
    two_hops = linear_semiflow(lam, linear_semiflow(lam, v, 0.3), 0.5)
    np.testing.assert_allclose(two_hops.values, one_hop.values, atol=1e-7)


def test_linear_semiflow_keeps_unpinned_origin():
    v = GridFunction(np.full(11, 2.0), zero_at_origin=False)
    out = linear_semiflow(0.5, v, 1.0)
    assert out.values[0] == pytest.approx(2.0 * math.exp(0.5), rel=1e-14)
    assert not out.zero_at_origin


def test_linear_semiflow_guards():
    v = _linear_state()
    with pytest.raises(InvalidParameterError):
        linear_semiflow(1.0, v, -0.1)
    with pytest.raises(InvalidParameterError):
        linear_semiflow(100.0, v, 8.0)


def test_boundary_trace_of_linear_state():
    lam = 2.0
    v = _linear_state()
    times = np.linspace(0.0, 3.0, 31)
    np.testing.assert_allclose(boundary_trace(lam, v, times),
                               np.exp((lam - 1.0) * times), rtol=1e-12)
    with pytest.raises(InvalidParameterError):
        boundary_trace(100.0, v, np.array([0.0, 8.0]))


def test_maturity_model_reduction():
    assert maturity_model_reduction(2.5) == (1.5, True)
    assert maturity_model_reduction(1.0) == (0.0, False)
    lam, chaotic = maturity_model_reduction(0.5)
    assert lam == -0.5 and not chaotic


def test_grid_mass_and_normalization():
    grid = np.linspace(0.0, 1.0, 1001)
    v = GridFunction(grid**2)
    assert grid_mass(v) == pytest.approx(1.0 / 3.0, rel=1e-12)
    p = normalize_density(v)
    assert grid_mass(p) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ExtinctionError):
        normalize_density(GridFunction(np.zeros(11)))


def test_mass_near_zero_linear_closed_form():
    v = _linear_state(n=101)
    # integral of x over [0, frac] is frac^2 / 2
    assert mass_near_zero(v, frac=0.01) == pytest.approx(0.5e-4, rel=1e-12)
    assert mass_near_zero(v, frac=0.1) == pytest.approx(0.5e-2, rel=1e-12)


def test_nonlinear_flow_fixes_the_linear_density():
    grid = np.linspace(0.0, 1.0, 201)
    p0 = GridFunction(2.0 * grid)
    for t in (0.4, 1.0, 3.0):
        p = nonlinear_density_flow(p0, t)
        np.testing.assert_allclose(p.values, p0.values, rtol=1e-12)


def test_nonlinear_flow_is_normalized_linear_flow():
    # renormalization cancels e^(lam t), so the nonlinear flow must agree
    # with the linear flow followed by normalization, for any exponent
    grid = np.linspace(0.0, 1.0, 401)
    p0 = normalize_density(GridFunction(grid * np.exp(-3.0 * grid)))
    t = 0.9
    via_linear = normalize_density(linear_semiflow(0.7, p0, t))
    direct = nonlinear_density_flow(p0, t)
    np.testing.assert_allclose(direct.values, via_linear.values, rtol=1e-11)
    assert grid_mass(direct) == pytest.approx(1.0, rel=1e-12)


def test_nonlinear_flow_extinction_without_mass_near_zero():
    grid = np.linspace(0.0, 1.0, 401)
    p0 = GridFunction(_bump(grid, 0.75, 0.2))
    # by t = 2 the support has been pulled entirely below the bump
    with pytest.raises(ExtinctionError):
        nonlinear_density_flow(p0, 2.0)


def test_nonlinear_flow_rejects_bad_input():
    grid = np.linspace(0.0, 1.0, 11)
    with pytest.raises(InvalidParameterError):
        nonlinear_density_flow(GridFunction(grid), -1.0)
    vals = grid.copy()
    vals[5] = -0.2
    with pytest.raises(InvalidParameterError):
        nonlinear_density_flow(GridFunction(vals), 1.0)


def test_size_structured_config_validation():
    with pytest.raises(InvalidParameterError):
        SizeStructuredConfig(growth=0.0, mortality=0.1)
    with pytest.raises(InvalidParameterError):
        SizeStructuredConfig(growth=1.0, mortality=-0.1)
    with pytest.raises(InvalidParameterError):
        SizeStructuredConfig(growth=1.0, mortality=0.1, division=-1.0)


def test_size_structured_single_step_matches_closed_form():
    cfg = SizeStructuredConfig(growth=1.0, mortality=0.5)
    grid = np.linspace(0.0, 1.0, 301)
    u0 = GridFunction(grid**2 * (1.0 - grid))
    stepped = size_structured_step(cfg, u0, dt=0.01)
    exact = size_structured_closed_form(cfg, u0, 0.01)
    np.testing.assert_allclose(stepped.values, exact.values, rtol=1e-12)


def test_size_structured_many_steps_track_closed_form():
    cfg = SizeStructuredConfig(growth=1.0, mortality=0.5)
    grid = np.linspace(0.0, 1.0, 601)
    u0 = GridFunction(_bump(grid, 0.4, 0.25))
    stepped = size_structured_step(cfg, u0, dt=0.005, steps=100)
    exact = size_structured_closed_form(cfg, u0, 0.5)
    assert np.max(np.abs(stepped.values - exact.values)) < 2e-4
    assert stepped.values.min() >= 0.0


def test_size_structured_division_mass_law():
    # while the support stays inside the unit interval nothing crosses
    # the right edge, so total mass grows exactly like e^((d - m) t)
    cfg = SizeStructuredConfig(growth=1.0, mortality=0.3, division=0.8)
    grid = np.linspace(0.0, 1.0, 801)
    u0 = GridFunction(_bump(grid, 0.175, 0.125))
    m0 = grid_mass(u0)
    out = size_structured_step(cfg, u0, dt=0.002, steps=250)
    ratio = grid_mass(out) / m0
    want = math.exp((cfg.division - cfg.mortality) * 0.5)
    assert ratio == pytest.approx(want, rel=5e-3)


def test_size_structured_step_guards():
    cfg = SizeStructuredConfig(growth=1.0, mortality=0.0)
    grid = np.linspace(0.0, 1.0, 11)
    u = GridFunction(grid)
    with pytest.raises(InvalidParameterError):
        size_structured_step(cfg, u, dt=0.0)
    with pytest.raises(InvalidParameterError):
        size_structured_step(cfg, u, dt=1.5)
    vals = grid.copy()
    vals[3] = -0.5
    with pytest.raises(InvalidParameterError):
        size_structured_step(cfg, GridFunction(vals), dt=0.1)
    with pytest.raises(InvalidParameterError):
        size_structured_closed_form(SizeStructuredConfig(1.0, 0.0, 0.5), u, 1.0)


def test_stationarity_holds_under_the_matched_flow():
    res = stationarity_test(lam=1.0, t=1.0, n_samples=400, seed=21)
    assert res.stationary
    assert res.max_abs_z <= 3.0
    assert res.push_lam == 1.0
    d = res.to_dict()
    assert d["n_samples"] == 400 and len(d["z_mean"]) == len(d["probes"])


def test_stationarity_negative_control_detects_mismatch():
    # pushing with the wrong exponent inflates the variance by e^2
    res = stationarity_test(lam=1.0, t=1.0, n_samples=400, seed=21, push_lam=2.0)
    assert not res.stationary
    assert res.max_abs_z > 3.0


def test_stationarity_requires_probe_nodes():
    with pytest.raises(InvalidParameterError):
        stationarity_test(lam=1.0, t=0.5, n_samples=10, seed=1,
                          n_grid=11, probes=(0.123,))


def test_sensitivity_probe_finds_logarithmic_divergence_time():
    # eps large enough that the crossing happens while e^(-t) is still
    # many grid cells from the origin, where the power perturbation is
    # fully resolved by the interpolant
    lam, eps = 1.0, 0.1
    v = GridFunction(np.zeros(513))
    res = sensitive_dependence_probe(lam, v, eps, eta=1.0, t_max=6.0,
                                     alphas=(0.25,))
    assert res is not None
    assert res.alpha == 0.25
    # sup-norm gap grows like eps e^(lam (1 - alpha) t)
    want = math.log(1.0 / eps) / (lam * (1.0 - 0.25))
    assert res.t_diverge == pytest.approx(want, abs=0.02)
    assert res.divergence > 1.0


def test_sensitivity_probe_null_cases():
    v = GridFunction(np.zeros(65))
    assert sensitive_dependence_probe(1.0, v, 0.0) is None
    assert sensitive_dependence_probe(1.0, v, 1e-8, t_max=1.0) is None
    with pytest.raises(InvalidParameterError):
        sensitive_dependence_probe(1.0, v, 0.1, eta=0.0)


def test_turbulence_report_sampled_trace():
    lam = 0.5
    rep = turbulence_report(lam, seed=31, horizon=400.0, dt=0.025)
    assert rep.gamma0_significant
    assert rep.tail_decays
    assert abs(rep.trace_mean) < 3.0 / math.sqrt(lam * rep.horizon)
    assert abs(rep.gamma0 - 1.0) < rep.noise_floor
    assert rep.lags == (0.0, 0.5, 1.0, 2.0, 10.0)
    assert rep.gamma[0] == rep.gamma0
    d = rep.to_dict()
    assert d["seed"] == 31


def test_turbulence_pointwise_probes():
    lam = 0.5
    rep = turbulence_report(lam, seed=31, horizon=400.0, dt=0.025,
                            probe_x=(0.5, 1.0))
    # at x = 1 the pointwise series is the boundary trace itself
    assert rep.pointwise[1.0] == rep.gamma
    # at interior x the variance scales like x^(2 lam)
    assert abs(rep.pointwise[0.5][0] - 0.5 ** (2.0 * lam)) < rep.noise_floor


def test_turbulence_constant_trace_has_no_signature():
    # the pure power state is a fixed ray of the flow: its trace is
    # constant, so the fluctuation statistics must come out degenerate;
    # the horizon is kept short so e^(-t) stays on the resolved grid
    lam = 0.8
    grid = np.linspace(0.0, 1.0, 2001)
    v = GridFunction(grid**lam)
    rep = turbulence_report(lam, v=v, horizon=4.0, dt=0.025,
                            lags=[0.0, 0.5, 1.0])
    assert not rep.gamma0_significant
    assert rep.gamma0 < 1e-6
    assert abs(rep.trace_mean - 1.0) < 1e-3


def test_turbulence_report_validation():
    with pytest.raises(InvalidParameterError):
        turbulence_report(0.0, seed=1)
    with pytest.raises(InvalidParameterError):
        turbulence_report(1.0, seed=1, horizon=0.1, dt=0.025)
    with pytest.raises(InvalidParameterError):
        turbulence_report(1.0)
    with pytest.raises(InvalidParameterError):
        turbulence_report(1.0, seed=1, lags=[0.0, 0.0333])
    with pytest.raises(InvalidParameterError):
        turbulence_report(1.0, seed=1, probe_x=(1.5,))
