"""Chaotic linear semiflow on functions vanishing at the origin, with the
population models that reduce to it and statistical probes of its
invariant measure.

The flow S^t v (x) = e^(lam t) v(e^(-t) x) acts on continuous functions
on [0, 1] with v(0) = 0.  The maturity-structured model with production
rate c reduces to it with lam = c - 1 (chaotic for c > 1).  The
nonlinear first-order model transports a density p and renormalizes its
mass, which commutes with the linear flow through the normalization map
H(v) = v / integral(v).  A size-structured model with growth g,
mortality m, and binary division d is stepped along its characteristics.

Statistical probes draw initial states from the invariant Gaussian
measure (see ``ergokit.sampling``) and check stationarity under the
flow, sensitive dependence on initial conditions, and the signature of
turbulence in the boundary trace (Q v)(t) = e^(lam t) v(e^(-t)):
nondegenerate fluctuation around the time mean with exponentially
decaying autocovariance.
"""

import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import PchipInterpolator

from .errors import ExtinctionError, InstabilityError, InvalidParameterError
from .gridfn import GridFunction
from .sampling import invariant_state_ensemble, sample_ou

# hard cap on exponents so e^(lam t) stays inside double precision
_EXP_GUARD = 700.0

BLOWUP_GUARD = 1e12


def _check_exponent(lam, t):
    if lam * t > _EXP_GUARD:
        raise InvalidParameterError(
            f"exponent lam*t = {lam * t} overflows double precision; "
            "use the sampled-trace route for long horizons"
        )


def linear_semiflow(lam, v, t):
    """Evolve a state by the linear semiflow, S^t v (x) = e^(lam t) v(e^(-t) x).

    The state is evaluated between nodes by monotone cubic
    interpolation and returned on the same grid.
    """
    if t < 0.0:
        raise InvalidParameterError(f"need t >= 0, got {t}")
    _check_exponent(lam, t)
    grid = v.grid
    out = math.exp(lam * t) * v.interpolator()(math.exp(-t) * grid)
    if v.zero_at_origin:
        out[0] = 0.0
    return GridFunction(out, zero_at_origin=v.zero_at_origin)


def _push_matrix(lam, values, grid, t):
    # one vectorized pchip handles a whole ensemble (rows = samples)
    query = math.exp(-t) * grid
    pushed = math.exp(lam * t) * PchipInterpolator(grid, values, axis=1)(query)
    pushed[:, 0] = 0.0
    return pushed


def boundary_trace(lam, v, times):
    """The scalar trace of the flow at the right edge, e^(lam t) v(e^(-t))."""
    times = np.asarray(times, dtype=float)
    if times.size and times.max() > 0:
        _check_exponent(lam, float(times.max()))
    return np.exp(lam * times) * v.interpolator()(np.exp(-times))


def maturity_model_reduction(c):
    """Exponent of the linear semiflow induced by production rate c.

    Returns (lam, chaotic): lam = c - 1, and the flow is chaotic
    exactly when the production rate exceeds 1.
    """
    lam = c - 1.0
    return lam, c > 1.0


def grid_mass(v):
    """Integral of a grid function over [0, 1] by composite Simpson quadrature."""
    return float(simpson(v.values, x=v.grid))


def mass_near_zero(v, frac=0.01):
    """Mass carried on the leading ``frac`` of the domain (membership probe
    for densities required to keep mass near the origin)."""
    n_lead = max(2, int(round(frac * (v.n - 1))) + 1)
    return float(np.trapezoid(v.values[:n_lead], v.grid[:n_lead]))


def normalize_density(v):
    """Divide by the Simpson mass, mapping a nonnegative state to a density."""
    z = grid_mass(v)
    if not z > 0.0:
        raise ExtinctionError(f"cannot normalize: mass {z!r}")
    return GridFunction(v.values / z, zero_at_origin=v.zero_at_origin)


def nonlinear_density_flow(p0, t):
    """Mass-renormalized transport of a density under the nonlinear model,

        p(t, x) = p0(e^(-t) x) / integral_0^1 p0(e^(-t) y) dy.

    The output integrates to 1 under the same Simpson rule.  When the
    transported mass vanishes (the density kept no mass near the origin)
    the population has left the unit interval in finite time and an
    ``ExtinctionError`` is raised.
    """
    if t < 0.0:
        raise InvalidParameterError(f"need t >= 0, got {t}")
    if p0.values.min() < 0.0:
        raise InvalidParameterError("density values must be nonnegative")
    grid = p0.grid
    composite = p0.interpolator()(math.exp(-t) * grid)
    z = float(simpson(composite, x=grid))
    if z <= 1e-14:
        raise ExtinctionError(
            f"normalizing integral {z!r} vanished at t = {t}; the density kept no mass near 0"
        )
    return GridFunction(composite / z, zero_at_origin=p0.zero_at_origin)


@dataclass(frozen=True)
class SizeStructuredConfig:
    """Rates of the size-structured model: growth g, mortality m, division d."""

    growth: float
    mortality: float
    division: float = 0.0

    def __post_init__(self):
        if self.growth <= 0.0 or self.mortality < 0.0 or self.division < 0.0:
            raise InvalidParameterError(f"need g > 0, m >= 0, d >= 0, got {self}")


def size_structured_step(cfg, u, dt, steps=1):
    """Advance the size-structured balance law

        du/dt + d(g x u)/dx = -(m + d) u + 4 d u(t, 2x)

    by a semi-Lagrangian scheme: the transport and local linear terms
    are integrated exactly along the characteristics x -> x e^(-g dt)
    (factor e^(-(m+d+g) dt)), the division inflow 4 d u(t, 2x) is added
    explicitly and reads as 0 beyond the unit interval.  Monotone cubic
    interpolation keeps the scheme positivity-preserving.
    """
    if dt <= 0.0:
        raise InvalidParameterError(f"need dt > 0, got {dt}")
    if cfg.growth * dt > 1.0:
        raise InvalidParameterError(f"g*dt = {cfg.growth * dt} too large for one transport step")
    if u.values.min() < 0.0:
        raise InvalidParameterError("size density must be nonnegative")
    grid = u.grid
    feet = grid * math.exp(-cfg.growth * dt)
    decay = math.exp(-(cfg.mortality + cfg.division + cfg.growth) * dt)
    inflow = 4.0 * cfg.division * dt
    doubled = 2.0 * grid
    inside = doubled <= 1.0
    vals = u.values
    for _ in range(steps):
        p = PchipInterpolator(grid, vals)
        new = decay * p(feet)
        if inflow > 0.0:
            src = np.zeros_like(new)
            src[inside] = p(doubled[inside])
            new += inflow * src
        low = new.min()
        if low < -1e-12:
            raise InstabilityError(f"negative density {low!r} beyond the clipping tolerance")
        np.clip(new, 0.0, None, out=new)
        if new.max() > BLOWUP_GUARD:
            raise InstabilityError(f"density magnitude {new.max()!r} beyond the blow-up guard")
        vals = new
    return GridFunction(vals, zero_at_origin=u.zero_at_origin and vals[0] == 0.0)


def size_structured_closed_form(cfg, u0, t):
    """Division-free reference solution u(t, x) = e^(-(m+g) t) u0(x e^(-g t))."""
    if cfg.division != 0.0:
        raise InvalidParameterError("closed form only holds without division")
    grid = u0.grid
    vals = math.exp(-(cfg.mortality + cfg.growth) * t) * u0.interpolator()(grid * math.exp(-cfg.growth * t))
    return GridFunction(vals, zero_at_origin=u0.zero_at_origin)


# -- statistical probes --------------------------------------------------------


@dataclass(frozen=True)
class StationarityResult:
    """Two-sample moment comparison between pushed and fresh ensembles."""

    lam: float
    push_lam: float
    t: float
    n_samples: int
    probes: tuple
    z_mean: tuple
    z_var: tuple
    max_abs_z: float
    stationary: bool

    def to_dict(self):
        return asdict(self)


def stationarity_test(lam, t, n_samples, seed, push_lam=None, n_grid=1001,
                      probes=(0.2, 0.4, 0.6, 0.8, 1.0)):
    """Check that the invariant measure is preserved by the flow.

    Draws ``n_samples`` states from the invariant measure, pushes them
    through the semiflow for time t (with exponent ``push_lam``, which
    defaults to the sampling exponent and is only varied for negative
    controls), and compares means and variances at the probe points
    against a fresh ensemble of draws.  All probe points must be grid
    nodes.  Agreement means every |z| <= 3.
    """
    if push_lam is None:
        push_lam = lam
    grid = np.linspace(0.0, 1.0, n_grid)
    idx = []
    for p in probes:
        k = int(round(p * (n_grid - 1)))
        if abs(grid[k] - p) > 1e-9:
            raise InvalidParameterError(f"probe {p} is not a node of the {n_grid}-point grid")
        idx.append(k)
    idx = np.array(idx)

    pushed = invariant_state_ensemble(lam, grid, n_samples, seed, index_offset=0)
    pushed = _push_matrix(push_lam, pushed, grid, t)[:, idx]
    fresh = invariant_state_ensemble(lam, grid, n_samples, seed, index_offset=n_samples)[:, idx]

    def moments(block):
        mean = block.mean(axis=0)
        se_mean = block.std(axis=0, ddof=1) / math.sqrt(n_samples)
        var = block.var(axis=0, ddof=1)
        se_var = var * math.sqrt(2.0 / (n_samples - 1))
        return mean, se_mean, var, se_var

    m1, sm1, v1, sv1 = moments(pushed)
    m2, sm2, v2, sv2 = moments(fresh)
    z_mean = (m1 - m2) / np.hypot(sm1, sm2)
    z_var = (v1 - v2) / np.hypot(sv1, sv2)
    max_abs = float(np.max(np.abs(np.concatenate((z_mean, z_var)))))
    return StationarityResult(
        lam=float(lam),
        push_lam=float(push_lam),
        t=float(t),
        n_samples=int(n_samples),
        probes=tuple(float(p) for p in probes),
        z_mean=tuple(float(z) for z in z_mean),
        z_var=tuple(float(z) for z in z_var),
        max_abs_z=max_abs,
        stationary=max_abs <= 3.0,
    )


@dataclass(frozen=True)
class ProbeResult:
    """First perturbation observed to diverge in the sensitivity probe."""

    alpha: float
    t_diverge: float
    divergence: float


def sensitive_dependence_probe(lam, v, eps, eta=1.0, t_max=10.0,
                               alphas=(0.25, 0.5, 0.75), dt=0.01):
    """Search for sensitive dependence around the state v.

    Perturbs v by w(x) = eps * x^(alpha lam) for each exponent fraction
    alpha and scans t in steps of dt for sup-norm divergence

        || S^t (v + w) - S^t v ||_inf > eta,

    returning the first (alpha, t) that diverges, or None when no probe
    diverges by t_max (in particular for eps = 0, by linearity).
    """
    if eta <= 0.0:
        raise InvalidParameterError(f"need eta > 0, got {eta}")
    _check_exponent(lam, t_max)
    grid = v.grid
    base = v.interpolator()
    times = np.arange(0.0, t_max + 0.5 * dt, dt)
    for alpha in alphas:
        w = eps * grid ** (alpha * lam)
        pert = PchipInterpolator(grid, v.values + w)
        for t in times:
            q = math.exp(-t) * grid
            gap = math.exp(lam * t) * float(np.max(np.abs(pert(q) - base(q))))
            if gap > eta:
                return ProbeResult(alpha=float(alpha), t_diverge=float(t), divergence=gap)
    return None


@dataclass(frozen=True)
class TurbulenceReport:
    """Second-order statistics of the boundary trace of the flow."""

    lam: float
    horizon: float
    dt: float
    seed: object
    trace_mean: float
    lags: tuple
    gamma: tuple
    gamma0: float
    noise_floor: float
    gamma0_significant: bool
    tail_decays: bool
    pointwise: dict = None

    def to_dict(self):
        return asdict(self)


def _lag_indices(lags, dt, n_times):
    ks = []
    for tau in lags:
        k = int(round(tau / dt))
        if abs(k * dt - tau) > 1e-9 or not 0 <= k < n_times:
            raise InvalidParameterError(f"lag {tau} is not resolved by dt = {dt} on the horizon")
        ks.append(k)
    return ks


def _autocov(trace, ks):
    centered = trace - trace.mean()
    n = centered.size
    return [float(np.mean(centered[: n - k] * centered[k:])) if k else float(np.mean(centered * centered))
            for k in ks]


def turbulence_report(lam, seed=None, horizon=100.0, dt=0.025, lags=None,
                      v=None, probe_x=None):
    """Estimate the turbulence signature of the boundary trace.

    With ``v`` omitted, the initial state is drawn from the invariant
    measure and its trace is evaluated through the exact trace identity
    (the stationary exponentially-correlated Gaussian process), which
    stays finite on arbitrarily long horizons.  With ``v`` given, the
    trace e^(lam t) v(e^(-t)) is evaluated from the stored state, which
    is limited to moderate horizons by double precision.

    The report carries the time mean of the trace, autocovariance
    estimates gamma(tau) on the lag grid (default 0, 0.5, 1, 2, 5/lam),
    a noise floor for gamma(0) at this horizon, and the two turbulence
    flags: gamma(0) above the floor, and |gamma| at the largest lag
    below gamma(0)/5.
    """
    if lam <= 0.0:
        raise InvalidParameterError(f"need lam > 0, got {lam}")
    if horizon <= 0.0 or dt <= 0.0 or horizon < 10.0 * dt:
        raise InvalidParameterError(f"bad horizon/dt: {horizon}, {dt}")
    n_steps = int(round(horizon / dt))
    times = np.arange(n_steps + 1) * dt
    if lags is None:
        lags = sorted({0.0, 0.5, 1.0, 2.0, 5.0 / lam})
    ks = _lag_indices(lags, dt, times.size)

    if v is None:
        if seed is None:
            raise InvalidParameterError("either a seed or an explicit state is required")
        max_shift = 0.0
        if probe_x:
            max_shift = max(-math.log(x) for x in probe_x)
        n_ext = int(math.ceil(max_shift / dt))
        full = sample_ou(lam, np.arange(n_steps + n_ext + 1) * dt, seed).values
        trace = full[: times.size]
    else:
        trace = boundary_trace(lam, v, times)
        full = trace

    v0 = float(trace.mean())
    gamma = _autocov(trace, ks)
    gamma0 = gamma[lags.index(0.0)] if 0.0 in lags else _autocov(trace, [0])[0]
    noise_floor = 3.0 * math.sqrt(2.0 / (lam * horizon))

    pointwise = None
    if probe_x:
        pointwise = {}
        for x in probe_x:
            if not 0.0 < x <= 1.0:
                raise InvalidParameterError(f"probe points must lie in (0, 1], got {x}")
            if v is None:
                shift = int(round(-math.log(x) / dt))
                series = x**lam * full[shift: shift + times.size]
            else:
                series = np.exp(lam * times) * v.interpolator()(x * np.exp(-times))
            pointwise[float(x)] = tuple(_autocov(np.asarray(series), ks))

    return TurbulenceReport(
        lam=float(lam),
        horizon=float(horizon),
        dt=float(dt),
        seed=seed,
        trace_mean=v0,
        lags=tuple(float(t) for t in lags),
        gamma=tuple(gamma),
        gamma0=float(gamma0),
        noise_floor=noise_floor,
        gamma0_significant=gamma0 > noise_floor,
        tail_decays=abs(gamma[-1]) <= gamma0 / 5.0 + 1e-15,
        pointwise=pointwise,
    )
