"""Gaussian path and field samplers behind the semiflow experiments.

All randomness flows through per-sample streams derived from a 64-bit
seed and a sample index, so ensembles are reproducible element by
element under any execution order.

The invariant measure of the linear semiflow with exponent lam is
realized by time-changing one Wiener path: the state draw reads the
path at times x^(2 lam), and the scalar trace of the flow started from
such a draw is the stationary exponentially-correlated Gaussian process
xi_t = e^(lam t) w(e^(-2 lam t)).  For long horizons that product
overflows double precision, so ``sample_ou`` accumulates the identical
per-interval Wiener increments in exponentially weighted form,

    xi_{k+1} = e^(-lam dt) xi_k + sqrt(1 - e^(-2 lam dt)) z_k,

which is the same construction evaluated stably.
"""

import numpy as np
from scipy.signal import lfilter

from .errors import FactorizationError, InvalidParameterError
from .gridfn import GridFunction

MAX_FIELD_POINTS = 2000
EIGENVALUE_CLIP = -1e-12


def stream(seed, index=0):
    """Generator for sample ``index`` of the ensemble keyed by ``seed``."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
    if index < 0:
        raise InvalidParameterError(f"sample index must be nonnegative, got {index}")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(int(index),)))


class PathSample:
    """A sampled scalar path: strictly increasing times and one value per time."""

    __slots__ = ("times", "values")

    def __init__(self, times, values):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise InvalidParameterError("times and values must be 1-d arrays of equal length")
        if np.any(np.diff(times) <= 0.0):
            raise InvalidParameterError("times must be strictly increasing")
        self.times = times
        self.values = values

    def value_at(self, t, tol=1e-12):
        """Exact lookup of the path value at a sampled time."""
        k = np.searchsorted(self.times, t)
        for idx in (k, k - 1, k + 1):
            if 0 <= idx < self.times.size and abs(self.times[idx] - t) <= tol:
                return float(self.values[idx])
        raise KeyError(f"time {t} was not sampled")

    def __len__(self):
        return self.times.size


def _check_times(times, start_at_zero):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise InvalidParameterError("need a 1-d array of times")
    if np.any(np.diff(times) <= 0.0):
        raise InvalidParameterError("times must be strictly increasing")
    if times[0] < 0.0 or (start_at_zero and times[0] != 0.0):
        raise InvalidParameterError(f"time grid must start at 0, got {times[0]}")
    return times


def sample_wiener(times, seed, index=0):
    """One Wiener path on the given time grid, pinned to w(0) = 0.

    Increments over consecutive intervals are independent centered
    Gaussians with variance equal to the interval length.
    """
    times = _check_times(times, start_at_zero=False)
    rng = stream(seed, index)
    dt = np.diff(times, prepend=0.0)
    steps = rng.standard_normal(times.size) * np.sqrt(dt)
    values = np.cumsum(steps)
    if times[0] == 0.0:
        values[0] = 0.0
    return PathSample(times, values)


def invariant_state_from_path(path, x_grid, lam, nonneg=False):
    """Evaluate an invariant-measure state draw from an existing Wiener path.

    The state at x is the path value at time x^(2 lam); the path must
    have sampled those times (build it on the union grid when comparing
    refinements, so shared points agree exactly).  With ``nonneg`` the
    modulus is taken, giving the nonnegative-cone variant.
    """
    x_grid = _check_times(x_grid, start_at_zero=True)
    vals = np.empty(x_grid.size)
    vals[0] = 0.0
    for i, x in enumerate(x_grid[1:], start=1):
        vals[i] = path.value_at(x ** (2.0 * lam))
    if nonneg:
        vals = np.abs(vals)
    return GridFunction(vals, zero_at_origin=True)


def sample_invariant_state(lam, x_grid, seed, index=0, nonneg=False):
    """Draw a state from the invariant measure of the linear semiflow.

    The draw is the time-changed Wiener path w(x^(2 lam)) on the grid,
    vanishing at the origin; marginal variance at x is x^(2 lam).
    """
    if lam <= 0.0:
        raise InvalidParameterError(f"need lam > 0, got {lam}")
    x_grid = _check_times(x_grid, start_at_zero=True)
    path = sample_wiener(x_grid[1:] ** (2.0 * lam), seed, index)
    vals = np.concatenate(([0.0], path.values))
    if nonneg:
        vals = np.abs(vals)
    return GridFunction(vals, zero_at_origin=True)


def sample_ou(lam, times, seed, index=0):
    """Stationary exponentially-correlated Gaussian trace on a time grid.

    Unit marginal variance, autocovariance e^(-lam |t - s|).  Built from
    the per-interval Wiener increments of the time-change construction,
    combined in exponentially weighted form (see module docstring), so
    arbitrarily long horizons stay finite.
    """
    if lam <= 0.0:
        raise InvalidParameterError(f"need lam > 0, got {lam}")
    times = _check_times(times, start_at_zero=False)
    rng = stream(seed, index)
    z = rng.standard_normal(times.size)
    dt = np.diff(times)
    decay = np.exp(-lam * dt)
    drive = np.concatenate(([z[0]], np.sqrt(-np.expm1(-2.0 * lam * dt)) * z[1:]))
    if dt.size and dt.max() - dt.min() <= 1e-9 * float(dt.mean()):
        # uniform up to rounding of the grid construction (arange grids
        # jitter by an ulp of the horizon): one linear recursion in C
        values = lfilter([1.0], [1.0, -decay[0]], drive)
    else:
        values = np.empty(times.size)
        values[0] = drive[0]
        for k in range(1, times.size):
            values[k] = decay[k - 1] * values[k - 1] + drive[k]
    return PathSample(times, values)


def ou_ensemble(lam, times, n_samples, seed):
    """Matrix of independent stationary traces, one row per sample index."""
    times = _check_times(times, start_at_zero=False)
    out = np.empty((n_samples, times.size))
    for i in range(n_samples):
        out[i] = sample_ou(lam, times, seed, index=i).values
    return out


def invariant_state_ensemble(lam, x_grid, n_samples, seed, nonneg=False, index_offset=0):
    """Matrix of independent invariant-measure draws, one row per sample."""
    x_grid = _check_times(x_grid, start_at_zero=True)
    out = np.empty((n_samples, x_grid.size))
    for i in range(n_samples):
        g = sample_invariant_state(lam, x_grid, seed, index=index_offset + i, nonneg=nonneg)
        out[i] = g.values
    return out


def empirical_autocov(values, times, tau):
    """Ensemble autocovariance estimate at lag tau with its standard error.

    ``values`` is an (n_samples, n_times) matrix on a common uniform
    grid.  Each sample contributes the time average of centered lagged
    products; the estimate is the mean over samples and the standard
    error is the sample spread divided by sqrt(n_samples).
    """
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    if values.ndim != 2 or values.shape[1] != times.size:
        raise InvalidParameterError("values must be (n_samples, n_times)")
    dt = times[1] - times[0]
    if np.abs(np.diff(times) - dt).max() > 1e-9:
        raise InvalidParameterError("autocovariance needs a uniform time grid")
    k = int(round(tau / dt))
    if abs(k * dt - tau) > 1e-9 or not 0 <= k < times.size:
        raise InvalidParameterError(f"lag {tau} is not resolved by the grid step {dt}")
    centered = values - values.mean()
    prods = centered[:, : times.size - k] * centered[:, k:] if k else centered * centered
    per_sample = prods.mean(axis=1)
    gamma = float(per_sample.mean())
    se = float(per_sample.std(ddof=1) / np.sqrt(values.shape[0]))
    return gamma, se


def sample_levy_field(points, seed, index=0):
    """One draw of the multiparameter Brownian field at the given points.

    The centered Gaussian field on R^d with covariance
    C(x, y) = (|x| + |y| - |x - y|) / 2 (it vanishes at the origin) is
    sampled by symmetric eigen-factorization of the covariance matrix;
    eigenvalues in [-1e-12, 0) are clipped to zero, anything lower is a
    factorization failure.  At most 2000 pairwise distinct points.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise InvalidParameterError("points must be an (m, d) array")
    m = pts.shape[0]
    if m > MAX_FIELD_POINTS:
        raise InvalidParameterError(f"at most {MAX_FIELD_POINTS} points, got {m}")
    if len(np.unique(pts, axis=0)) != m:
        raise InvalidParameterError("points must be pairwise distinct")
    norms = np.linalg.norm(pts, axis=1)
    gaps = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    cov = 0.5 * (norms[:, None] + norms[None, :] - gaps)
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals.min() < EIGENVALUE_CLIP:
        raise FactorizationError(
            f"covariance eigenvalue {eigvals.min()!r} below the clip {EIGENVALUE_CLIP}"
        )
    root = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))
    z = stream(seed, index).standard_normal(m)
    return root @ z
