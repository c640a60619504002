"""Expansion certificates for calibrated unimodal maps.

A smooth calibrated map S on [0, L] is conjugated by the cosine change
of coordinates to a piecewise monotone map S~ on [0, pi] whose slope
magnitude factors as

    |S~'(Psi(x))| = h1(x) h2(x),
    h1(x) = sqrt(x (L - x) / S(x)),     h2(x) = |S'(x)| / sqrt(L - S(x)).

When inf h1 h2 > 1 the conjugated map is uniformly expanding, which
certifies the statistical exactness (hence mixing and ergodicity) of S
with respect to its absolutely continuous invariant measure.  Both
factors have removable singularities: h1 at the endpoints (resolved with
the one-sided limits sqrt(L/S'(0)) and sqrt(L/-S'(L))) and h2 at the
critical point (limit sqrt(2 |S''(x_crit)|)).

The certificate is decided by a margin-adjusted grid infimum; two
analytic lower bounds are attached as corroborating evidence where they
apply: the curvature bound inf h2 >= sqrt(2 inf |S''|), and, for the
ricker family, the closed-form criterion lam - ln(1-lam) < c0 with c0
the positive root of 2c(2-c) = e^c - 1.
"""

import math
from dataclasses import dataclass, field, asdict
from functools import lru_cache

import numpy as np

from .conjugacy import conjugate_map
from .errors import KinkError, PreconditionError
from .maps import CALIBRATION_TOL


def _require_smooth(m):
    if not m.c3:
        raise PreconditionError(f"map kind {m.kind!r} is not C3; expansion factors undefined")
    if m.x_crit is None:
        raise PreconditionError("map has no interior critical point")


def edge_factor(m, x):
    """The endpoint expansion factor h1(x) = sqrt(x (L - x) / S(x)).

    Endpoint values use the limits sqrt(L / S'(0)) and sqrt(L / -S'(L)).
    Requires S'(0) > 0 and S'(L) < 0.
    """
    _require_smooth(m)
    L = m.domain_length
    s_lo = float(m._d1(np.asarray(0.0)))
    s_hi = float(m._d1(np.asarray(L)))
    if s_lo <= 0.0 or s_hi >= 0.0:
        raise PreconditionError(f"endpoint slopes must satisfy S'(0) > 0 > S'(L), got {s_lo}, {s_hi}")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    interior = (x > 0.0) & (x < L)
    xi = x[interior]
    out[interior] = np.sqrt(xi * (L - xi) / np.asarray(m._f(xi), dtype=float))
    out[x <= 0.0] = math.sqrt(L / s_lo)
    out[x >= L] = math.sqrt(L / -s_hi)
    return float(out[0]) if scalar else out


def peak_factor(m, x):
    """The critical-point expansion factor h2(x) = |S'(x)| / sqrt(L - S(x)).

    At (and within rounding of) the critical point the removable-
    singularity limit sqrt(2 |S''(x_crit)|) is substituted.  Requires
    S''(x_crit) < 0.
    """
    _require_smooth(m)
    L = m.domain_length
    curv = _peak_curvature(m)
    limit = math.sqrt(2.0 * -curv)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    gap = L - np.asarray(m._f(x), dtype=float)
    slope = np.abs(np.asarray(m._d1(x), dtype=float))
    # below the calibration tolerance the computed gap is indistinguishable
    # from 0 and the direct quotient is mostly cancellation noise; the
    # substituted limit is off by O(sqrt(gap)) there, ~1e-5 relative
    floor = 1e-10 * max(1.0, L)
    safe = gap > floor
    out = np.full_like(x, limit)
    out[safe] = slope[safe] / np.sqrt(gap[safe])
    return float(out[0]) if scalar else out


def _peak_curvature(m):
    try:
        curv = float(m.derivative(m.x_crit, order=2))
    except (KinkError, NotImplementedError) as exc:
        raise PreconditionError(f"second derivative unavailable at the critical point: {exc}") from None
    if not curv < 0.0:
        raise PreconditionError(f"need S''(x_crit) < 0, got {curv}")
    return curv


def expansion_factor(m, x):
    """h1(x) h2(x), the slope magnitude of the conjugated map at Psi(x)."""
    return edge_factor(m, x) * peak_factor(m, x)


@dataclass(frozen=True)
class InfimumBound:
    """Grid infimum of h1 h2 with its Lipschitz safety margin."""

    raw_infimum: float
    safety_margin: float
    inf_bound: float
    grid_size: int
    argmin_x: float


def inf_h_product(m, grid_size=100_000):
    """Margin-adjusted lower bound for inf h1 h2 over [0, L].

    The product is evaluated on a uniform grid plus the critical point
    (endpoints and the critical point get their singularity limits) and
    the margin Lambda * (L / grid_size) is subtracted, where Lambda is
    twice the largest adjacent difference quotient over the uniform
    pairs.  The critical point enters the value scan only: its distance
    to the nearest node can be arbitrarily small, and a quotient over
    that gap would measure cancellation noise instead of the slope.
    """
    if grid_size < 1000:
        raise PreconditionError(f"grid size must be at least 1e3, got {grid_size}")
    L = m.domain_length
    xs = np.linspace(0.0, L, grid_size + 1)
    h = expansion_factor(m, xs)
    quot = np.abs(np.diff(h)) * (grid_size / L)
    margin = 2.0 * float(quot.max()) * (L / grid_size)
    x_crit = float(m.x_crit)
    h_crit = float(expansion_factor(m, x_crit))
    k = int(np.argmin(h))
    raw, arg = float(h[k]), float(xs[k])
    if h_crit < raw:
        raw, arg = h_crit, x_crit
    return InfimumBound(
        raw_infimum=raw,
        safety_margin=margin,
        inf_bound=raw - margin,
        grid_size=int(grid_size),
        argmin_x=arg,
    )


@dataclass(frozen=True)
class CurvatureBound:
    """Analytic lower bound for h2 from the curvature mean value argument."""

    value: float
    degenerate: bool


def cauchy_h2_bound(m, grid_size=10_000):
    """Lower bound inf h2 >= sqrt(2 inf |S''|) on [0, L].

    Degenerates (returns value 0 and a flag) when the curvature vanishes
    somewhere on the interval, as for the cubic model at x = 0.  For the
    ricker family the argument additionally assumes lam K < 2, which
    keeps S'' strictly negative; violations are rejected.
    """
    _require_smooth(m)
    if m.kind == "ricker":
        lam, K = m.params["lam"], m.params["K"]
        if lam * K >= 2.0:
            raise PreconditionError(f"curvature bound assumes lam*K < 2, got {lam * K}")
    xs = np.linspace(0.0, m.domain_length, grid_size + 1)
    try:
        curv = np.abs(np.asarray(m.derivative(xs, order=2), dtype=float))
    except (KinkError, NotImplementedError) as exc:
        raise PreconditionError(f"second derivative unavailable: {exc}") from None
    low = float(curv.min())
    if low <= 1e-9:
        return CurvatureBound(value=0.0, degenerate=True)
    return CurvatureBound(value=math.sqrt(2.0 * low), degenerate=False)


@lru_cache(maxsize=1)
def _criterion_constant():
    # positive root of 2c(2-c) = e^c - 1 by bisection
    g = lambda c: 2.0 * c * (2.0 - c) - math.expm1(c)
    lo, hi = 0.5, 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RickerCriterion:
    """Closed-form sufficient criterion for the ricker family."""

    c0: float
    value: float
    satisfied: bool


def ricker_criterion(lam):
    """Evaluate the closed-form expansion criterion lam - ln(1-lam) < c0.

    c0 is the positive root of 2c(2-c) = e^c - 1; the left side equals
    lam K, so satisfaction guarantees inf h1 h2 > 1 analytically.
    """
    if not 0.0 < lam < 1.0:
        raise PreconditionError(f"ricker criterion needs 0 < lam < 1, got {lam}")
    c0 = _criterion_constant()
    value = lam - math.log1p(-lam)
    return RickerCriterion(c0=c0, value=value, satisfied=value < c0)


def ricker_lambda_threshold():
    """The growth exponent at which the closed-form criterion becomes equality."""
    c0 = _criterion_constant()
    q = lambda lam: lam - math.log1p(-lam) - c0
    lo, hi = 1e-6, 1.0 - 1e-9
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if q(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of an exactness certification run."""

    map_kind: str
    params: dict
    status: str  # "certified" | "inconclusive" | "precondition-failed"
    grid_size: int
    raw_infimum: float = None
    safety_margin: float = None
    inf_bound: float = None
    argmin_x: float = None
    method: str = "direct-grid"
    preconditions: dict = field(default_factory=dict)
    curvature_bound: dict = None
    criterion: dict = None
    conjugated_min_slope_fd: float = None
    notes: tuple = ()

    def to_dict(self):
        return asdict(self)


def _check_preconditions(m, probe=4096):
    """Sign checks behind the certificate: smoothness, endpoint slopes,
    negative curvature at the peak, single-peak monotonicity."""
    flags = {}
    flags["c3"] = bool(m.c3) and m.x_crit is not None
    if not flags["c3"]:
        return flags
    L, xc = m.domain_length, m.x_crit
    s_lo = float(m._d1(np.asarray(0.0)))
    s_hi = float(m._d1(np.asarray(L)))
    flags["endpoint_slopes"] = s_lo > 0.0 and s_hi < 0.0
    try:
        flags["negative_peak_curvature"] = _peak_curvature(m) < 0.0
    except PreconditionError:
        flags["negative_peak_curvature"] = False
    pad = 0.5 * L / probe
    left = np.linspace(pad, xc - pad, probe // 2)
    right = np.linspace(xc + pad, L - pad, probe // 2)
    d_left = np.asarray(m._d1(left), dtype=float)
    d_right = np.asarray(m._d1(right), dtype=float)
    flags["unimodal"] = bool(np.all(d_left > 0.0) and np.all(d_right < 0.0))
    flags["onto_branches"] = (
        abs(float(m._f(np.asarray(0.0)))) <= CALIBRATION_TOL
        and abs(float(m._f(np.asarray(L)))) <= CALIBRATION_TOL
        and abs(float(m._f(np.asarray(xc))) - L) <= CALIBRATION_TOL
    )
    return flags


def _conjugated_min_slope(m, probe=1000):
    """Central finite differences of the conjugated map, min |S~'| over a probe grid."""
    sm = conjugate_map(m)
    u = np.linspace(0.0, math.pi, probe + 2)[1:-1]
    du = 1e-6
    hi = np.asarray(sm._f(np.minimum(u + du, math.pi)))
    lo = np.asarray(sm._f(np.maximum(u - du, 0.0)))
    return float(np.min(np.abs(hi - lo) / (2.0 * du)))


def certify_exactness(m, grid_size=100_000):
    """Run the full certification pipeline on a calibrated map.

    Returns a CertificateReport.  ``status`` is "certified" exactly when
    all precondition flags pass and the margin-adjusted grid infimum of
    h1 h2 exceeds 1; a nonpositive margin-adjusted bound with passing
    preconditions is "inconclusive" (the criterion is sufficient, never
    necessary).  The curvature bound and, for ricker maps, the
    closed-form criterion are attached as corroborating evidence and do
    not override the grid decision.
    """
    flags = _check_preconditions(m)
    notes = []
    if not all(flags.values()):
        failed = sorted(k for k, v in flags.items() if not v)
        notes.append(f"failed precondition checks: {', '.join(failed)}")
        return CertificateReport(
            map_kind=m.kind,
            params=dict(m.params),
            status="precondition-failed",
            grid_size=int(grid_size),
            preconditions=flags,
            notes=tuple(notes),
        )
    bound = inf_h_product(m, grid_size)
    try:
        curv = asdict(cauchy_h2_bound(m))
    except PreconditionError as exc:
        curv = None
        notes.append(f"curvature bound not applicable: {exc}")
    criterion = None
    if m.kind == "ricker":
        crit = ricker_criterion(m.params["lam"])
        criterion = asdict(crit)
        if not crit.satisfied:
            notes.append("closed-form criterion not satisfied; grid infimum decides")
    status = "certified" if bound.inf_bound > 1.0 else "inconclusive"
    if status == "inconclusive":
        notes.append(
            "margin-adjusted infimum does not exceed 1; expansion of the "
            "conjugated map is not established at this grid size"
        )
    return CertificateReport(
        map_kind=m.kind,
        params=dict(m.params),
        status=status,
        grid_size=bound.grid_size,
        raw_infimum=bound.raw_infimum,
        safety_margin=bound.safety_margin,
        inf_bound=bound.inf_bound,
        argmin_x=bound.argmin_x,
        preconditions=flags,
        curvature_bound=curv,
        criterion=criterion,
        conjugated_min_slope_fd=_conjugated_min_slope(m),
        notes=tuple(notes),
    )
