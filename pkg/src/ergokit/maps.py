"""Catalog of unimodal interval maps used throughout the package.

Every map S acts on a closed interval [0, L], sends both endpoints to 0,
and rises to the value L at a single interior critical point x_crit, so
that S maps [0, L] onto itself with exactly two monotone branches.  The
catalog covers the classical test maps (tent, logistic) and three
calibrated population models (cubic, Beverton-Holt, Ricker) whose free
constants are fixed so the onto-calibration S(x_crit) = L holds exactly.

Calibrations
------------
tent           S(x) = 2x on [0, 1/2], 2 - 2x on (1/2, 1]
logistic       S(x) = 4x(1-x) on [0, 1]
cubic          S(x) = c x (1 - x^2),  c = 3*sqrt(3)/2,  x_crit = sqrt(3)/3
beverton-holt  S(x) = -a x + b x/(1+x) on [0, K],
               a = K/(sqrt(K+1)-1)^2, b = (K+1) a, x_crit = sqrt(K+1)-1
ricker         S(x) = a x (exp(lam (K-x)) - 1) on [0, K],
               K = 1 - ln(1-lam)/lam, a = (1-lam) K/lam, x_crit = 1

The tent map is calibrated but only piecewise linear; its ``c3`` flag is
False and curvature queries at the kink raise ``KinkError``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import CalibrationError, DomainError, InvalidParameterError, KinkError

# Calibration identities are enforced at construction to this tolerance.
CALIBRATION_TOL = 1e-10

# Absolute tolerance for branch inversion, |S(x) - y| driven below this via x.
INVERSE_TOL = 1e-12


@dataclass(frozen=True)
class Branch:
    """One maximal open interval of monotonicity of a map."""

    lo: float
    hi: float
    increasing: bool


@dataclass(frozen=True)
class MapSpec:
    """A calibrated interval map with analytic derivative evaluators.

    Instances are produced by the factory functions in this module
    (``tent_map`` etc.) or by ``make_custom_map``; the constructor itself
    performs the calibration checks S(0) = 0, S(L) = 0 and, when a critical
    point is declared, S(x_crit) = L, all to ``CALIBRATION_TOL``.

    Attributes
    ----------
    kind : str
        Catalog identifier ("tent", "logistic", "cubic", "beverton-holt",
        "ricker", or "custom").
    domain_length : float
        Right endpoint L of the domain [0, L].
    params : dict
        Raw calibration parameters the map was built from.
    x_crit : float or None
        Interior critical point where S attains the value L.
    c3 : bool
        True when the map is three times continuously differentiable on
        (0, L); the exactness certifier requires this.
    branches : tuple of Branch
        The monotone branches, left to right.
    """

    kind: str
    domain_length: float
    params: dict
    x_crit: float
    c3: bool
    branches: tuple
    _f: callable = field(repr=False)
    _d1: callable = field(repr=False)
    _d2: callable = field(repr=False, default=None)
    _d3: callable = field(repr=False, default=None)

    def __post_init__(self):
        L = self.domain_length
        if not (np.isfinite(L) and L > 0):
            raise InvalidParameterError(f"domain length must be positive, got {L}")
        for x, target, label in ((0.0, 0.0, "S(0)"), (L, 0.0, "S(L)")):
            val = float(self._f(x))
            if abs(val - target) > CALIBRATION_TOL:
                raise CalibrationError(f"{label} = {val:.3e}, expected {target} within {CALIBRATION_TOL}")
        if self.x_crit is not None:
            peak = float(self._f(self.x_crit))
            if abs(peak - L) > CALIBRATION_TOL:
                raise CalibrationError(
                    f"S(x_crit) = {peak!r} misses the domain length {L!r} beyond {CALIBRATION_TOL}"
                )

    # -- evaluation ---------------------------------------------------------

    def _check_domain(self, x):
        x = np.asarray(x, dtype=float)
        L = self.domain_length
        fringe = 1e-12 * max(1.0, L)
        if np.any(x < -fringe) or np.any(x > L + fringe):
            bad = x[(x < -fringe) | (x > L + fringe)]
            raise DomainError(f"point(s) outside [0, {L}]: {np.atleast_1d(bad)[:3]}")
        # clip the rounding fringe so composed evaluations stay legal
        return np.clip(x, 0.0, L)

    def __call__(self, x):
        """Evaluate S(x); accepts scalars or arrays, raises DomainError outside [0, L]."""
        x = self._check_domain(x)
        out = self._f(x)
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, x, order=1):
        """Evaluate an analytic derivative of S.

        Parameters
        ----------
        x : float or array_like
            Points in [0, L].
        order : int
            1, 2 or 3.  Orders above the map's smoothness raise
            ``KinkError`` at the kink; unsupported evaluators raise
            ``NotImplementedError``.
        """
        x = self._check_domain(x)
        dfun = {1: self._d1, 2: self._d2, 3: self._d3}.get(order)
        if dfun is None:
            raise NotImplementedError(f"order-{order} derivative not available for kind {self.kind!r}")
        out = dfun(x)
        return float(out) if np.ndim(out) == 0 else out

    # -- branch inversion ---------------------------------------------------

    def branch_inverses(self, y):
        """All preimages of y under S, one per monotone branch.

        Returns a list of ``(x, magnitude)`` pairs where ``magnitude`` is
        ``1/|S'(x)|``, the weight each preimage carries under the transfer
        operator.  At the tangent value y = L the two branches meet at the
        critical point: a smooth peak has S'(x_crit) = 0 and a single
        ``(x_crit, inf)`` entry is returned, while a kink (tent-like peak)
        yields one entry per branch carrying the finite one-sided weight.

        Each solution satisfies |S(x) - y| <= INVERSE_TOL in the bracketed
        sense (closed forms for tent and logistic, polynomial root isolation
        for the cubic, bracketed root refinement otherwise).
        """
        L = self.domain_length
        fringe = 1e-12 * max(1.0, L)
        if y < -fringe or y > L + fringe:
            raise DomainError(f"value {y} outside the map range [0, {L}]")
        y = min(max(float(y), 0.0), L)
        if y == L and self.x_crit is not None:
            try:
                self._d1(np.asarray(self.x_crit, dtype=float))
            except KinkError:
                # finite one-sided slopes at a kinked peak, one entry per side
                eps = 1e-9 * max(1.0, L)
                return [
                    (self.x_crit,
                     self._inverse_magnitude(self.x_crit - eps if br.increasing
                                             else self.x_crit + eps))
                    for br in self.branches
                ]
            # a differentiable interior peak is a tangency
            return [(self.x_crit, math.inf)]
        out = []
        for br in self.branches:
            x = self._invert_on_branch(br, y)
            if x is None:
                continue
            out.append((x, self._inverse_magnitude(x)))
        return out

    def _inverse_magnitude(self, x):
        try:
            slope = abs(float(self._d1(np.asarray(x, dtype=float))))
        except KinkError:
            # kink interior to a linear branch cannot happen; endpoint case
            slope = 0.0
        return 1.0 / slope if slope > 0.0 else math.inf

    def _invert_on_branch(self, br, y):
        lo, hi = br.lo, br.hi
        # endpoint images are exact by calibration
        if y == 0.0:
            return lo if br.increasing else hi
        kind = self.kind
        if kind == "tent":
            return 0.5 * y if br.increasing else 1.0 - 0.5 * y
        if kind == "logistic":
            root = math.sqrt(max(0.0, 1.0 - y))
            return 0.5 * (1.0 - root) if br.increasing else 0.5 * (1.0 + root)
        if kind == "cubic":
            c = self.params["c"]
            roots = np.roots([-c, 0.0, c, -y])
            real = [float(r.real) for r in roots if abs(r.imag) < 1e-9]
            inside = [r for r in real if lo - 1e-9 <= r <= hi + 1e-9]
            if not inside:
                return None
            x = min(max(inside[0], lo), hi)
            return self._polish(x, y, lo, hi)
        return self._bracketed_root(y, lo, hi)

    def _polish(self, x, y, lo, hi):
        # a couple of Newton corrections; isolation already put x in the branch
        for _ in range(3):
            slope = float(self._d1(np.asarray(x)))
            if slope == 0.0:
                break
            step = (float(self._f(np.asarray(x))) - y) / slope
            x = min(max(x - step, lo), hi)
            if abs(step) < 0.25 * INVERSE_TOL:
                break
        return x

    def _bracketed_root(self, y, lo, hi):
        f = lambda x: float(self._f(np.asarray(x, dtype=float))) - y
        flo, fhi = f(lo), f(hi)
        if flo == 0.0:
            return lo
        if fhi == 0.0:
            return hi
        if flo * fhi > 0.0:
            # y above the branch maximum by less than the calibration slack
            if self.x_crit is not None and y >= self.domain_length - 10 * CALIBRATION_TOL:
                return float(self.x_crit)
            return None
        return brentq(f, lo, hi, xtol=INVERSE_TOL, rtol=4 * np.finfo(float).eps)


def _two_branches(x_crit, L):
    return (Branch(0.0, x_crit, True), Branch(x_crit, L, False))


def tent_map():
    """The tent map on [0, 1]: slope 2 up to 1/2, slope -2 after.

    Piecewise linear, so curvature queries at the kink x = 1/2 raise
    ``KinkError`` and the map is flagged non-C3.
    """

    def f(x):
        return np.where(x <= 0.5, 2.0 * x, 2.0 - 2.0 * x)

    def make_deriv(val_left, val_right):
        def d(x):
            at_kink = np.asarray(x) == 0.5
            if np.any(at_kink):
                raise KinkError("tent map is not differentiable at x = 1/2")
            return np.where(np.asarray(x) < 0.5, val_left, val_right)

        return d

    return MapSpec(
        kind="tent",
        domain_length=1.0,
        params={},
        x_crit=0.5,
        c3=False,
        branches=_two_branches(0.5, 1.0),
        _f=f,
        _d1=make_deriv(2.0, -2.0),
        _d2=make_deriv(0.0, 0.0),
        _d3=make_deriv(0.0, 0.0),
    )


def logistic_map():
    """The logistic map S(x) = 4x(1-x) on [0, 1]."""
    return MapSpec(
        kind="logistic",
        domain_length=1.0,
        params={},
        x_crit=0.5,
        c3=True,
        branches=_two_branches(0.5, 1.0),
        _f=lambda x: 4.0 * x * (1.0 - x),
        _d1=lambda x: 4.0 - 8.0 * x,
        _d2=lambda x: np.full_like(np.asarray(x, dtype=float), -8.0),
        _d3=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
    )


def cubic_map():
    """The calibrated cubic model S(x) = c x (1 - x^2) with c = 3*sqrt(3)/2.

    The coefficient is the unique one for which the interior maximum at
    x_crit = sqrt(3)/3 reaches the top of the unit interval.
    """
    c = 1.5 * math.sqrt(3.0)
    x_crit = math.sqrt(3.0) / 3.0
    return MapSpec(
        kind="cubic",
        domain_length=1.0,
        params={"c": c},
        x_crit=x_crit,
        c3=True,
        branches=_two_branches(x_crit, 1.0),
        _f=lambda x: c * x * (1.0 - x * x),
        _d1=lambda x: c * (1.0 - 3.0 * x * x),
        _d2=lambda x: -6.0 * c * x,
        _d3=lambda x: np.full_like(np.asarray(x, dtype=float), -6.0 * c),
    )


def beverton_holt_map(K):
    """Compensatory growth with linear harvesting on [0, K].

    S(x) = -a x + b x / (1 + x) with a, b calibrated from the domain
    length K so that S(0) = S(K) = 0 and S peaks at K.

    Parameters
    ----------
    K : float
        Domain length (carrying scale), K > 0.
    """
    if not (np.isfinite(K) and K > 0):
        raise InvalidParameterError(f"beverton-holt needs K > 0, got {K}")
    root = math.sqrt(K + 1.0)
    a = K / (root - 1.0) ** 2
    b = (K + 1.0) * a
    x_crit = root - 1.0
    return MapSpec(
        kind="beverton-holt",
        domain_length=float(K),
        params={"K": float(K), "a": a, "b": b},
        x_crit=x_crit,
        c3=True,
        branches=_two_branches(x_crit, float(K)),
        _f=lambda x: -a * x + b * x / (1.0 + x),
        _d1=lambda x: -a + b / (1.0 + x) ** 2,
        _d2=lambda x: -2.0 * b / (1.0 + x) ** 3,
        _d3=lambda x: 6.0 * b / (1.0 + x) ** 4,
    )


def ricker_map(lam):
    """Overcompensatory growth with harvesting on [0, K].

    S(x) = a x (exp(lam (K - x)) - 1), with K = 1 - ln(1-lam)/lam and
    a = (1-lam) K / lam so that the maximum sits at x_crit = 1 with
    S(1) = K.

    Parameters
    ----------
    lam : float
        Growth exponent, 0 < lam < 1.
    """
    if not (np.isfinite(lam) and 0.0 < lam < 1.0):
        raise InvalidParameterError(f"ricker needs 0 < lam < 1, got {lam}")
    K = 1.0 - math.log1p(-lam) / lam
    a = (1.0 - lam) * K / lam
    return MapSpec(
        kind="ricker",
        domain_length=K,
        params={"lam": float(lam), "K": K, "a": a},
        x_crit=1.0,
        c3=True,
        branches=_two_branches(1.0, K),
        _f=lambda x: a * x * np.expm1(lam * (K - x)),
        _d1=lambda x: -a + a * (1.0 - lam * x) * np.exp(lam * (K - x)),
        _d2=lambda x: lam * a * (lam * x - 2.0) * np.exp(lam * (K - x)),
        _d3=lambda x: lam * lam * a * (3.0 - lam * x) * np.exp(lam * (K - x)),
    )


def make_custom_map(f, d1, domain_length, x_crit, d2=None, d3=None, c3=False,
                    branches=None, kind="custom", params=None):
    """Wrap user-supplied evaluators as a MapSpec.

    ``f`` and ``d1`` must accept numpy arrays.  The calibration checks of
    MapSpec still apply, so f(0) = f(L) = 0 and f(x_crit) = L are required.
    """
    if branches is None:
        branches = _two_branches(float(x_crit), float(domain_length))
    return MapSpec(
        kind=kind,
        domain_length=float(domain_length),
        params=dict(params or {}),
        x_crit=x_crit,
        c3=c3,
        branches=tuple(branches),
        _f=f,
        _d1=d1,
        _d2=d2,
        _d3=d3,
    )


_FACTORIES = {
    "tent": tent_map,
    "logistic": logistic_map,
    "cubic": cubic_map,
    "beverton-holt": beverton_holt_map,
    "beverton_holt": beverton_holt_map,
    "ricker": ricker_map,
}


def make_catalog_map(kind, **params):
    """Build a catalog map by name.

    Parameters
    ----------
    kind : str
        One of "tent", "logistic", "cubic", "beverton-holt", "ricker".
    **params
        Calibration parameters: K for beverton-holt, lam for ricker.
        "lambda" is accepted as an alias for lam.
    """
    factory = _FACTORIES.get(kind)
    if factory is None:
        raise InvalidParameterError(f"unknown map kind {kind!r}; choose from {sorted(set(_FACTORIES) - {'beverton_holt'})}")
    if "lambda" in params:
        params["lam"] = params.pop("lambda")
    try:
        return factory(**params)
    except TypeError as exc:
        raise InvalidParameterError(f"bad parameters for {kind!r}: {exc}") from None
