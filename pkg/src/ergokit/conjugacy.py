"""Cosine change of coordinates between [0, L] and the angle interval [0, pi].

The substitution

    x = Phi(u) = (L/2) (1 - cos u),    u = Psi(x) = arccos(1 - 2x/L),

carries a calibrated unimodal map S on [0, L] to the conjugated map
S~ = Psi o S o Phi on [0, pi].  Densities transport with the weight
Psi'(x) = 1 / sqrt(x (L - x)), whose square-root endpoint singularities
are what the certifier's two expansion factors compensate.  The
conjugacy of the logistic map is the tent map rescaled to [0, pi],
which is why the logistic invariant density is the arcsine law.
"""

import math

import numpy as np

from .errors import InvalidParameterError
from .maps import make_custom_map
from .transfer import GridDensity


class ConjugacyPair:
    """Forward/inverse cosine parameterization for an interval [0, L].

    ``phi`` maps the angle interval [0, pi] onto [0, L]; ``psi`` is its
    inverse; ``psi_weight`` is the density transport weight psi'(x).
    ``alpha``/``alpha_inv`` expose the same change of coordinates
    parameterized over the unit interval (u = pi * s).
    """

    __slots__ = ("domain_length",)

    def __init__(self, domain_length):
        if not (np.isfinite(domain_length) and domain_length > 0):
            raise InvalidParameterError(f"domain length must be positive, got {domain_length}")
        self.domain_length = float(domain_length)

    def phi(self, u):
        L = self.domain_length
        return 0.5 * L * (1.0 - np.cos(u))

    def psi(self, x):
        # clamp the arccos argument against rounding at the endpoints
        arg = np.clip(1.0 - 2.0 * np.asarray(x, dtype=float) / self.domain_length, -1.0, 1.0)
        return np.arccos(arg)

    def psi_weight(self, x):
        x = np.asarray(x, dtype=float)
        return 1.0 / np.sqrt(x * (self.domain_length - x))

    def alpha(self, s):
        """Unit-interval form of phi: alpha(s) = phi(pi s), s in [0, 1]."""
        return self.phi(np.pi * np.asarray(s, dtype=float))

    def alpha_inv(self, x):
        return self.psi(x) / np.pi

    def __repr__(self):
        return f"ConjugacyPair(L={self.domain_length})"


def conjugate_map(m, pair=None):
    """The conjugated map S~ = Psi o S o Phi on [0, pi] as a MapSpec.

    The first derivative is supplied by the chain rule on the pair's
    primitives,

        S~'(u) = Psi'(S(x)) S'(x) Phi'(u),    x = Phi(u),
        Phi'(u) = (L/2) sin u,    Psi'(y) = 1 / sqrt(y (L - y)),

    whose magnitude extends continuously to the endpoints and to
    one-sided limits at the critical angle (where S~ has a kink);
    curvature evaluators are not carried over.

    The three calibration points u = 0, u_crit, pi are pinned to their
    exact images.  The outer arccos has infinite slope where its
    argument reaches +-1, so a one-ulp rounding error in S(Phi(u))
    there would smear the composition by ~sqrt(eps), far beyond the
    construction tolerance.
    """
    if pair is None:
        pair = ConjugacyPair(m.domain_length)
    L = m.domain_length
    u_crit = float(pair.psi(m.x_crit))

    def f(u):
        u_arr = np.asarray(u, dtype=float)
        y = np.clip(m._f(pair.phi(u_arr)), 0.0, L)
        out = np.asarray(pair.psi(y))
        out = np.where(u_arr == u_crit, math.pi, out)
        out = np.where((u_arr == 0.0) | (u_arr == math.pi), 0.0, out)
        return float(out) if np.ndim(u) == 0 else out

    def d1(u):
        u_arr = np.asarray(u, dtype=float)
        x = pair.phi(u_arr)
        y = np.clip(m._f(x), 0.0, L)
        slope = np.asarray(m._d1(x), dtype=float) * (0.5 * L) * np.sin(u_arr)
        out = slope / np.sqrt(np.maximum(y * (L - y), 1e-300))
        return float(out) if np.ndim(u) == 0 else out

    return make_custom_map(
        f=f,
        d1=d1,
        domain_length=math.pi,
        x_crit=u_crit,
        kind="conjugated-" + m.kind,
        params=dict(m.params),
        c3=False,
    )


def pushforward_density(density, pair):
    """Transport a grid density on [0, pi] to [0, L] through Phi.

    The mass of each target bin [a, b] equals the source mass carried on
    [Psi(a), Psi(b)]; for a piecewise constant source that overlap is
    computed exactly, so total mass is preserved to rounding.
    """
    if abs(density.domain_length - math.pi) > 1e-9:
        raise InvalidParameterError("source density must live on [0, pi]")
    n = density.n
    L = pair.domain_length
    target_edges = np.linspace(0.0, L, n + 1)
    u = np.asarray(pair.psi(target_edges), dtype=float)
    u[0], u[-1] = 0.0, math.pi

    # exact cdf of the piecewise constant source at arbitrary angles
    src_edges = density.edges
    cum = np.concatenate(([0.0], np.cumsum(density.masses)))
    k = np.clip(np.searchsorted(src_edges, u, side="right") - 1, 0, n - 1)
    frac = (u - src_edges[k]) / density.width
    cdf = cum[k] + density.masses[k] * frac
    cdf[-1] = 1.0

    masses = np.diff(cdf)
    return GridDensity(n, L, masses)
