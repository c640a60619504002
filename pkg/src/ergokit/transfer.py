"""Transfer operators for interval maps: exact pointwise action, Ulam
discretization, invariant densities, and time averages along orbits.

The transfer operator P of a piecewise monotone map S sends a density f
to

    P f(y) = sum over branch preimages x of y of  f(x) / |S'(x)|,

the density of the image measure.  Two discrete realizations are
provided.  ``apply_fp`` evaluates the sum directly (midpoint quadrature
on a grid density, exact pointwise on a callable).  ``ulam_matrix``
computes the row-stochastic matrix of exact preimage measures

    P[i, j] = |bin_i  intersect  S^{-1}(bin_j)| / |bin_i|,

which is the transfer operator restricted to piecewise constant
densities followed by exact re-binning; density iteration uses it.
"""

import math
import warnings

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidParameterError, OrbitCollapseWarning

POWER_ITERATION_TOL = 1e-12
POWER_ITERATION_MAX = 100_000


class GridDensity:
    """Per-bin masses of a probability density on a uniform partition of [0, L].

    Masses are nonnegative and sum to 1 within 1e-12.  ``renorm_defect``
    records how much mass an operation had to restore by renormalization
    (0.0 for directly constructed densities).
    """

    __slots__ = ("n", "domain_length", "masses", "renorm_defect")

    def __init__(self, n, domain_length, masses, renorm_defect=0.0):
        masses = np.array(masses, dtype=float)
        if masses.shape != (n,):
            raise InvalidParameterError(f"expected {n} masses, got shape {masses.shape}")
        if masses.min() < -1e-15:
            raise InvalidParameterError(f"negative bin mass {masses.min()!r}")
        np.clip(masses, 0.0, None, out=masses)
        total = masses.sum()
        if abs(total - 1.0) > 1e-12:
            raise InvalidParameterError(f"masses sum to {total!r}, not 1 within 1e-12")
        masses.setflags(write=False)
        self.n = int(n)
        self.domain_length = float(domain_length)
        self.masses = masses
        self.renorm_defect = float(renorm_defect)

    @property
    def edges(self):
        return np.linspace(0.0, self.domain_length, self.n + 1)

    @property
    def centers(self):
        w = self.domain_length / self.n
        return (np.arange(self.n) + 0.5) * w

    @property
    def width(self):
        return self.domain_length / self.n

    @property
    def heights(self):
        """Piecewise constant density values, mass / width."""
        return self.masses / self.width

    def __repr__(self):
        return f"GridDensity(n={self.n}, L={self.domain_length})"


def uniform_density(n, domain_length=1.0):
    return GridDensity(n, domain_length, np.full(n, 1.0 / n))


def bin_density(fn, n, domain_length=1.0):
    """Bin a nonnegative callable into a GridDensity (5-point Gauss per bin),
    normalized to unit mass."""
    nodes, weights = np.polynomial.legendre.leggauss(5)
    edges = np.linspace(0.0, domain_length, n + 1)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = np.asarray(fn(pts.ravel()), dtype=float).reshape(n, len(nodes))
    masses = half * (vals @ weights)
    return GridDensity(n, domain_length, masses / masses.sum())


# -- closed-form references ---------------------------------------------------

def arcsine_density(x):
    """Invariant density of the logistic map, 1 / (pi sqrt(x(1-x)))."""
    x = np.asarray(x, dtype=float)
    return 1.0 / (np.pi * np.sqrt(x * (1.0 - x)))


def arcsine_bin_masses(n):
    """Exact bin masses of the arcsine law on n uniform bins of [0, 1]."""
    edges = np.linspace(0.0, 1.0, n + 1)
    cdf = np.arcsin(2.0 * edges - 1.0) / np.pi
    return np.diff(cdf)


# -- Ulam discretization -------------------------------------------------------

class TransferMatrix:
    """Row-stochastic Ulam matrix of a map on n uniform bins of [0, L]."""

    __slots__ = ("n", "domain_length", "P")

    def __init__(self, n, domain_length, P):
        P = np.asarray(P, dtype=float)
        if P.shape != (n, n):
            raise InvalidParameterError(f"expected {n}x{n} matrix, got {P.shape}")
        rows = P.sum(axis=1)
        worst = np.abs(rows - 1.0).max()
        if worst > 1e-12:
            raise InvalidParameterError(f"row sums off by {worst!r}, beyond 1e-12")
        self.n = int(n)
        self.domain_length = float(domain_length)
        self.P = P

    def propagate(self, masses):
        return masses @ self.P

    def __repr__(self):
        return f"TransferMatrix(n={self.n}, L={self.domain_length})"


def _branch_preimage_nodes(m, br, edges):
    """Preimages of the bin edges within one monotone branch.

    Edge values at or beyond the branch image collapse to the branch
    endpoints, so consecutive nodes always tile the branch exactly.
    """
    lo_end = br.lo if br.increasing else br.hi
    hi_end = br.hi if br.increasing else br.lo
    ytop = float(m(hi_end))
    xs = np.empty(edges.size)
    for k, y in enumerate(edges):
        if y <= 0.0:
            xs[k] = lo_end
        elif y >= ytop:
            xs[k] = hi_end
        else:
            xs[k] = m._invert_on_branch(br, float(y))
    return xs


def ulam_matrix(m, n):
    """Exact-preimage Ulam matrix of the map on n uniform bins.

    Entry (i, j) is the fraction of bin i that S sends into bin j,
    computed from branch inverses of the bin edges; each row sums to 1.
    """
    if n < 1:
        raise InvalidParameterError("need at least one bin")
    L = m.domain_length
    edges = np.linspace(0.0, L, n + 1)
    w = L / n
    P = np.zeros((n, n))
    for br in m.branches:
        xs = _branch_preimage_nodes(m, br, edges)
        for j in range(n):
            u, v = (xs[j], xs[j + 1]) if br.increasing else (xs[j + 1], xs[j])
            if v <= u:
                continue
            i = min(int(u / w), n - 1)
            while i < n and edges[i] < v:
                ov = min(v, edges[i + 1]) - max(u, edges[i])
                if ov > 0.0:
                    P[i, j] += ov / w
                i += 1
    return TransferMatrix(n, L, P)


def invariant_density(tm, tol=POWER_ITERATION_TOL, max_iter=POWER_ITERATION_MAX, start=None):
    """Stationary density of an Ulam matrix by power iteration.

    Starts from the uniform density unless ``start`` is given and stops
    when the L1 change between successive iterates drops to ``tol``.
    Raises ``ConvergenceError`` carrying the last residual otherwise.
    """
    n = tm.n
    v = np.full(n, 1.0 / n) if start is None else start.masses.copy()
    delta = math.inf
    for it in range(1, max_iter + 1):
        vn = v @ tm.P
        vn /= vn.sum()
        delta = np.abs(vn - v).sum()
        v = vn
        if delta <= tol:
            return GridDensity(n, tm.domain_length, v)
    raise ConvergenceError(
        f"power iteration did not reach {tol} in {max_iter} iterations",
        residual=float(delta), iterations=max_iter,
    )


# -- direct operator action ----------------------------------------------------

def apply_fp(m, f):
    """Apply the transfer operator of ``m`` to ``f``.

    ``f`` may be a GridDensity (midpoint quadrature at bin centers; the
    output is renormalized to unit mass and the quadrature defect is
    stored in ``renorm_defect``) or a callable (returns the exact
    pointwise preimage sum as a new callable).  Preimages where the
    branch derivative vanishes (the tangent value y = L) carry infinite
    weight; in grid mode such nodes are skipped and the skipped mass is
    folded into the reported defect.
    """
    if isinstance(f, GridDensity):
        return _apply_fp_grid(m, f)
    if callable(f):
        return _apply_fp_callable(m, f)
    raise TypeError(f"cannot apply transfer operator to {type(f).__name__}")


def _apply_fp_grid(m, f):
    L = m.domain_length
    if abs(f.domain_length - L) > 1e-12 * max(1.0, L):
        raise DomainError(f"density lives on [0, {f.domain_length}], map on [0, {L}]")
    heights = f.heights
    w = f.width
    out = np.empty(f.n)
    for j, y in enumerate(f.centers):
        acc = 0.0
        for x, mag in m.branch_inverses(float(y)):
            if not math.isfinite(mag):
                continue
            idx = min(int(x / w), f.n - 1)
            acc += heights[idx] * mag
        out[j] = acc * w
    total = out.sum()
    if total <= 0.0:
        raise InvalidParameterError("transfer image carries no mass on the grid")
    return GridDensity(f.n, L, out / total, renorm_defect=1.0 - total)


def _apply_fp_callable(m, f):
    def image_density(x):
        def one(y):
            acc = 0.0
            for xx, mag in m.branch_inverses(float(y)):
                fv = float(f(xx))
                if fv != 0.0:
                    acc += fv * mag
            return acc

        if np.ndim(x) == 0:
            return one(float(x))
        return np.array([one(float(t)) for t in np.ravel(x)]).reshape(np.shape(x))

    return image_density


def iterate_density(m, f0, steps, reference, matrix=None):
    """Iterate the transfer operator on a grid density.

    Steps the bin masses with the exact-preimage Ulam matrix (the
    transfer operator restricted to piecewise constant densities) and
    records the L1 distance to ``reference`` after each step.

    Returns
    -------
    (GridDensity, ndarray)
        The final density and the per-step distances.
    """
    if matrix is None:
        matrix = ulam_matrix(m, f0.n)
    if reference.n != f0.n:
        raise InvalidParameterError("reference density must share the grid")
    v = f0.masses.copy()
    dist = np.empty(steps)
    for k in range(steps):
        v = matrix.propagate(v)
        v /= v.sum()
        dist[k] = np.abs(v - reference.masses).sum()
    return GridDensity(f0.n, f0.domain_length, v), dist


# -- time averages ---------------------------------------------------------------

def _fast_scalar_map(m):
    """Plain-float evaluator for tight orbit loops."""
    kind = m.kind
    if kind == "tent":
        return lambda x: 2.0 * x if x <= 0.5 else 2.0 - 2.0 * x
    if kind == "logistic":
        return lambda x: 4.0 * x * (1.0 - x)
    if kind == "cubic":
        c = m.params["c"]
        return lambda x: c * x * (1.0 - x * x)
    if kind == "beverton-holt":
        a, b = m.params["a"], m.params["b"]
        return lambda x: -a * x + b * x / (1.0 + x)
    if kind == "ricker":
        a, lam, K = m.params["a"], m.params["lam"], m.params["K"]
        return lambda x: a * x * math.expm1(lam * (K - x))
    return lambda x: float(m(x))


def log_slope_observable(m):
    """Observable x -> ln |S'(x)| as a plain-float callable."""
    kind = m.kind
    if kind == "tent":
        ln2 = math.log(2.0)
        return lambda x: ln2
    if kind == "logistic":
        return lambda x: math.log(abs(4.0 - 8.0 * x))
    d1 = m._d1
    return lambda x: math.log(abs(float(d1(np.asarray(x, dtype=float)))))


def birkhoff_average(m, x0, observable, n_iters, probe=1000):
    """Time average of ``observable`` along the forward orbit of x0.

    The first ``probe`` iterates are inspected for an exact revisit; a
    repeat means the floating-point orbit is eventually periodic (it has
    collapsed onto a fixed point or short cycle) and an
    ``OrbitCollapseWarning`` is issued before averaging anyway.
    """
    L = m.domain_length
    if not (0.0 <= x0 <= L):
        raise DomainError(f"x0 = {x0} outside [0, {L}]")
    step = _fast_scalar_map(m)
    seen = set()
    x = float(x0)
    for _ in range(probe):
        if x in seen:
            warnings.warn(
                "orbit revisits a point exactly; the floating-point orbit has "
                "collapsed and the time average reflects the collapsed cycle",
                OrbitCollapseWarning,
            )
            break
        seen.add(x)
        x = step(x)
    x = float(x0)
    acc = 0.0
    for _ in range(n_iters):
        acc += observable(x)
        x = step(x)
    return acc / n_iters
