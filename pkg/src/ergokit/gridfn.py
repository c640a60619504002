"""Sampled functions on a uniform grid over [0, 1].

The semiflow state space is the set of continuous functions on [0, 1]
vanishing at the origin; states are carried as values on a uniform grid
including both endpoints, with monotone cubic interpolation between
nodes (pchip, which never overshoots the local data range).
"""

import numpy as np
from scipy.interpolate import PchipInterpolator


class GridFunction:
    """Values of a function on np.linspace(0, 1, n).

    Parameters
    ----------
    values : array_like
        Function values at the grid nodes, length >= 2.
    zero_at_origin : bool
        When True (the default for semiflow states) the first value must
        be exactly 0.
    """

    __slots__ = ("values", "zero_at_origin")

    def __init__(self, values, zero_at_origin=True):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ValueError("GridFunction needs a 1-d array of at least 2 values")
        if zero_at_origin and values[0] != 0.0:
            raise ValueError(f"state tagged zero-at-origin has v(0) = {values[0]!r}")
        self.values = values
        self.zero_at_origin = bool(zero_at_origin)

    @property
    def n(self):
        return self.values.size

    @property
    def grid(self):
        return np.linspace(0.0, 1.0, self.values.size)

    def interpolator(self):
        """Monotone cubic interpolant of the sampled values."""
        return PchipInterpolator(self.grid, self.values)

    def __call__(self, x):
        return self.interpolator()(x)

    def __repr__(self):
        return f"GridFunction(n={self.n}, zero_at_origin={self.zero_at_origin})"
