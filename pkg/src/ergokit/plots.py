"""Batch plot emitters: density histograms, autocovariance decay, and
trajectory heat maps, written as self-contained vector files.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import InvalidParameterError


def _save(fig, path):
    try:
        fig.savefig(path)
    finally:
        plt.close(fig)


def plot_density(density, path, overlay=None, overlay_label=None, title=None):
    """Step plot of bin heights, with an optional closed-form overlay
    (a callable density evaluated on a fine grid)."""
    if density.n < 1:
        raise InvalidParameterError("empty density")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.stairs(density.heights, density.edges, fill=True, alpha=0.45, label="estimated")
    if overlay is not None:
        # keep clear of the endpoints, the reference may blow up there
        xs = np.linspace(density.edges[0], density.edges[-1], 2001)[1:-1]
        ax.plot(xs, [overlay(x) for x in xs], "k-", lw=1.2,
                label=overlay_label or "closed form")
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    ax.legend(loc="best")
    _save(fig, path)


def plot_autocov(report, path, title=None):
    """Autocovariance estimates against the exponential decay of the
    stationary boundary process."""
    if not report.lags:
        raise InvalidParameterError("empty lag grid")
    lags = np.asarray(report.lags)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(lags, report.gamma, "o", label="estimated")
    taus = np.linspace(0.0, lags.max(), 400)
    ax.plot(taus, report.gamma0 * np.exp(-report.lam * taus), "k-", lw=1.2,
            label="gamma(0) exp(-lam tau)")
    ax.axhline(report.noise_floor, color="gray", ls=":", lw=1.0, label="noise floor")
    ax.set_xlabel("lag")
    ax.set_ylabel("autocovariance")
    if title:
        ax.set_title(title)
    ax.legend(loc="best")
    _save(fig, path)


def plot_trajectory(times, grid, frames, path, title=None):
    """Space-time heat map of semiflow frames (rows indexed by time)."""
    frames = np.asarray(frames, dtype=float)
    if frames.size == 0:
        raise InvalidParameterError("empty trajectory")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    mesh = ax.pcolormesh(np.asarray(grid), np.asarray(times), frames, shading="auto")
    fig.colorbar(mesh, ax=ax, label="value")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    if title:
        ax.set_title(title)
    _save(fig, path)
