"""Sampling the invariant measure of the chaotic semiflow.

The flow's invariant measure is Gaussian: a state drawn from it is a
time-changed Wiener path w(x^(2 lam)), and its boundary trace is the
stationary exponentially-correlated process.  This script draws paths
and states, verifies the advertised moments against ensemble
statistics, runs the stationarity test with a deliberately broken
control, and produces the turbulence report for the trace.

Run from the repository root:

    python demos/gaussian_measures.py

Figures land in demos/output/.
"""

import math
import pathlib

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

import ergokit as ek
from ergokit import plots

OUT = pathlib.Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)
SEED = 20260819


def section(label):
    print()
    print(label)
    print("-" * len(label))


# -- Wiener paths and invariant states ------------------------------------------

section("draws from the invariant measure (lam = 0.8)")
lam = 0.8
grid = np.linspace(0.0, 1.0, 801)
fig, ax = plt.subplots(figsize=(6.0, 4.0))
for i in range(6):
    state = ek.sample_invariant_state(lam, grid, seed=SEED, index=i)
    ax.plot(grid, state.values, lw=0.9)
ax.set_xlabel("x")
ax.set_ylabel("v(x)")
ax.set_title("six draws, all pinned to v(0) = 0")
fig.savefig(OUT / "invariant_states.svg")
plt.close(fig)
print(f"wrote {OUT / 'invariant_states.svg'}")

# moment checks against the closed forms
n = 3000
ens = ek.invariant_state_ensemble(lam, grid, n, seed=SEED)
var_emp = ens.var(axis=0, ddof=1)
var_exact = grid ** (2.0 * lam)
se = var_exact * math.sqrt(2.0 / (n - 1)) + 1e-12
worst = np.max(np.abs(var_emp - var_exact) / se)
print(f"marginal variance x^(2 lam): worst |z| over the grid = {worst:.2f}")
i, j = 300, 650
cov_emp = np.mean(ens[:, i] * ens[:, j])
cov_exact = min(grid[i], grid[j]) ** (2.0 * lam)
print(f"joint moment at ({grid[i]:.3f}, {grid[j]:.3f}): "
      f"estimate {cov_emp:.4f}, min(x,y)^(2 lam) = {cov_exact:.4f}")

# -- the boundary trace is the stationary exponentially-correlated process ------

section("trace autocovariance against e^(-lam tau)")
times = np.arange(0.0, 40.0, 0.05)
ens = ek.ou_ensemble(lam, times, 300, seed=SEED + 1)
print("lag tau   estimate   e^(-lam tau)   z")
for tau in (0.0, 0.5, 1.0, 2.0, 4.0):
    gamma, se = ek.empirical_autocov(ens, times, tau)
    exact = math.exp(-lam * tau)
    print(f"{tau:7.2f}   {gamma:8.4f}   {exact:12.4f}   {(gamma - exact) / se:+5.2f}")

# -- stationarity: pushing draws through the flow preserves their law -----------

section("stationarity test (two-ensemble moment comparison)")
res = ek.stationarity_test(lam, t=1.25, n_samples=3000, seed=SEED + 2)
print(f"matched flow : max |z| = {res.max_abs_z:.2f}, stationary = {res.stationary}")
broken = ek.stationarity_test(lam, t=1.25, n_samples=3000, seed=SEED + 2,
                              push_lam=2.0 * lam)
print(f"wrong flow   : max |z| = {broken.max_abs_z:.2f}, stationary = {broken.stationary}")
print("pushing with the wrong exponent rescales the ensemble and the")
print("variance probes reject it immediately")

# -- the turbulence report -------------------------------------------------------

section("turbulence report (lam = 0.8, horizon 400)")
rep = ek.turbulence_report(lam, seed=SEED + 3, horizon=400.0, probe_x=(1.0, 0.5))
print(f"trace mean          : {rep.trace_mean:+.4f}")
print(f"gamma(0)            : {rep.gamma0:.4f} (exact value 1)")
print(f"noise floor         : {rep.noise_floor:.4f}")
print(f"gamma0 significant  : {rep.gamma0_significant}")
print(f"tail decays         : {rep.tail_decays}")
for x, gamma_x in rep.pointwise.items():
    print(f"pointwise at x = {x}: gamma(0) = {gamma_x[0]:.4f} "
          f"(exact x^(2 lam) = {x ** (2.0 * lam):.4f})")
plots.plot_autocov(rep, OUT / "trace_autocov.svg", title="boundary trace autocovariance")
print(f"wrote {OUT / 'trace_autocov.svg'}")

# -- the same construction off the line ------------------------------------------

section("multiparameter Brownian field on scattered plane points")
pts = np.array([[0.0, 0.0], [0.3, 0.1], [0.5, 0.5], [1.0, 0.2], [0.9, 0.9]])
draws = np.array([ek.sample_levy_field(pts, seed=SEED + 4, index=i) for i in range(4000)])
print(f"field at the origin  : always {np.max(np.abs(draws[:, 0])):.1f}")
var_emp = draws.var(axis=0, ddof=1)
var_exact = np.linalg.norm(pts, axis=1)
print("point variance vs |x|:")
for p, ve, vx in zip(pts, var_emp, var_exact):
    print(f"  ({p[0]:.1f}, {p[1]:.1f}): estimate {ve:.4f}, exact {vx:.4f}")
