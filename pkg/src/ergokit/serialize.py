"""On-disk formats: CSV for densities, matrices, ensembles, and
trajectories, plus canonical JSON reports.

All CSV output uses a `.` decimal separator, LF line endings, and UTF-8.
Floats are written with shortest round-trip precision so that equal
inputs serialize to byte-identical text.
"""

import json

import numpy as np

from .errors import InvalidParameterError
from .transfer import GridDensity, TransferMatrix

MATRIX_CSV_MAX = 4096

DENSITY_HEADER = "bin_left,bin_right,mass"
ENSEMBLE_HEADER = "sample_id,t,value"
TRAJECTORY_HEADER = "t,x,value"


def _fmt(x):
    return repr(float(x))


def density_to_csv(density):
    """Render bin masses as CSV rows `bin_left,bin_right,mass`."""
    edges = density.edges
    lines = [DENSITY_HEADER]
    for i, mass in enumerate(density.masses):
        lines.append(f"{_fmt(edges[i])},{_fmt(edges[i + 1])},{_fmt(mass)}")
    return "\n".join(lines) + "\n"


def density_from_csv(text):
    """Parse `bin_left,bin_right,mass` rows back into a GridDensity.

    The rows must tile an equispaced partition of [0, L] in order.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != DENSITY_HEADER:
        raise InvalidParameterError(f"expected header {DENSITY_HEADER!r}")
    rows = np.array([[float(f) for f in ln.split(",")] for ln in lines[1:]])
    if rows.ndim != 2 or rows.shape[1] != 3 or rows.shape[0] < 1:
        raise InvalidParameterError("malformed density rows")
    n = rows.shape[0]
    length = rows[-1, 1]
    edges = np.linspace(0.0, length, n + 1)
    if abs(rows[0, 0]) > 1e-12 or np.max(np.abs(rows[:, 0] - edges[:-1])) > 1e-9 * max(1.0, length):
        raise InvalidParameterError("bins do not tile an equispaced partition from 0")
    return GridDensity(n, length, rows[:, 2])


def matrix_to_csv(tm):
    """Render a transfer matrix as dense CSV, one row per line.

    Refused above 4096 bins: the dense text would be gigabytes and the
    matrix is available in memory for anything that large.
    """
    if tm.n > MATRIX_CSV_MAX:
        raise InvalidParameterError(f"dense CSV refused for n = {tm.n} > {MATRIX_CSV_MAX}")
    lines = [",".join(_fmt(x) for x in row) for row in tm.P]
    return "\n".join(lines) + "\n"


def matrix_from_csv(text, domain_length=1.0):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    rows = np.array([[float(f) for f in ln.split(",")] for ln in lines])
    if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
        raise InvalidParameterError("matrix CSV must be square")
    return TransferMatrix(rows.shape[0], domain_length, rows)


def ensemble_to_csv(times, values):
    """Render an ensemble of paths as `sample_id,t,value` rows.

    ``values`` has one row per sample, one column per time point.
    """
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    if values.ndim != 2 or values.shape[1] != times.size:
        raise InvalidParameterError(
            f"values shape {values.shape} does not match {times.size} time points"
        )
    lines = [ENSEMBLE_HEADER]
    for sid in range(values.shape[0]):
        row = values[sid]
        for t, x in zip(times, row):
            lines.append(f"{sid},{_fmt(t)},{_fmt(x)}")
    return "\n".join(lines) + "\n"


def trajectory_to_csv(times, grid, frames, stride=1):
    """Render space-time frames as `t,x,value` rows, down-sampled in time.

    ``frames`` has one row per time point on ``times``; ``stride`` keeps
    every stride-th frame (the first is always kept).
    """
    frames = np.asarray(frames, dtype=float)
    times = np.asarray(times, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if frames.shape != (times.size, grid.size):
        raise InvalidParameterError(
            f"frames shape {frames.shape} does not match {(times.size, grid.size)}"
        )
    if stride < 1:
        raise InvalidParameterError(f"need stride >= 1, got {stride}")
    lines = [TRAJECTORY_HEADER]
    for k in range(0, times.size, stride):
        t = times[k]
        for x, val in zip(grid, frames[k]):
            lines.append(f"{_fmt(t)},{_fmt(x)},{_fmt(val)}")
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def report_json(payload):
    """Canonical JSON text: sorted keys, two-space indent, LF-terminated.

    Equal payloads always produce byte-identical text.
    """
    return json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n"


def write_text(path, text):
    """Write UTF-8 text with LF line endings regardless of platform."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_text(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()
