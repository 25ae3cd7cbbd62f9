"""CSV/JSON artifact serialization with atomic file writes.

Column layouts are frozen; see docs/formats.md. Floats are written with
repr so that artifacts round-trip bit-exactly.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import LengthMismatch, MissingColumn
from .gradient import GradientProfile
from .grid import TimeGrid
from .optimizer import RunTrace
from .schedule import CellSet, Schedule
from .simulate import CostatePath, Trajectory

TRACE_COLUMNS = ["k", "J", "D_sigma", "mu_eta", "lambda", "j_backtracks",
                 "switch_count", "alt_opt"]
SCHEDULE_COLUMNS = ["cell_index", "t_start", "mode"]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))  # plain repr even for numpy scalars
    return str(value)


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def trace_to_csv(trace: RunTrace) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(TRACE_COLUMNS)
    for r in trace.records:
        writer.writerow([r.k, _fmt(r.cost), _fmt(r.d_sigma), _fmt(r.mu_eta),
                         _fmt(r.lam), _fmt(r.j_backtracks), r.switch_count,
                         _fmt(r.alt_optimality)])
    return out.getvalue()


def schedule_to_csv(schedule: Schedule) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(SCHEDULE_COLUMNS)
    dt = schedule.grid.dt
    for i, mode in enumerate(schedule.cell_modes):
        writer.writerow([i, _fmt(i * dt), int(mode)])
    return out.getvalue()


def schedule_from_csv(text: str, grid: TimeGrid) -> Schedule:
    """Parse a schedule CSV; raises LengthMismatch unless it covers the grid."""
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise LengthMismatch("schedule CSV is empty")
    header = rows[0]
    try:
        mode_col = header.index("mode")
        cell_col = header.index("cell_index")
    except ValueError as exc:
        raise MissingColumn(f"schedule CSV needs {SCHEDULE_COLUMNS}") from exc
    modes = np.full(grid.n_cells, -1, dtype=np.int64)
    body = rows[1:]
    if len(body) != grid.n_cells:
        raise LengthMismatch(
            f"schedule CSV has {len(body)} cells, grid has {grid.n_cells}")
    for row in body:
        idx = int(row[cell_col])
        if not 0 <= idx < grid.n_cells:
            raise LengthMismatch(f"cell index {idx} outside the grid")
        modes[idx] = int(row[mode_col])
    if (modes < 0).any():
        raise LengthMismatch("schedule CSV does not cover every cell")
    return Schedule(modes, grid)


def trajectory_to_csv(trajectory: Trajectory, costate: CostatePath,
                      schedule: Schedule) -> str:
    n_dim = trajectory.samples.shape[1]
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["t"] + [f"x{i + 1}" for i in range(n_dim)]
                    + [f"p{i + 1}" for i in range(n_dim)] + ["mode"])
    dt = trajectory.grid.dt
    n = trajectory.grid.n_cells
    for i in range(n + 1):
        # the sample at T carries the last cell's mode
        mode = schedule.cell_modes[min(i, n - 1)] if n else 0
        writer.writerow([_fmt(i * dt)]
                        + [_fmt(float(v)) for v in trajectory.samples[i]]
                        + [_fmt(float(v)) for v in costate.samples[i]]
                        + [int(mode)])
    return out.getvalue()


def profile_to_csv(profile: GradientProfile, eta_set: CellSet | None) -> str:
    mask = (eta_set.mask() if eta_set is not None
            else np.zeros(profile.grid.n_cells, dtype=bool))
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["cell", "t", "D_sigma_s", "w_star", "in_eta_set"])
    dt = profile.grid.dt
    for i in range(profile.grid.n_cells):
        writer.writerow([i, _fmt(i * dt), _fmt(float(profile.d_cells[i])),
                         int(profile.w_star[i]), int(mask[i])])
    return out.getvalue()


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"
