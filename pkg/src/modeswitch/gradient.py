"""Insertion gradients, the per-cell minimum profile, and eta-level sets.

The insertion gradient of mode w at time s is p(s)^T (f(x(s), w) - f(x(s),
v(s))): the one-sided derivative of the total cost with respect to inserting
w at s for a vanishing duration. Its minimum over cells and modes is the
optimality value; zero means first-order stationarity of the schedule.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotDescendable
from .grid import TimeGrid
from .schedule import CellSet, Schedule
from .simulate import CostatePath, Trajectory
from .systems import SwitchedSystem


@dataclass(frozen=True)
class GradientProfile:
    """Per-cell insertion-gradient minima and their global minimum.

    d_cells[i] = min over modes w of the insertion gradient at cell i
    (never positive: w = current mode contributes exactly zero), w_star[i]
    is the minimizing mode (ties to the lowest index), d_sigma the minimum
    over cells and argmin_cell the first cell attaining it.
    """

    d_cells: np.ndarray
    w_star: np.ndarray
    d_sigma: float
    argmin_cell: int
    grid: TimeGrid


def insertion_gradient_at(system: SwitchedSystem, x: np.ndarray, p: np.ndarray,
                          current_mode: int, w: int) -> float:
    """p^T (f(x, w) - f(x, current_mode)); exactly zero when w is current."""
    if w == current_mode:
        return 0.0
    return float(np.dot(p, system.f(x, w) - system.f(x, current_mode)))


def gradient_profile(system: SwitchedSystem, schedule: Schedule,
                     trajectory: Trajectory, costate: CostatePath) -> GradientProfile:
    """Evaluate the per-cell insertion-gradient minimum for every grid cell.

    Cell i is evaluated at its left state sample x(t_i) paired with the
    costate sample p(t_{i+1}): the costate recursion makes p_{i+1} the exact
    sensitivity of the discrete cost to the state entering cell i+1, which
    is the state a flip of cell i perturbs. In particular the last cell gets
    a gradient of exactly zero, matching its null effect on the left-rule
    cost sum.
    """
    grid = schedule.grid
    n = grid.n_cells
    d_cells = np.zeros(n)
    w_star = schedule.cell_modes.copy()
    xs = trajectory.samples
    ps = costate.samples
    fs = [m.f for m in system.modes]
    for i in range(n):
        x = xs[i]
        p = ps[i + 1]
        v = schedule.cell_modes[i]
        fv = fs[v](x)
        best = 0.0
        best_w = v
        for w in range(system.n_modes):
            if w == v:
                continue
            val = float(np.dot(p, fs[w](x) - fv))
            if val < best or (val == best and val < 0.0 and w < best_w):
                best = val
                best_w = w
        d_cells[i] = best
        w_star[i] = best_w
    if n:
        argmin = int(np.argmin(d_cells))  # np.argmin ties to the lowest index
        d_sigma = float(d_cells[argmin])
    else:
        argmin, d_sigma = 0, 0.0
    d_cells.setflags(write=False)
    w_star.setflags(write=False)
    return GradientProfile(d_cells, w_star, d_sigma, argmin, grid)


def eta_level_set(profile: GradientProfile, eta: float,
                  strict_negative: bool = False) -> CellSet:
    """Cells whose gradient is at least the eta-fraction of the minimum.

    Returns the set {i : d_cells[i] <= eta * d_sigma} merged into maximal
    intervals; it always contains the argmin cell. With `strict_negative`
    the threshold is dropped and the set {i : d_cells[i] < 0} is returned
    instead (the eta -> 0 limit, minus exact-zero cells).

    Raises NotDescendable when d_sigma >= 0: there is nothing to descend.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    if profile.d_sigma >= 0.0:
        raise NotDescendable(f"optimality value {profile.d_sigma} is not negative")
    if strict_negative:
        indices = np.nonzero(profile.d_cells < 0.0)[0]
    else:
        indices = np.nonzero(profile.d_cells <= eta * profile.d_sigma)[0]
    return CellSet.from_indices(indices, profile.grid)
