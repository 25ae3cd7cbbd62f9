"""Forward state integration, cost evaluation, and backward costate pass.

The discretization is deliberately matched end to end: explicit Euler for
the state, the exact discrete adjoint of that map for the costate, and a
left Riemann sum for the cost. First-order accuracy is accepted in exchange
for discrete consistency between simulated costs and computed gradients.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteState
from .grid import TimeGrid
from .schedule import Schedule
from .systems import SwitchedSystem


@dataclass(frozen=True)
class Trajectory:
    """State samples x(t_i), i = 0..N, on a grid."""

    samples: np.ndarray
    grid: TimeGrid


@dataclass(frozen=True)
class CostatePath:
    """Costate samples p(t_i), i = 0..N; p(T) is exactly zero."""

    samples: np.ndarray
    grid: TimeGrid


def simulate_state(system: SwitchedSystem, schedule: Schedule,
                   x0: np.ndarray) -> Trajectory:
    """Integrate x' = f(x, mode) with explicit Euler over the schedule.

    Deterministic: identical inputs give bitwise-identical samples.
    Raises NonFiniteState as soon as a sample overflows or turns NaN.
    """
    grid = schedule.grid
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (system.state_dim,):
        raise ValueError(f"x0 must have shape ({system.state_dim},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("x0 must be finite")
    if len(schedule.cell_modes) and schedule.cell_modes.max() >= system.n_modes:
        raise ValueError("schedule refers to a mode the system does not have")
    dt = grid.dt
    out = np.empty((grid.n_cells + 1, system.state_dim))
    out[0] = x
    mode_fs = [m.f for m in system.modes]
    cell_modes = schedule.cell_modes
    for i in range(grid.n_cells):
        x = x + dt * mode_fs[cell_modes[i]](x)
        if not np.all(np.isfinite(x)):
            raise NonFiniteState(f"state blew up at step {i + 1}", step=i + 1)
        out[i + 1] = x
    return Trajectory(out, grid)


def evaluate_cost(system: SwitchedSystem, trajectory: Trajectory) -> float:
    """Left Riemann sum of the running cost over the horizon."""
    samples = trajectory.samples
    cost = system.cost
    total = 0.0
    for i in range(trajectory.grid.n_cells):
        total += cost(samples[i])
    return float(total * trajectory.grid.dt)


def integrate_costate(system: SwitchedSystem, schedule: Schedule,
                      trajectory: Trajectory) -> CostatePath:
    """Backward costate pass for p' = -(df/dx)^T p - (dL/dx)^T, p(T) = 0.

    Discretely this is the exact adjoint of the explicit-Euler state map
    with the cost's left Riemann sum:

        p_i = p_{i+1} + dt * (J_f(x_i, mode_i)^T p_{i+1} + dL/dx(x_i))

    so p_i equals the sensitivity of the discrete total cost to x_i.
    """
    grid = trajectory.grid
    xs = trajectory.samples
    dt = grid.dt
    out = np.zeros((grid.n_cells + 1, system.state_dim))
    p = np.zeros(system.state_dim)
    jacs = [m.jacobian for m in system.modes]
    grad = system.cost_gradient
    cell_modes = schedule.cell_modes
    for i in range(grid.n_cells - 1, -1, -1):
        a_t = np.asarray(jacs[cell_modes[i]](xs[i])).T
        p = p + dt * (a_t @ p + np.asarray(grad(xs[i]), dtype=float))
        if not np.all(np.isfinite(p)):
            raise NonFiniteState(f"costate blew up at step {i}", step=i)
        out[i] = p
    return CostatePath(out, grid)
