"""Independent oracles: finite-difference insertion gradients, classic
gradient-space Armijo descent, exhaustive schedule enumeration, and
smoothness probes of the cost as a function of flip length."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (BadInterval, BudgetExceeded, GradientVanished, OutOfRange)
from .gradient import gradient_profile
from .grid import TimeGrid
from .schedule import CellSet, Schedule, flip_set
from .simulate import evaluate_cost, integrate_costate, simulate_state
from .systems import SwitchedSystem


@dataclass(frozen=True)
class FDProbe:
    """One finite-difference check of the insertion gradient at a cell.

    rel_error is None when both magnitudes sit below `floor`, where the
    quotient is numerically uninformative.
    """

    cell: int
    w: int
    analytic: float
    fd_quotient: float
    lam: float
    rel_error: float | None

    @staticmethod
    def build(cell: int, w: int, analytic: float, fd: float, lam: float,
              floor: float = 1e-4) -> "FDProbe":
        mx = max(abs(analytic), abs(fd))
        rel = abs(analytic - fd) / mx if mx > floor else None
        return FDProbe(cell, w, analytic, fd, lam, rel)


def fd_insertion_gradient(system: SwitchedSystem, schedule: Schedule,
                          x0: np.ndarray, cell: int, w: int, lam: float) -> float:
    """One-sided difference quotient (J(insert w on [s, s+lam)) - J) / lam.

    lam must be a positive multiple of the grid step and the insertion
    window must fit the horizon. The modified cost is evaluated through the
    same simulate/evaluate path as the optimizer, so for lam = dt the
    quotient is bit-identical to the optimizer's single-cell candidate
    delta divided by dt.
    """
    grid = schedule.grid
    n_cells = int(round(lam / grid.dt))
    if n_cells < 1 or abs(n_cells * grid.dt - lam) > 1e-9 * grid.dt:
        raise ValueError(f"lam={lam} is not a positive multiple of dt={grid.dt}")
    if cell < 0 or cell + n_cells > grid.n_cells:
        raise OutOfRange(f"window [{cell}, {cell + n_cells}) exceeds the grid")
    base = evaluate_cost(system, simulate_state(system, schedule, x0))
    modes = schedule.cell_modes.copy()
    modes[cell:cell + n_cells] = w
    modified = Schedule(modes, grid)
    new = evaluate_cost(system, simulate_state(system, modified, x0))
    return (new - base) / lam


Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass
class ArmijoRun:
    """Record of a classic gradient-descent run with backtracking steps."""

    iterates: list[np.ndarray]
    step_sizes: list[float]
    backtrack_counts: list[int]
    grad_norms: list[float]
    stopped_on_gradient: bool


def classic_armijo_descent(objective: Objective, x0: np.ndarray, alpha: float,
                           beta: float, max_iters: int) -> ArmijoRun:
    """Steepest descent x+ = x - beta^j grad f(x), with j the first integer
    satisfying f(x - beta^j grad f) - f(x) <= -alpha beta^j ||grad f||^2.

    The recorded step size is lambda = beta^j ||grad f(x)|| (the length of
    the move along the normalized direction). Terminates cleanly once the
    gradient norm drops below 1e-12.
    """
    x = np.asarray(x0, dtype=float).copy()
    run = ArmijoRun([x.copy()], [], [], [], False)
    for _ in range(max_iters):
        f0, g = objective(x)
        gn = float(np.linalg.norm(g))
        run.grad_norms.append(gn)
        if gn < 1e-12:
            run.stopped_on_gradient = True
            break
        j = 0
        while True:
            s = beta ** j
            f_new, _ = objective(x - s * g)
            if f_new - f0 <= -alpha * s * gn * gn:
                break
            j += 1
            if j > 200:
                raise GradientVanished(
                    "backtracking exhausted; gradient no longer a descent "
                    "direction at floating-point resolution")
        run.step_sizes.append((beta ** j) * gn)
        run.backtrack_counts.append(j)
        x = x - (beta ** j) * g
        run.iterates.append(x.copy())
    return run


def quadratic_objective(q: np.ndarray) -> Objective:
    """f(x) = 1/2 x^T Q x with its gradient, for s.p.d. Q."""
    def objective(x: np.ndarray) -> tuple[float, np.ndarray]:
        g = q @ x
        return 0.5 * float(x @ g), g
    return objective


def brute_force_best_schedule(system: SwitchedSystem, x0: np.ndarray,
                              grid: TimeGrid,
                              budget: int = 2 ** 20) -> tuple[Schedule, float]:
    """Enumerate every cell assignment and return the cheapest schedule.

    Ties resolve to the lexicographically smallest mode tuple (enumeration
    order guarantees it). Raises BudgetExceeded when n_modes**n_cells is
    above `budget`.
    """
    m, n = system.n_modes, grid.n_cells
    total = m ** n
    if total > budget:
        raise BudgetExceeded(f"{m}^{n} = {total} schedules exceed budget {budget}")
    best_cost = math.inf
    best: Schedule | None = None
    for assignment in itertools.product(range(m), repeat=n):
        candidate = Schedule(np.array(assignment, dtype=np.int64), grid)
        cost = evaluate_cost(system, simulate_state(system, candidate, x0))
        if cost < best_cost:
            best_cost = cost
            best = candidate
    assert best is not None
    return best, best_cost


@dataclass(frozen=True)
class SmoothnessReport:
    """Empirical probes of J(flip [s1, s1+gamma)) as a function of gamma.

    second_diff_quotients: central second differences of J in gamma, one
    per probed gamma (bounded if J is C^2 on the block).
    lipschitz_ratios: |D(s) after flip - D(s) before| / gamma at a fixed
    time s past the block, one per gamma.
    set_ratios: the same difference divided by the set measure when the
    flip is split into two disjoint intervals.
    """

    gammas: tuple[float, ...]
    second_diff_quotients: tuple[float, ...]
    lipschitz_ratios: tuple[float, ...]
    set_ratios: tuple[float, ...]


def smoothness_probe(system: SwitchedSystem, schedule: Schedule, x0: np.ndarray,
                     interval: tuple[float, float], gammas: Sequence[float],
                     probe_time: float | None = None) -> SmoothnessReport:
    """Probe the cost and gradient response to flips inside one mode block.

    `interval` = (s1, s2) in seconds must lie strictly inside a
    constant-mode block of `schedule`; each gamma (plus one step of slack
    for the second difference) must fit inside it. `probe_time` defaults to
    one second past s2 and must not exceed the horizon.
    """
    grid = schedule.grid
    dt = grid.dt
    s1, s2 = interval
    i1, i2 = int(round(s1 / dt)), int(round(s2 / dt))
    if not 0 <= i1 < i2 <= grid.n_cells:
        raise BadInterval(f"interval {interval} outside the horizon")
    block = schedule.cell_modes[i1:i2]
    if len(np.unique(block)) != 1:
        raise BadInterval(f"interval {interval} spans a mode switch")
    if schedule.cell_modes.max() > 1:
        raise BadInterval("smoothness probe expects a bimodal schedule")
    s_probe = s2 + 1.0 if probe_time is None else probe_time
    i_probe = int(round(s_probe / dt))
    if not i2 <= i_probe < grid.n_cells:
        raise BadInterval(f"probe time {s_probe} not in [s2, horizon)")

    def flipped(cells: CellSet) -> Schedule:
        return flip_set(schedule, cells)

    def cost_of(sched: Schedule) -> float:
        return evaluate_cost(system, simulate_state(system, sched, x0))

    def d_at_probe(sched: Schedule) -> float:
        traj = simulate_state(system, sched, x0)
        costate = integrate_costate(system, sched, traj)
        return float(gradient_profile(system, sched, traj, costate).d_cells[i_probe])

    def window(gamma: float) -> CellSet:
        n = int(round(gamma / dt))
        if i1 + n > i2:
            raise BadInterval(f"gamma={gamma} does not fit inside {interval}")
        return (CellSet.from_indices(range(i1, i1 + n), grid) if n
                else CellSet.empty(grid))

    base_cost = cost_of(schedule)
    base_d = d_at_probe(schedule)
    second_diffs, lipschitz, set_ratios = [], [], []
    for gamma in gammas:
        if gamma == 0.0:
            second_diffs.append(0.0)
            lipschitz.append(0.0)
            set_ratios.append(0.0)
            continue
        j_mid = cost_of(flipped(window(gamma)))
        j_plus = cost_of(flipped(window(gamma + dt)))
        j_minus = base_cost if gamma == dt else cost_of(flipped(window(gamma - dt)))
        second_diffs.append((j_plus - 2.0 * j_mid + j_minus) / dt ** 2)
        lipschitz.append(abs(d_at_probe(flipped(window(gamma))) - base_d) / gamma)
        # split flip: two disjoint half-measure intervals inside the block
        half = max(1, int(round(gamma / (2 * dt))))
        gap = (i2 - i1) // 2
        if i1 + gap + half > i2:
            raise BadInterval(f"gamma={gamma} too long for a split flip")
        pieces = CellSet.from_indices(
            list(range(i1, i1 + half)) + list(range(i1 + gap, i1 + gap + half)), grid)
        set_ratios.append(
            abs(d_at_probe(flipped(pieces)) - base_d) / pieces.measure)
    return SmoothnessReport(tuple(gammas), tuple(second_diffs),
                            tuple(lipschitz), tuple(set_ratios))
