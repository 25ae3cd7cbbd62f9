"""Steepest descent in schedule space with a measure-valued Armijo step.

Each iteration computes the insertion-gradient profile of the current
schedule, forms the eta-level set of most-negative cells, and backtracks
over flip measures lambda_j = beta^j * mu(level set), accepting the first
candidate whose simulated cost drop beats alpha * lambda * d_sigma. The
step size is the Lebesgue measure of flipped time, quantized to whole grid
cells; acceptance is always tested against the measure actually flipped.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteState, StepSizeUnderflow
from .gradient import GradientProfile, eta_level_set, gradient_profile
from .schedule import CellSet, Schedule, flip_set, switch_count
from .simulate import evaluate_cost, integrate_costate, simulate_state
from .systems import SwitchedSystem


class SelectionRule(enum.Enum):
    """How the flip subset of a given measure is drawn from the level set."""

    LEFTMOST = "leftmost"
    MOST_NEGATIVE_FIRST = "most_negative_first"


class RunStatus(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    STEP_SIZE_UNDERFLOW = "StepSizeUnderflow"


@dataclass(frozen=True)
class OptimizerParams:
    """Armijo and stopping parameters.

    alpha, beta, eta all lie in (0, 1); the sufficient-descent theory wants
    alpha < eta, so the constructor warns when that is violated. d_tol is
    the absolute stationarity tolerance: the loop stops once the optimality
    value rises above -d_tol.
    """

    alpha: float
    beta: float
    eta: float
    max_iters: int
    d_tol: float = 1e-3
    max_backtracks: int = 40
    selection_rule: SelectionRule = SelectionRule.LEFTMOST

    def __post_init__(self):
        for name in ("alpha", "beta", "eta"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.d_tol < 0.0:
            raise ValueError("d_tol must be >= 0")
        if self.max_backtracks < 0:
            raise ValueError("max_backtracks must be >= 0")
        if not self.alpha < self.eta:
            warnings.warn(
                f"alpha={self.alpha} >= eta={self.eta}; sufficient descent of "
                "single-cell steps is no longer guaranteed", stacklevel=2)


@dataclass(frozen=True)
class IterationRecord:
    """One visited schedule. lam/j_backtracks are None on the final record
    when no step was taken from it."""

    k: int
    cost: float
    d_sigma: float
    mu_eta: float
    lam: float | None
    j_backtracks: int | None
    switch_count: int
    alt_optimality: float


@dataclass
class RunTrace:
    records: list[IterationRecord] = field(default_factory=list)
    status: RunStatus = RunStatus.MAX_ITERS

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]

    def costs(self) -> np.ndarray:
        return np.array([r.cost for r in self.records])

    def d_sigmas(self) -> np.ndarray:
        return np.array([r.d_sigma for r in self.records])


@dataclass(frozen=True)
class AcceptedStep:
    schedule: Schedule
    lam: float
    j_backtracks: int
    cost: float


def select_subset(eta_set: CellSet, lam: float, rule: SelectionRule,
                  profile: GradientProfile | None = None) -> CellSet:
    """Sub-cell-set of measure floor(lam/dt)*dt (at least one cell).

    LEFTMOST takes member cells in ascending index order;
    MOST_NEGATIVE_FIRST sorts them by ascending profile value (ties to the
    lower index) and needs the profile.
    """
    dt = eta_set.grid.dt
    if not 0.0 < lam <= eta_set.measure + 1e-9 * dt:
        raise ValueError(f"lambda={lam} outside (0, mu={eta_set.measure}]")
    n_take = max(1, int(math.floor(lam / dt + 1e-9)))
    cells = eta_set.cell_indices()
    if rule is SelectionRule.MOST_NEGATIVE_FIRST:
        if profile is None:
            raise ValueError("MOST_NEGATIVE_FIRST needs the gradient profile")
        cells = cells[np.lexsort((cells, profile.d_cells[cells]))]
    return CellSet.from_indices(cells[:n_take], eta_set.grid)


def armijo_step(system: SwitchedSystem, schedule: Schedule, x0: np.ndarray,
                profile: GradientProfile, eta_set: CellSet,
                params: OptimizerParams, base_cost: float) -> AcceptedStep:
    """Backtrack lambda_j = beta^j * mu(eta_set) until sufficient descent.

    The candidate flips the selected cells to their per-cell minimizing
    modes frozen in `profile`; acceptance requires

        J(candidate) - J(schedule) <= alpha * lam_q * d_sigma

    with lam_q the quantized measure actually flipped. Raises
    StepSizeUnderflow when backtracking exceeds max_backtracks or the
    selection has been floored to a single cell twice without acceptance
    (the grid cannot resolve a descent step).
    """
    d_sigma = profile.d_sigma
    if d_sigma >= 0.0:
        raise ValueError("armijo_step called on a stationary profile")
    mu = eta_set.measure
    single_cell_rejections = 0
    j = 0
    while j <= params.max_backtracks:
        lam_j = (params.beta ** j) * mu
        subset = select_subset(eta_set, lam_j, params.selection_rule, profile)
        candidate = flip_set(schedule, subset, target_modes=profile.w_star)
        lam_q = subset.measure
        try:
            cand_cost = evaluate_cost(system, simulate_state(system, candidate, x0))
        except NonFiniteState:
            cand_cost = math.inf  # treat a blown-up candidate as rejected
        if cand_cost - base_cost <= params.alpha * lam_q * d_sigma:
            return AcceptedStep(candidate, lam_q, j, cand_cost)
        if subset.n_cells == 1:
            single_cell_rejections += 1
            if single_cell_rejections >= 2:
                raise StepSizeUnderflow(
                    "single-cell flip rejected twice; grid cannot resolve "
                    "a descent step", backtracks=j)
        j += 1
    raise StepSizeUnderflow(
        f"no acceptable step within {params.max_backtracks} backtracks",
        backtracks=params.max_backtracks)


def optimize(system: SwitchedSystem, initial_schedule: Schedule,
             params: OptimizerParams, x0: np.ndarray) -> tuple[Schedule, RunTrace]:
    """Run the descent loop from `initial_schedule`.

    Visits at most max_iters schedules, recording one trace row per visit
    (1-indexed); the row's lam/j describe the step taken *from* it. The
    terminal status reports why the loop stopped. Deterministic end to end.

    On NonFiniteState from the nominal simulation the exception propagates
    with the partial trace attached as `exc.trace`.
    """
    schedule = initial_schedule
    trace = RunTrace()
    x0 = np.asarray(x0, dtype=float)
    for k in range(1, params.max_iters + 1):
        try:
            trajectory = simulate_state(system, schedule, x0)
            cost = evaluate_cost(system, trajectory)
            costate = integrate_costate(system, schedule, trajectory)
        except NonFiniteState as exc:
            exc.trace = trace
            raise
        profile = gradient_profile(system, schedule, trajectory, costate)
        ell = switch_count(schedule)
        if profile.d_sigma >= -params.d_tol:
            mu = (eta_level_set(profile, params.eta).measure
                  if profile.d_sigma < 0.0 else 0.0)
            trace.records.append(IterationRecord(
                k, cost, profile.d_sigma, mu, None, None, ell,
                profile.d_sigma * mu))
            trace.status = RunStatus.CONVERGED
            return schedule, trace
        eta_set = eta_level_set(profile, params.eta)
        mu = eta_set.measure
        alt = profile.d_sigma * mu
        if k == params.max_iters:
            trace.records.append(IterationRecord(
                k, cost, profile.d_sigma, mu, None, None, ell, alt))
            trace.status = RunStatus.MAX_ITERS
            return schedule, trace
        try:
            step = armijo_step(system, schedule, x0, profile, eta_set, params, cost)
        except StepSizeUnderflow:
            trace.records.append(IterationRecord(
                k, cost, profile.d_sigma, mu, None, None, ell, alt))
            trace.status = RunStatus.STEP_SIZE_UNDERFLOW
            return schedule, trace
        trace.records.append(IterationRecord(
            k, cost, profile.d_sigma, mu, step.lam, step.j_backtracks, ell, alt))
        schedule = step.schedule
    raise AssertionError("unreachable")


def check_sufficient_descent(trace: RunTrace, alpha: float) -> None:
    """Re-verify the acceptance inequality on every logged step.

    Raises AssertionError if any consecutive pair of records violates
    J_{k+1} - J_k <= alpha * lam_k * d_sigma_k with the logged values.
    """
    for prev, nxt in zip(trace.records, trace.records[1:]):
        if prev.lam is None:
            raise AssertionError(f"record k={prev.k} took no step but is not last")
        lhs = nxt.cost - prev.cost
        rhs = alpha * prev.lam * prev.d_sigma
        if not lhs <= rhs:
            raise AssertionError(
                f"descent violated at k={prev.k}: {lhs} > {rhs}")
