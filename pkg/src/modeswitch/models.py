"""Built-in benchmark systems.

`make_double_tank` is the nonlinear tracking benchmark used throughout the
acceptance suite; `make_switched_linear` is the oracle-friendly affine
family; `make_trimodal_tracker` exercises the per-cell mode argmin with
three modes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .grid import TimeGrid
from .systems import Mode, SwitchedSystem

# Floor under the radical of the sqrt derivative: keeps the tank Jacobian
# finite if a trajectory grazes the clamp boundary (never active on the
# benchmark, whose levels stay in [1, 4]).
_SQRT_DERIV_FLOOR = 1e-9


@dataclass(frozen=True)
class Benchmark:
    """A system bundled with its default initial state, grid, and schedule."""

    name: str
    system: SwitchedSystem
    x0: np.ndarray
    grid: TimeGrid
    initial_blocks: tuple[tuple[int, float], ...]


def _guarded_sqrt(v: float) -> float:
    return math.sqrt(v) if v > 0.0 else 0.0


def _tank_f(inflow: float):
    def f(x: np.ndarray) -> np.ndarray:
        s1 = _guarded_sqrt(x[0])
        return np.array([inflow - s1, s1 - _guarded_sqrt(x[1])])
    return f


def _tank_jacobian(x: np.ndarray) -> np.ndarray:
    d1 = 0.5 / math.sqrt(max(x[0], _SQRT_DERIV_FLOOR))
    d2 = 0.5 / math.sqrt(max(x[1], _SQRT_DERIV_FLOOR))
    return np.array([[-d1, 0.0], [d1, -d2]])


def make_double_tank() -> Benchmark:
    """Two gravity-drained tanks in series with a switched inflow valve.

    States are the two fluid levels; the inflow to the upper tank switches
    between 1 and 2, the outflows follow Toricelli's law (sqrt of the
    level). The cost tracks a lower-tank level of 3:

        x1' = v - sqrt(x1),  x2' = sqrt(x1) - sqrt(x2),  L = 2 (x2 - 3)^2

    Defaults: x0 = (2, 2), horizon 20 at dt = 0.01, and an initial schedule
    holding v=1 on the first half and v=2 on the second.
    """
    system = SwitchedSystem(
        modes=(
            Mode("inflow=1", _tank_f(1.0), _tank_jacobian),
            Mode("inflow=2", _tank_f(2.0), _tank_jacobian),
        ),
        cost=lambda x: 2.0 * (x[1] - 3.0) ** 2,
        cost_gradient=lambda x: np.array([0.0, 4.0 * (x[1] - 3.0)]),
        state_dim=2,
        name="double_tank",
    )
    return Benchmark(
        name="double_tank",
        system=system,
        x0=np.array([2.0, 2.0]),
        grid=TimeGrid(horizon=20.0, dt=0.01),
        initial_blocks=((0, 10.0), (1, 10.0)),
    )


def make_switched_linear(a_matrices: Sequence[np.ndarray],
                         b_offsets: Sequence[np.ndarray],
                         q: np.ndarray,
                         target: np.ndarray | None = None,
                         name: str = "switched_linear") -> SwitchedSystem:
    """Affine modes f(x, v) = A_v x + b_v with quadratic tracking cost.

    The cost is (x - c)^T Q (x - c) with c = `target` (origin by default);
    Jacobians are the exact A_v. Raises DimensionMismatch on inconsistent
    shapes.
    """
    mats = [np.asarray(a, dtype=float) for a in a_matrices]
    offs = [np.asarray(b, dtype=float) for b in b_offsets]
    qm = np.asarray(q, dtype=float)
    if len(mats) != len(offs) or len(mats) < 2:
        raise DimensionMismatch("need matching A and b lists for >= 2 modes")
    n = mats[0].shape[0]
    for a, b in zip(mats, offs):
        if a.shape != (n, n) or b.shape != (n,):
            raise DimensionMismatch(
                f"mode shapes {a.shape}/{b.shape} inconsistent with n={n}")
    if qm.shape != (n, n):
        raise DimensionMismatch(f"Q must be {n}x{n}, got {qm.shape}")
    c = np.zeros(n) if target is None else np.asarray(target, dtype=float)
    if c.shape != (n,):
        raise DimensionMismatch(f"target must have shape ({n},), got {c.shape}")

    def make_mode(i: int, a: np.ndarray, b: np.ndarray) -> Mode:
        return Mode(f"affine[{i}]", lambda x: a @ x + b, lambda x: a)

    return SwitchedSystem(
        modes=tuple(make_mode(i, a, b) for i, (a, b) in enumerate(zip(mats, offs))),
        cost=lambda x: float((x - c) @ qm @ (x - c)),
        cost_gradient=lambda x: 2.0 * (qm @ (x - c)),
        state_dim=n,
        name=name,
    )


def make_tracking_chain(mode_rates: Sequence[float], target: float,
                        name: str) -> SwitchedSystem:
    """Scalar x' = v - x with per-mode drive levels v and cost (x - target)^2."""
    return make_switched_linear(
        a_matrices=[np.array([[-1.0]])] * len(mode_rates),
        b_offsets=[np.array([v]) for v in mode_rates],
        q=np.array([[1.0]]),
        target=np.array([target]),
        name=name,
    )


def make_trimodal_tracker() -> Benchmark:
    """Three-mode scalar chaser: x' = v - x, v in {0, 1, 2}, cost (x - 2.5)^2.

    The target sits above every reachable level, so the optimum saturates
    at the strongest drive; the point of the model is that the per-cell
    mode argmin must pick among two genuine alternatives at every cell.
    Defaults: x0 = 0 on a 10-cell grid (horizon 5, dt 0.5).
    """
    system = make_tracking_chain((0.0, 1.0, 2.0), target=2.5, name="trimodal_tracker")
    return Benchmark(
        name="trimodal_tracker",
        system=system,
        x0=np.array([0.0]),
        grid=TimeGrid(horizon=5.0, dt=0.5),
        initial_blocks=((0, 5.0),),
    )


def make_bimodal_tracker_n8() -> Benchmark:
    """Scalar two-mode chaser on a deliberately coarse 8-cell grid.

    x' = v - x with v in {0, 2} and cost (x - 3)^2: the target exceeds the
    reachable band, so exhaustive enumeration and the descent loop must
    agree on the saturated schedule. Small enough to brute force (256
    schedules).
    """
    system = make_tracking_chain((0.0, 2.0), target=3.0, name="bimodal_tracker_n8")
    return Benchmark(
        name="bimodal_tracker_n8",
        system=system,
        x0=np.array([0.0]),
        grid=TimeGrid(horizon=8.0, dt=1.0),
        initial_blocks=((0, 8.0),),
    )


BUILTIN_MODELS = {
    "double_tank": make_double_tank,
    "trimodal_tracker": make_trimodal_tracker,
    "bimodal_tracker_n8": make_bimodal_tracker_n8,
}
