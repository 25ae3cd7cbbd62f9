"""Switched-system containers and the analytic-Jacobian self check."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

VectorField = Callable[[np.ndarray], np.ndarray]
MatrixField = Callable[[np.ndarray], np.ndarray]
ScalarField = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class Mode:
    """One vector field of the switched system, with its state Jacobian.

    Both callables take the state vector; `f` returns the state derivative,
    `jacobian` the n x n matrix of its partials. Fields are expected to be
    twice continuously differentiable on the region the trajectory visits;
    that smoothness obligation rests with the caller.
    """

    name: str
    f: VectorField
    jacobian: MatrixField


@dataclass(frozen=True)
class SwitchedSystem:
    """Finite family of vector fields plus a running cost on the state."""

    modes: tuple[Mode, ...]
    cost: ScalarField
    cost_gradient: VectorField
    state_dim: int
    name: str = ""

    def __post_init__(self):
        if len(self.modes) < 2:
            raise ValueError("a switched system needs at least two modes")
        if self.state_dim < 1:
            raise ValueError("state_dim must be positive")

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def f(self, x: np.ndarray, mode: int) -> np.ndarray:
        return self.modes[mode].f(x)

    def jacobian(self, x: np.ndarray, mode: int) -> np.ndarray:
        return self.modes[mode].jacobian(x)


@dataclass(frozen=True)
class JacobianCheck:
    """Worst relative error of one analytic derivative vs central differences."""

    label: str
    max_rel_error: float


@dataclass(frozen=True)
class JacobianReport:
    checks: tuple[JacobianCheck, ...]

    @property
    def max_rel_error(self) -> float:
        return max(c.max_rel_error for c in self.checks)

    def passes(self, tol: float) -> bool:
        return self.max_rel_error <= tol


def _central_jacobian(f: VectorField, x: np.ndarray, h: float) -> np.ndarray:
    n = len(x)
    out = np.empty((len(np.atleast_1d(f(x))), n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        out[:, j] = (np.atleast_1d(f(x + e)) - np.atleast_1d(f(x - e))) / (2.0 * h)
    return out


def _rel_error(analytic: np.ndarray, fd: np.ndarray) -> float:
    scale = np.maximum(1.0, np.maximum(np.abs(analytic), np.abs(fd)))
    return float(np.max(np.abs(analytic - fd) / scale))


def check_jacobians(system: SwitchedSystem, probe_points: Sequence[np.ndarray],
                    h: float = 1e-6) -> JacobianReport:
    """Compare every mode Jacobian and the cost gradient against central
    finite differences at the probe points.

    Returns a report with the worst relative error per derivative; never
    raises on a mismatch so it can serve as a negative-control check.
    """
    points = [np.asarray(p, dtype=float) for p in probe_points]
    for p in points:
        if not np.all(np.isfinite(p)):
            raise ValueError("probe points must be finite")
    checks = []
    for m_idx, mode in enumerate(system.modes):
        worst = 0.0
        for p in points:
            fd = _central_jacobian(mode.f, p, h)
            worst = max(worst, _rel_error(np.asarray(mode.jacobian(p), dtype=float), fd))
        checks.append(JacobianCheck(f"mode[{m_idx}] {mode.name}".strip(), worst))
    worst = 0.0
    for p in points:
        fd = _central_jacobian(lambda x: np.atleast_1d(system.cost(x)), p, h)[0]
        worst = max(worst, _rel_error(np.asarray(system.cost_gradient(p), dtype=float), fd))
    checks.append(JacobianCheck("cost_gradient", worst))
    return JacobianReport(tuple(checks))
