"""Uniform time grid shared by schedules, trajectories, and measures."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TimeGrid:
    """Uniform discretization of the horizon [0, T] into N half-open cells.

    Cell i covers [i*dt, (i+1)*dt); sample points are indexed 0..N. The
    constructor recomputes dt = T/N so that N*dt equals the horizon exactly,
    which keeps every cell-set measure an exact multiple of dt.
    """

    horizon: float
    dt: float = field(compare=False)
    n_cells: int = field(init=False)

    def __post_init__(self):
        if not np.isfinite(self.horizon) or self.horizon < 0.0:
            raise ValueError(f"horizon must be finite and >= 0, got {self.horizon}")
        if not np.isfinite(self.dt) or self.dt <= 0.0:
            raise ValueError(f"dt must be finite and > 0, got {self.dt}")
        n = int(round(self.horizon / self.dt)) if self.horizon > 0.0 else 0
        if self.horizon > 0.0 and n == 0:
            raise ValueError(f"dt={self.dt} too coarse for horizon={self.horizon}")
        object.__setattr__(self, "n_cells", n)
        if n > 0:
            object.__setattr__(self, "dt", self.horizon / n)

    def cell_start(self, i: int) -> float:
        return i * self.dt

    def sample_times(self) -> np.ndarray:
        """Times of the N+1 sample points."""
        return np.arange(self.n_cells + 1) * self.dt

    def cells_for_duration(self, duration: float) -> int:
        """Number of whole cells covering `duration`, rounded to nearest."""
        return int(round(duration / self.dt))
