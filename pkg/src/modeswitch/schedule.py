"""Mode schedules on the grid, cell-set algebra, and flip operations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadBlocks, OutOfRange
from .grid import TimeGrid


@dataclass(frozen=True)
class Schedule:
    """Piecewise-constant mode assignment: one mode index per grid cell."""

    cell_modes: np.ndarray
    grid: TimeGrid

    def __post_init__(self):
        modes = np.asarray(self.cell_modes, dtype=np.int64)
        if modes.ndim != 1 or len(modes) != self.grid.n_cells:
            raise ValueError(
                f"schedule length {modes.shape} does not match grid with "
                f"{self.grid.n_cells} cells")
        if len(modes) and modes.min() < 0:
            raise ValueError("mode indices must be non-negative")
        modes.setflags(write=False)
        object.__setattr__(self, "cell_modes", modes)

    def mode_at_cell(self, i: int) -> int:
        return int(self.cell_modes[i])

    def switch_count(self) -> int:
        """Number of constant-mode blocks (1 for a constant schedule)."""
        return switch_count(self)

    def __eq__(self, other):
        return (isinstance(other, Schedule) and self.grid == other.grid
                and np.array_equal(self.cell_modes, other.cell_modes))

    def __hash__(self):
        return hash((self.grid, self.cell_modes.tobytes()))


def switch_count(schedule: Schedule) -> int:
    m = schedule.cell_modes
    if len(m) == 0:
        return 0
    return 1 + int(np.count_nonzero(m[1:] != m[:-1]))


@dataclass(frozen=True)
class CellSet:
    """Sorted union of disjoint half-open cell-index intervals [a, b).

    The Lebesgue measure of the covered time is n_cells * dt, always an
    exact multiple of the grid step.
    """

    intervals: tuple[tuple[int, int], ...]
    grid: TimeGrid

    def __post_init__(self):
        prev_end = -1
        for a, b in self.intervals:
            if a < 0 or b <= a:
                raise ValueError(f"bad interval [{a}, {b})")
            if a <= prev_end:
                raise ValueError("intervals must be sorted and disjoint")
            prev_end = b
        if self.intervals and self.intervals[-1][1] > self.grid.n_cells:
            raise OutOfRange(
                f"interval end {self.intervals[-1][1]} exceeds grid "
                f"({self.grid.n_cells} cells)")

    @classmethod
    def empty(cls, grid: TimeGrid) -> "CellSet":
        return cls((), grid)

    @classmethod
    def from_indices(cls, indices: Iterable[int], grid: TimeGrid) -> "CellSet":
        """Build from arbitrary cell indices, merging consecutive runs."""
        idx = np.unique(np.asarray(list(indices), dtype=np.int64))
        if len(idx) == 0:
            return cls.empty(grid)
        breaks = np.nonzero(np.diff(idx) > 1)[0]
        starts = np.concatenate(([0], breaks + 1))
        ends = np.concatenate((breaks, [len(idx) - 1]))
        ivals = tuple((int(idx[s]), int(idx[e]) + 1) for s, e in zip(starts, ends))
        return cls(ivals, grid)

    @property
    def n_cells(self) -> int:
        return sum(b - a for a, b in self.intervals)

    @property
    def measure(self) -> float:
        """Total covered time in seconds."""
        return self.n_cells * self.grid.dt

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def cell_indices(self) -> np.ndarray:
        """All member cells in ascending order."""
        if self.is_empty:
            return np.empty(0, dtype=np.int64)
        return np.concatenate([np.arange(a, b) for a, b in self.intervals])

    def mask(self) -> np.ndarray:
        out = np.zeros(self.grid.n_cells, dtype=bool)
        for a, b in self.intervals:
            out[a:b] = True
        return out

    def union(self, other: "CellSet") -> "CellSet":
        if other.grid != self.grid:
            raise ValueError("cell sets live on different grids")
        return CellSet.from_indices(
            np.concatenate([self.cell_indices(), other.cell_indices()]), self.grid)


def flip_set(schedule: Schedule, cells: CellSet,
             target_modes: Sequence[int] | np.ndarray | None = None) -> Schedule:
    """Return a copy of `schedule` with the modes on `cells` replaced.

    Without `target_modes` the schedule must be bimodal and each member cell
    flips to its complement. Otherwise `target_modes` gives the replacement
    mode per cell (full-length array; only entries inside `cells` are used).
    """
    n = schedule.grid.n_cells
    if cells.intervals and cells.intervals[-1][1] > n:
        raise OutOfRange("cell set extends past the schedule grid")
    new_modes = schedule.cell_modes.copy()
    idx = cells.cell_indices()
    if len(idx) == 0:
        return Schedule(new_modes, schedule.grid)
    if target_modes is None:
        if len(new_modes) and new_modes.max() > 1:
            raise ValueError("complement flip needs a bimodal schedule; "
                             "pass target_modes for more modes")
        new_modes[idx] = 1 - new_modes[idx]
    else:
        targets = np.asarray(target_modes, dtype=np.int64)
        if len(targets) != n:
            raise ValueError("target_modes must give one mode per grid cell")
        new_modes[idx] = targets[idx]
    return Schedule(new_modes, schedule.grid)


def schedule_from_blocks(blocks: Sequence[tuple[int, float]], grid: TimeGrid) -> Schedule:
    """Build a schedule from (mode, duration) blocks laid out left to right.

    Durations must be non-negative and sum to the horizon (1e-9 tolerance);
    each block rounds to whole cells and the last block absorbs the
    rounding remainder.
    """
    if not blocks:
        raise BadBlocks("block list is empty")
    total = 0.0
    for mode, dur in blocks:
        if dur < 0:
            raise BadBlocks(f"negative duration {dur} for mode {mode}")
        if mode < 0:
            raise BadBlocks(f"negative mode index {mode}")
        total += dur
    if abs(total - grid.horizon) > 1e-9 * max(1.0, grid.horizon):
        raise BadBlocks(
            f"block durations sum to {total}, horizon is {grid.horizon}")
    modes = np.empty(grid.n_cells, dtype=np.int64)
    pos = 0
    for k, (mode, dur) in enumerate(blocks):
        n = grid.n_cells - pos if k == len(blocks) - 1 else grid.cells_for_duration(dur)
        if n < 0 or pos + n > grid.n_cells:
            raise BadBlocks("block durations overflow the grid")
        modes[pos:pos + n] = mode
        pos += n
    return Schedule(modes, grid)


def schedule_to_blocks(schedule: Schedule) -> list[tuple[int, float]]:
    """Inverse of `schedule_from_blocks` up to cell rounding."""
    m = schedule.cell_modes
    if len(m) == 0:
        return []
    out = []
    start = 0
    for i in range(1, len(m) + 1):
        if i == len(m) or m[i] != m[start]:
            out.append((int(m[start]), (i - start) * schedule.grid.dt))
            start = i
    return out
