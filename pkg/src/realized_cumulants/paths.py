"""Sampled trajectories of the conditional cumulant vector process.

A :class:`MultiPath` holds one trajectory of ``(X^(1), ..., X^(k))`` on a
time grid, optionally with the exact jumps that occurred between grid
points.  :class:`PathBatch` stores many paths on a shared grid as dense
arrays, which is what the Monte Carlo code works with.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["JumpMark", "MultiPath", "PathBatch"]


@dataclass(frozen=True)
class JumpMark:
    """A jump at ``time`` with increment vector ``jump`` (one entry per component)."""

    time: float
    jump: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "jump", np.asarray(self.jump, dtype=float).reshape(-1))


def _validate_grid(grid: np.ndarray) -> None:
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-D array")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid times must be strictly increasing")


@dataclass
class MultiPath:
    """One trajectory of the first ``k`` conditional cumulant processes.

    Parameters
    ----------
    grid : array_like, shape (N+1,)
        Strictly increasing observation times ``t_0 < ... < t_N``.
    values : array_like, shape (N+1, k)
        ``values[j, i-1]`` is ``X^(i)`` at ``grid[j]``.
    jump_marks : sequence of JumpMark, optional
        Exact jumps in ``(t_0, t_N]``.  ``None`` means no jump information is
        available, which is different from an empty list (known to be
        continuous).
    """

    grid: np.ndarray
    values: np.ndarray
    jump_marks: tuple[JumpMark, ...] | None = None

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim == 1:
            self.values = self.values[:, None]
        _validate_grid(self.grid)
        if self.values.ndim != 2 or self.values.shape[0] != self.grid.size:
            raise ValueError(
                f"values must have shape ({self.grid.size}, k), got {self.values.shape}"
            )
        if self.jump_marks is not None:
            marks = tuple(self.jump_marks)
            for mark in marks:
                if not (self.grid[0] < mark.time <= self.grid[-1]):
                    raise ValueError(f"jump mark at t={mark.time} outside (t_0, t_N]")
                if mark.jump.size != self.n_components:
                    raise ValueError("jump mark arity does not match the number of components")
            self.jump_marks = marks

    @property
    def n_components(self) -> int:
        return self.values.shape[1]

    @property
    def n_cells(self) -> int:
        return self.grid.size - 1

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    def component(self, i: int) -> np.ndarray:
        """Values of ``X^(i)`` (1-based)."""
        return self.values[:, i - 1]

    def increments(self, n: int | None = None) -> np.ndarray:
        """Cell increments of the first ``n`` components, shape ``(N, n)``."""
        n = self.n_components if n is None else n
        return np.diff(self.values[:, :n], axis=0)

    def restrict(self, t_start: float = None, points=None) -> "MultiPath":
        """Sub-path on grid points ``>= t_start`` or on an explicit subset of grid times.

        Jump marks outside the retained window are dropped; marks are never
        merged, so a coarser partition keeps every individual jump.
        """
        if points is None:
            lo = self.grid[0] if t_start is None else t_start
            keep = self.grid >= lo
        else:
            points = np.asarray(points, dtype=float)
            keep = np.isin(self.grid, points)
            if keep.sum() != np.unique(points).size:
                raise ValueError("partition points must be grid times")
        grid = self.grid[keep]
        marks = None
        if self.jump_marks is not None:
            marks = tuple(m for m in self.jump_marks if grid[0] < m.time <= grid[-1])
        return MultiPath(grid, self.values[keep], marks)

    def concat(self, other: "MultiPath") -> "MultiPath":
        """Join with a path that starts where this one ends."""
        if other.grid[0] != self.grid[-1] or not np.array_equal(other.values[0], self.values[-1]):
            raise ValueError("paths are not adjacent")
        marks = None
        if self.jump_marks is not None and other.jump_marks is not None:
            marks = self.jump_marks + other.jump_marks
        return MultiPath(
            np.concatenate([self.grid, other.grid[1:]]),
            np.vstack([self.values, other.values[1:]]),
            marks,
        )


@dataclass
class PathBatch:
    """Many paths on one grid, stored densely.

    Jump marks are flattened: mark ``m`` belongs to path ``mark_path[m]``,
    happens at ``mark_time[m]`` and has increment ``mark_jump[m]``.
    ``mark_path is None`` means no jump information.
    """

    grid: np.ndarray
    values: np.ndarray  # (P, N+1, k)
    mark_path: np.ndarray | None = None
    mark_time: np.ndarray | None = None
    mark_jump: np.ndarray | None = None
    path_ids: np.ndarray | None = field(default=None)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        _validate_grid(self.grid)
        if self.values.ndim != 3 or self.values.shape[1] != self.grid.size:
            raise ValueError("values must have shape (P, N+1, k)")
        if self.mark_path is not None:
            self.mark_path = np.asarray(self.mark_path, dtype=np.int64)
            self.mark_time = np.asarray(self.mark_time, dtype=float)
            self.mark_jump = np.asarray(self.mark_jump, dtype=float).reshape(-1, self.n_components)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def n_components(self) -> int:
        return self.values.shape[2]

    @property
    def has_marks(self) -> bool:
        return self.mark_path is not None

    def cell_jump_totals(self, n: int | None = None) -> np.ndarray:
        """Sum of the jump marks falling in each cell ``(t_{j-1}, t_j]``, shape (P, N, n)."""
        if not self.has_marks:
            raise ValueError("batch carries no jump marks")
        n = self.n_components if n is None else n
        out = np.zeros((len(self), self.grid.size - 1, n))
        if self.mark_path.size:
            cell = np.searchsorted(self.grid, self.mark_time, side="left") - 1
            np.add.at(out, (self.mark_path, cell), self.mark_jump[:, :n])
        return out

    def path(self, i: int) -> MultiPath:
        marks = None
        if self.has_marks:
            sel = self.mark_path == i
            marks = tuple(JumpMark(t, j) for t, j in zip(self.mark_time[sel], self.mark_jump[sel]))
        return MultiPath(self.grid, self.values[i], marks)

    def paths(self) -> list[MultiPath]:
        return [self.path(i) for i in range(len(self))]

    @classmethod
    def from_paths(cls, paths: list[MultiPath]) -> "PathBatch":
        """Stack paths sharing one grid into a batch."""
        if not paths:
            raise ValueError("need at least one path")
        grid = paths[0].grid
        for p in paths[1:]:
            if not np.array_equal(p.grid, grid):
                raise ValueError("paths must share a grid to be batched")
        values = np.stack([p.values for p in paths])
        if all(p.jump_marks is not None for p in paths):
            mp, mt, mj = [], [], []
            for i, p in enumerate(paths):
                for m in p.jump_marks:
                    mp.append(i)
                    mt.append(m.time)
                    mj.append(m.jump)
            k = values.shape[2]
            return cls(grid, values, np.array(mp, dtype=np.int64), np.array(mt, dtype=float),
                       np.array(mj, dtype=float).reshape(-1, k))
        return cls(grid, values)
