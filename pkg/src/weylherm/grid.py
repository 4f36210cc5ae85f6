"""Uniform finite-volume grid and the centered operators D and D*.

Rows may be 1-D (one Hermite mode) or 2-D with cells on the last axis; the
operators act along that axis.  Ghost values are zero unless the grid is
periodic.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid1D:
    a: float
    b: float
    nx: int
    periodic: bool = False

    def __post_init__(self):
        if self.nx < 3:
            raise ValueError("Grid1D needs at least 3 cells")
        if not self.b > self.a:
            raise ValueError("Grid1D needs b > a")

    @property
    def dx(self):
        return (self.b - self.a) / self.nx

    @property
    def centers(self):
        return self.a + (np.arange(self.nx) + 0.5) * self.dx

    @classmethod
    def from_spacing(cls, a, b, dx, periodic=False):
        """Grid whose cell count is ``(b - a) / dx`` rounded to an integer."""
        nx = int(round((b - a) / dx))
        return cls(a, b, nx, periodic)


def centered_difference(row, grid):
    """``(row_{j+1} - row_{j-1}) / (2 dx)`` along the last axis."""
    out = np.empty_like(row)
    out[..., 1:-1] = row[..., 2:] - row[..., :-2]
    if grid.periodic:
        out[..., 0] = row[..., 1] - row[..., -1]
        out[..., -1] = row[..., 0] - row[..., -2]
    else:
        out[..., 0] = row[..., 1]
        out[..., -1] = -row[..., -2]
    out *= 1.0 / (2.0 * grid.dx)
    return out


def apply_D(row, E, grid):
    """Discrete ``d/dx + V'``: centered difference minus ``E_j row_j``."""
    row = np.asarray(row)
    return centered_difference(row, grid) - E * row


def apply_D_star(row, E, grid):
    """Discrete adjoint of :func:`apply_D`: ``-d/dx + V'``."""
    row = np.asarray(row)
    return -centered_difference(row, grid) - E * row


def inner_product(u, v, grid):
    """``dx * sum(u * conj(v))`` over every entry."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    return grid.dx * np.vdot(v.ravel(), u.ravel())
