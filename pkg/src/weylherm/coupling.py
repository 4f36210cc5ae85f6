"""Hermite matrix elements of the nonlocal potential remainder.

For a potential ``V`` and semiclassical parameter ``hbar`` the remainder is

    E(x, y) = [V(x + hbar y/2) - V(x - hbar y/2)] / hbar - V'(x) y

and the coupling matrix at a cell centre is ``M[k, l] = int E Phi_k Phi_l dy``.
``M`` is real symmetric and vanishes whenever ``k + l`` is even, so only the
even-row/odd-column block is stored.  The truncated operator keeps the
``hbar^2 V''' y^3 / 24`` term only, a four-entry band in mode space.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .hermite import default_quadrature, phi_at_nodes

COUPLING_MODES = ("full", "truncated", "none")
_ASSEMBLY_CHUNK = 64


@dataclass(frozen=True)
class CouplingOperator:
    """Per-cell coupling in one of three modes.

    full
        ``blocks[j, a, b] = M_j[2a, 2b + 1]``, shape ``(nx, n_even, n_odd)``.
    truncated
        ``band_weight[j] = hbar^2 V'''(x_j) / 24``.
    none
        No coupling (the semi-classical limit system).
    """

    mode: str
    hbar: float
    n_max: int
    nx: int
    blocks: Optional[np.ndarray] = None
    band_weight: Optional[np.ndarray] = None

    def dense(self, j):
        """Full ``(N+1) x (N+1)`` matrix at cell ``j`` (diagnostics only)."""
        n = self.n_max + 1
        M = np.zeros((n, n))
        if self.mode == "full":
            M[0::2, 1::2] = self.blocks[j]
            M[1::2, 0::2] = self.blocks[j].T
        elif self.mode == "truncated":
            M = self.band_weight[j] * y3_matrix(self.n_max)
        return M


def band_coefficients(n_max):
    """Coefficients of ``R_{k-1}, R_{k+1}, R_{k-3}, R_{k+3}`` in the y^3 band."""
    k = np.arange(n_max + 1, dtype=float)
    c_m1 = 1.5 * k * np.sqrt(k / 2.0)
    c_p1 = 1.5 * (k + 1) * np.sqrt((k + 1) / 2.0)
    c_m3 = np.sqrt(k * np.maximum(k - 1, 0) * np.maximum(k - 2, 0) / 8.0)
    c_p3 = np.sqrt((k + 1) * (k + 2) * (k + 3) / 8.0)
    return c_m1, c_p1, c_m3, c_p3


def y3_matrix(n_max):
    """Closed-form ``int y^3 Phi_k Phi_l dy`` for ``k, l <= n_max``."""
    n = n_max + 1
    c_m1, c_p1, c_m3, c_p3 = band_coefficients(n_max)
    M = np.zeros((n, n))
    idx = np.arange(n)
    M[idx[1:], idx[1:] - 1] = c_m1[1:]
    M[idx[:-1], idx[:-1] + 1] = c_p1[:-1]
    M[idx[3:], idx[3:] - 3] = c_m3[3:]
    M[idx[:-3], idx[:-3] + 3] = c_p3[:-3]
    return M


@lru_cache(maxsize=1)
def _check_band_once():
    n_max = 12
    P = phi_at_nodes(n_max, 2 * (n_max + 1))
    quad = default_quadrature(n_max)
    oracle = (P * (quad.plain_weights * quad.nodes**3)) @ P.T
    err = np.abs(oracle - y3_matrix(n_max)).max()
    if err > 1e-11:
        raise AssertionError(f"y^3 band coefficients disagree with quadrature ({err:.3e})")
    return err


def remainder(model, hbar, x, y):
    """``E(x, y)`` on the broadcast of ``x`` and ``y``."""
    return model.odd_difference(x, y, hbar) - model.d1(x) * y


def full_coupling_matrix(model, hbar, x, n_max, quadrature=None):
    """Dense ``M[k, l](x)`` by quadrature, without parity forcing.

    Returns an array of shape ``(len(x), n_max + 1, n_max + 1)``.
    """
    quad = quadrature or default_quadrature(n_max)
    P = phi_at_nodes(n_max, quad.order)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    F = quad.plain_weights * remainder(model, hbar, x[:, None], quad.nodes[None, :])
    return np.matmul(P[None, :, :] * F[:, None, :], P.T[None, :, :])


def assemble_full(model, hbar, grid, n_max, quadrature=None):
    if hbar <= 0:
        raise ValueError("hbar must be positive for the full coupling")
    quad = quadrature or default_quadrature(n_max)
    if quad.order < 2 * (n_max + 1):
        raise ValueError("quadrature order must be at least 2 (N + 1)")
    P = phi_at_nodes(n_max, quad.order)
    P_even, P_odd_T = P[0::2], np.ascontiguousarray(P[1::2].T)
    x = grid.centers
    blocks = np.empty((grid.nx, P_even.shape[0], P_odd_T.shape[1]))
    for start in range(0, grid.nx, _ASSEMBLY_CHUNK):
        xs = x[start:start + _ASSEMBLY_CHUNK]
        F = quad.plain_weights * remainder(model, hbar, xs[:, None], quad.nodes[None, :])
        np.matmul(P_even[None, :, :] * F[:, None, :], P_odd_T, out=blocks[start:start + xs.size])
    return CouplingOperator("full", float(hbar), n_max, grid.nx, blocks=blocks)


def assemble_truncated(model, hbar, grid, n_max):
    _check_band_once()
    if hbar < 0:
        raise ValueError("hbar must be non-negative")
    w = hbar * hbar * model.third_derivative(grid.centers) / 24.0
    return CouplingOperator("truncated", float(hbar), n_max, grid.nx,
                            band_weight=np.ascontiguousarray(w, dtype=float))


def no_coupling(grid, n_max):
    return CouplingOperator("none", 0.0, n_max, grid.nx)


def assemble(mode, model, hbar, grid, n_max, quadrature=None):
    if mode == "full":
        return assemble_full(model, hbar, grid, n_max, quadrature)
    if mode == "truncated":
        return assemble_truncated(model, hbar, grid, n_max)
    if mode == "none":
        return no_coupling(grid, n_max)
    raise ValueError(f"unknown coupling mode {mode!r}")


def apply_coupling(op, field):
    """Real matrix action ``out[k, j] = sum_l M_j[k, l] field[l, j]``."""
    field = np.ascontiguousarray(field, dtype=complex)
    out = np.zeros_like(field)
    if op.mode == "full":
        kernels.add_full_coupling(op.blocks, field, out, 1.0)
    elif op.mode == "truncated":
        kernels.add_band_coupling(op.band_weight, field, out, 1.0)
    return out


def residual_norms(field, model, hbar, grid, quadrature=None):
    """L2 norms of the remainder after removing the linear and the cubic terms.

    Returns ``(D2, D4)``.  Both vanish for ``hbar = 0``.
    """
    if hbar == 0:
        return 0.0, 0.0
    n_max = field.shape[0] - 1
    quad = quadrature or default_quadrature(n_max)
    P = phi_at_nodes(n_max, quad.order)
    x = grid.centers[:, None]
    y = quad.nodes[None, :]
    R = field.T @ P
    f2 = remainder(model, hbar, x, y)
    f4 = f2 - (hbar * hbar / 24.0) * model.third_derivative(x) * y**3
    w = grid.dx * quad.plain_weights
    d2 = np.sqrt(np.sum(w * np.abs(f2 * R) ** 2))
    d4 = np.sqrt(np.sum(w * np.abs(f4 * R) ** 2))
    return float(d2), float(d4)
