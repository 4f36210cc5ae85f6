"""Trace, norm, macroscopic densities, kinetic energy and the Wigner transform."""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .hermite import eval_phi, phi_values_at_zero

IMAG_TOL = 1e-10


class ImaginaryResidualWarning(UserWarning):
    """A quantity that should be real kept a non-negligible imaginary part."""


def _real(value, what):
    value = np.asarray(value)
    scale = max(1.0, float(np.max(np.abs(value.real), initial=0.0)))
    resid = float(np.max(np.abs(value.imag), initial=0.0))
    if resid > IMAG_TOL * scale:
        warnings.warn(f"{what}: imaginary residual {resid:.3e}", ImaginaryResidualWarning,
                      stacklevel=3)
    return value.real


@dataclass(frozen=True)
class MacroFields:
    rho: np.ndarray
    rho_u: np.ndarray
    rho_e: np.ndarray


@dataclass(frozen=True)
class WignerField:
    x: np.ndarray
    xi: np.ndarray
    W: np.ndarray  # shape (nx, n_xi)
    imag_residual: float


def trace(field, grid):
    """``int R(x, 0) dx``."""
    phi0, _ = phi_values_at_zero(field.shape[0] - 1)
    return float(_real(grid.dx * np.sum(phi0 @ field), "trace"))


def l2_norm(field, grid):
    return math.sqrt(grid.dx * float(np.vdot(field, field).real))


def macro_densities(field, grid):
    """Density ``R(x,0)``, momentum ``-i dR/dy(x,0)`` and energy ``-d2R/dy2(x,0) / 2``.

    The momentum sign makes ``rho_u`` the first ``xi`` moment of the Wigner
    function, so that ``d rho/dt + d(rho_u)/dx = 0``.
    """
    n_max = field.shape[0] - 1
    phi0, dphi0 = phi_values_at_zero(n_max)
    k = np.arange(n_max + 1)
    rho = phi0 @ field
    rho_u = -1j * (dphi0 @ field)
    # Phi_k''(0) = -(2k + 1) Phi_k(0)
    rho_e = 0.5 * (((2 * k + 1) * phi0) @ field)
    return MacroFields(_real(rho, "rho"), _real(rho_u, "rho_u"), _real(rho_e, "rho_e"))


def kinetic_energy(field, grid):
    n_max = field.shape[0] - 1
    phi0, _ = phi_values_at_zero(n_max)
    k = np.arange(n_max + 1)
    val = 0.5 * grid.dx * np.sum(((2 * k + 1) * phi0) @ field)
    return float(_real(val, "kinetic energy"))


def potential_energy(field, grid, model):
    phi0, _ = phi_values_at_zero(field.shape[0] - 1)
    rho = _real(phi0 @ field, "rho")
    return float(grid.dx * np.sum(model.value(grid.centers) * rho))


def default_xi_grid():
    return np.linspace(-8.0, 8.0, 256)


def wigner(field, grid, xi=None):
    """``W(x_j, xi) = sum_k (-i)^k R_{k,j} Phi_k(xi) / sqrt(2 pi)``."""
    xi = default_xi_grid() if xi is None else np.asarray(xi, dtype=float)
    n_max = field.shape[0] - 1
    phase = (-1j) ** (np.arange(n_max + 1) % 4)
    Wc = ((phase[:, None] * field).T @ eval_phi(n_max, xi)) / math.sqrt(2.0 * math.pi)
    resid = float(np.max(np.abs(Wc.imag), initial=0.0))
    if resid > IMAG_TOL:
        warnings.warn(f"Wigner synthesis: imaginary residual {resid:.3e}",
                      ImaginaryResidualWarning, stacklevel=2)
    return WignerField(grid.centers, xi, np.ascontiguousarray(Wc.real), resid)


def wigner_moments(wf, grid):
    """``(int W, int W xi^2)`` as plain Riemann sums over the stored grids."""
    dxi = wf.xi[1] - wf.xi[0]
    total = grid.dx * dxi * float(wf.W.sum())
    second = grid.dx * dxi * float((wf.W * wf.xi**2).sum())
    return total, second
