"""Normalized Hermite functions and Gauss-Hermite quadrature.

The Hermite functions are

    Phi_k(y) = H_k(y) exp(-y^2/2) / sqrt(2^k k! sqrt(pi))

and are evaluated by the three-term recursion on ``Phi_k`` itself, with a
per-point logarithmic scale so that neither the Gaussian factor nor the
polynomial growth over/underflows for moderate ``y`` and large ``k``.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

_LOG_PI_QUARTER = 0.25 * np.log(np.pi)
_RESCALE = 1e150


def _scaled_recursion(k_max, y):
    """Yield ``(k, p_k, log_scale)`` with ``Phi_k(y) = p_k * exp(log_scale)``.

    ``p_k`` is kept below ``_RESCALE`` in magnitude by folding its size into
    ``log_scale``.
    """
    log_scale = -0.5 * y * y - _LOG_PI_QUARTER
    p_prev = np.zeros_like(y)
    p = np.ones_like(y)
    yield 0, p, log_scale
    for k in range(k_max):
        p_next = np.sqrt(2.0 / (k + 1)) * y * p - np.sqrt(k / (k + 1.0)) * p_prev
        p_prev, p = p, p_next
        big = np.abs(p) > _RESCALE
        if np.any(big):
            f = np.where(big, np.abs(p), 1.0)
            p = p / f
            p_prev = p_prev / f
            log_scale = log_scale + np.log(f)
        yield k + 1, p, log_scale


def _unscale(p, log_scale):
    with np.errstate(divide="ignore"):
        return np.sign(p) * np.exp(np.log(np.abs(p)) + log_scale)


def _phi_table(k_max, y):
    out = np.empty((k_max + 1,) + y.shape)
    for k, p, log_scale in _scaled_recursion(k_max, y):
        out[k] = _unscale(p, log_scale)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite Hermite function value")
    return out


def eval_phi(k_max, y, derivative_order=0):
    """Return ``Phi_k^{(d)}(y)`` for ``k = 0..k_max``.

    Parameters
    ----------
    k_max : int
        Highest mode index (>= 0).
    y : float or array_like
        Evaluation point(s).
    derivative_order : {0, 1, 2}

    Returns
    -------
    ndarray of shape ``(k_max + 1,) + np.shape(y)``
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if derivative_order not in (0, 1, 2):
        raise ValueError("derivative_order must be 0, 1 or 2")
    y = np.asarray(y, dtype=float)
    if derivative_order == 0:
        return _phi_table(k_max, y)
    if derivative_order == 1:
        phi = _phi_table(k_max + 1, y)
        k = np.arange(k_max + 1, dtype=float).reshape((-1,) + (1,) * y.ndim)
        out = -np.sqrt((k + 1) / 2.0) * phi[1:]
        out[1:] += np.sqrt(k[1:] / 2.0) * phi[: k_max]
        return out
    phi = _phi_table(k_max, y)
    k = np.arange(k_max + 1, dtype=float).reshape((-1,) + (1,) * y.ndim)
    return (y * y - (2 * k + 1)) * phi


@lru_cache(maxsize=32)
def _values_at_zero(k_max):
    phi0 = eval_phi(k_max, 0.0, 0)
    dphi0 = eval_phi(k_max, 0.0, 1)
    phi0.setflags(write=False)
    dphi0.setflags(write=False)
    return phi0, dphi0


def phi_values_at_zero(k_max):
    """``(Phi_k(0), Phi_k'(0))`` for ``k = 0..k_max`` (read-only arrays).

    Odd ``Phi_k(0)`` and even ``Phi_k'(0)`` are exactly zero.
    """
    return _values_at_zero(int(k_max))


@dataclass(frozen=True)
class Quadrature:
    """Gauss-Hermite rule for the weight ``exp(-y^2)``.

    ``plain_weights`` are ``weights * exp(nodes**2)``, computed directly so
    they stay finite at large nodes where ``weights`` underflow.  Use them to
    integrate ``f(y) dy`` for ``f`` carrying its own Gaussian decay.
    """

    nodes: np.ndarray
    weights: np.ndarray
    plain_weights: np.ndarray

    @property
    def order(self):
        return self.nodes.size


def _newton_polish(z, Q, max_iter=100):
    for _ in range(max_iter):
        for k, p, ls in _scaled_recursion(Q, z):
            if k == Q - 1:
                prev = (p.copy(), ls)
            if k == Q:
                p_q, log_scale = p, ls
        # both values share the final scale; bring p_{Q-1} onto it
        p_qm1 = prev[0] * np.exp(prev[1] - log_scale)
        dz = p_q / (np.sqrt(2.0 * Q) * p_qm1)
        z = z - dz
        if np.all(np.abs(dz) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(z))):
            return z
    raise ArithmeticError(f"Gauss-Hermite Newton iteration did not converge for Q={Q}")


@lru_cache(maxsize=16)
def gauss_hermite(Q):
    """Gauss-Hermite nodes and weights of order ``Q`` (``1 <= Q <= 2048``).

    Nodes are the roots of ``H_Q``: eigenvalues of the Jacobi matrix give
    starting points, refined by Newton on the normalized recursion.
    """
    if not 1 <= Q <= 2048:
        raise ValueError("quadrature order must be in [1, 2048]")
    if Q == 1:
        nodes = np.zeros(1)
    else:
        guess = eigvalsh_tridiagonal(np.zeros(Q), np.sqrt(np.arange(1, Q) / 2.0))
        nodes = _newton_polish(np.sort(guess), Q)
        nodes = 0.5 * (nodes - nodes[::-1])
        if Q % 2:
            nodes[Q // 2] = 0.0
    for k, p, ls in _scaled_recursion(Q - 1, nodes):
        if k == Q - 1:
            log_abs_phi = np.log(np.abs(p)) + ls
    # w * exp(y^2) = 1 / (Q Phi_{Q-1}(y)^2)
    log_plain = -np.log(Q) - 2.0 * log_abs_phi
    log_plain = 0.5 * (log_plain + log_plain[::-1])
    plain = np.exp(log_plain)
    weights = np.exp(log_plain - nodes**2)
    for a in (nodes, weights, plain):
        a.setflags(write=False)
    return Quadrature(nodes, weights, plain)


def default_quadrature(n_max):
    """Quadrature of order ``2 (n_max + 1)`` used for all mode integrals."""
    return gauss_hermite(2 * (n_max + 1))


@lru_cache(maxsize=16)
def phi_at_nodes(k_max, Q):
    """Read-only table ``Phi_k(y_q)``, shape ``(k_max + 1, Q)``."""
    table = eval_phi(k_max, gauss_hermite(Q).nodes)
    table.setflags(write=False)
    return table
