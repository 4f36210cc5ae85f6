"""Exact harmonic-oscillator solution, the discrete L2 error and convergence studies.

For ``V = x^2 / 2`` the remainder of the potential difference vanishes and the
Wigner function is transported along the classical rotation.  The initial
kernel ``exp(-(x - x0)^2 / 2 - y^2 / 2 + i q0 y) / sqrt(2 pi)`` has an isotropic
Wigner function, so the solution stays a gaussian whose centre ``(c, q)``
rotates clockwise in phase space:

    c(t) = x0 cos t + q0 sin t,    q(t) = -x0 sin t + q0 cos t.
"""
import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import run
from .hermite import default_quadrature
from .states import project_function

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _centre(t, x0, q0):
    c, s = math.cos(t), math.sin(t)
    return x0 * c + q0 * s, -x0 * s + q0 * c


def harmonic_exact_R(t, x, y, x0=5.0, p0=0.0):
    """Closed-form kernel ``R(t, x, y)``; ``p0`` follows the initial-state convention."""
    c, q = _centre(t, x0, -p0)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * (x - c) ** 2 - 0.5 * y * y + 1j * q * y)


def harmonic_exact_wigner(t, x, xi, x0=5.0, p0=0.0):
    c, q = _centre(t, x0, -p0)
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return np.exp(-0.5 * ((x - c) ** 2 + (xi - q) ** 2)) / (2.0 * math.pi)


def _check_harmonic(scenario):
    if scenario.potential != "harmonic":
        raise ValueError(f"no exact solution for potential {scenario.potential!r}")
    init = scenario.initial
    if init.kind != "gaussian" or init.sigma_x != 1.0 or init.normalization != "raw" \
            or abs(init.amp - _INV_SQRT_2PI) > 1e-15:
        raise ValueError("exact solution needs the unit-width gaussian with default amplitude")


def harmonic_exact_field(t, grid, n_max, quadrature=None, x0=5.0, p0=0.0):
    """Hermite coefficients of the exact kernel at time ``t``."""
    quad = quadrature or default_quadrature(n_max)
    return project_function(lambda x, y: harmonic_exact_R(t, x, y, x0, p0), grid, n_max, quad)


def error_norm(numeric, exact, dx):
    """``max_n sqrt(dx * sum_{k,j} |numeric_n - exact_n|^2)``."""
    numeric = list(numeric)
    exact = list(exact)
    if len(numeric) != len(exact):
        raise ValueError(f"history lengths differ: {len(numeric)} vs {len(exact)}")
    if not numeric:
        raise ValueError("empty history")
    worst = 0.0
    for a, b in zip(numeric, exact):
        if np.shape(a) != np.shape(b):
            raise ValueError(f"field shapes differ: {np.shape(a)} vs {np.shape(b)}")
        d = np.asarray(a) - np.asarray(b)
        worst = max(worst, math.sqrt(dx * float(np.vdot(d, d).real)))
    return worst


@dataclass(frozen=True)
class ConvergenceRow:
    dt: float
    dx: float
    error: float
    order: Optional[float] = None


def harmonic_run_error(scenario):
    """Run ``scenario`` and return the error against the exact solution, sampled every step."""
    _check_harmonic(scenario)
    grid = scenario.grid
    quad = default_quadrature(scenario.n_max)
    if scenario.quadrature_order:
        from .hermite import gauss_hermite
        quad = gauss_hermite(scenario.quadrature_order)
    x0, p0 = scenario.initial.x0, scenario.initial.p0
    worst = [0.0]

    def on_step(n, t, R):
        ex = harmonic_exact_field(t, grid, scenario.n_max, quad, x0, p0)
        worst[0] = max(worst[0], error_norm([R], [ex], grid.dx))

    run(scenario, on_step=on_step)
    return worst[0]


def convergence_study(scenario, refinements, n_max=None):
    """Error rows for ``dt = dx = d`` over ``refinements``.

    ``nx`` is ``round((b - a) / d)``.  Orders are ``log2`` of consecutive error
    ratios scaled by the actual refinement factor.
    """
    refinements = [float(d) for d in refinements]
    if not refinements:
        raise ValueError("refinement list is empty")
    if any(d <= 0 for d in refinements):
        raise ValueError("refinements must be positive")
    _check_harmonic(scenario)
    if n_max is not None:
        scenario = scenario.replace(n_max=n_max)
    rows = []
    for d in refinements:
        nx = max(3, int(round((scenario.b - scenario.a) / d)))
        sc = scenario.replace(nx=nx, dt=d, output=scenario.output.__class__(interval=scenario.t_final or d))
        err = harmonic_run_error(sc)
        order = None
        if rows:
            prev = rows[-1]
            order = math.log(prev.error / err) / math.log(prev.dt / d) if err > 0 else math.inf
        rows.append(ConvergenceRow(d, sc.grid.dx, err, order))
    return rows


def write_convergence_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["dt", "dx", "error", "order"])
        for r in rows:
            w.writerow([repr(r.dt), repr(r.dx), repr(r.error), "" if r.order is None else repr(r.order)])
