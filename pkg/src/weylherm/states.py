"""Initial conditions, Hermite projection, and the four preset scenarios."""
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .hermite import default_quadrature, phi_at_nodes, phi_values_at_zero

TRUNCATION_WARN_RATIO = 1e-8


class TruncationWarning(UserWarning):
    """The highest retained Hermite mode carries significant weight."""


@dataclass(frozen=True)
class InitialState:
    """Initial kernel ``R_in(x, y)``.

    The gaussian kind is
    ``amplitude * exp(-((x - x0)^2 / sigma_x^2 + y^2) / 2) * exp(-1j * p0 * y)``,
    i.e. a packet with mean momentum ``-p0``.  ``amplitude`` defaults to
    ``1 / (sqrt(2 pi) sigma_x)``, which has unit trace.
    """

    kind: str = "gaussian"
    x0: float = 0.0
    sigma_x: float = 1.0
    p0: float = 0.0
    amplitude: Optional[float] = None
    normalization: str = "raw"
    func: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "custom"):
            raise ValueError(f"unknown initial state kind {self.kind!r}")
        if self.normalization not in ("raw", "unit-trace"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom initial state needs a function")
        if self.kind == "gaussian" and not self.sigma_x > 0:
            raise ValueError("sigma_x must be positive")

    @property
    def amp(self):
        if self.amplitude is not None:
            return self.amplitude
        return 1.0 / (math.sqrt(2.0 * math.pi) * self.sigma_x)

    def __call__(self, x, y):
        if self.kind == "custom":
            return self.func(x, y)
        return (self.amp * np.exp(-0.5 * ((x - self.x0) ** 2 / self.sigma_x**2 + y * y))
                * np.exp(-1j * self.p0 * y))


def project_function(func, grid, n_max, quadrature=None):
    """``R_{k,j} = int func(x_j, y) Phi_k(y) dy`` by Gauss-Hermite quadrature."""
    quad = quadrature or default_quadrature(n_max)
    if quad.order < 2 * (n_max + 1):
        raise ValueError("quadrature order must be at least 2 (N + 1)")
    P = phi_at_nodes(n_max, quad.order)
    values = func(grid.centers[:, None], quad.nodes[None, :])
    values = np.broadcast_to(values, (grid.nx, quad.order))
    return np.ascontiguousarray(((values * quad.plain_weights) @ P.T).T, dtype=complex)


def project(state, grid, n_max, quadrature=None):
    field = project_function(state, grid, n_max, quadrature)
    peak = np.abs(field).max()
    if peak > 0 and np.abs(field[-1]).max() / peak > TRUNCATION_WARN_RATIO:
        warnings.warn(
            f"highest Hermite mode N={n_max} holds {np.abs(field[-1]).max() / peak:.2e} "
            "of the peak coefficient; N is likely too small for this state",
            TruncationWarning, stacklevel=2)
    if state.normalization == "unit-trace":
        phi0, _ = phi_values_at_zero(n_max)
        tr = (grid.dx * np.sum(phi0 @ field)).real
        if tr <= 1e-14:
            raise ValueError(f"cannot normalize to unit trace (trace={tr:.3e})")
        field /= tr
    return field


def _scenario(**kw):
    from .scenario import OutputPlan, Scenario
    output = kw.pop("output")
    return Scenario(output=OutputPlan(**output), **kw)


# Phi_N lives on |xi| < sqrt(2N + 1), so the Wigner grid must reach past it
# once high modes are populated
_DESK_XI = dict(xi_min=-20.0, xi_max=20.0, xi_count=640)
_WIDE_XI = dict(xi_min=-32.0, xi_max=32.0, xi_count=1280)


def _presets():
    from .dynamics import StepperConfig
    two_pi = 2.0 * math.pi
    return {
        "harmonic": dict(
            full=dict(a=-8.0, b=8.0, nx=400, n_max=20, dt=0.04, t_final=two_pi, hbar=1.0,
                      potential="harmonic", coupling="truncated",
                      initial=InitialState(x0=5.0, sigma_x=1.0),
                      stepper=StepperConfig(restart=60, max_iter=2000),
                      output=dict(interval=0.2, snapshot_times=(0.0, math.pi, two_pi),
                                  xi_min=-12.0, xi_max=12.0, xi_count=384)),
            desk=dict(nx=100, dt=0.08),
        ),
        "quartic": dict(
            full=dict(a=-4.0, b=4.0, nx=400, n_max=400, dt=0.01, t_final=70.0, hbar=0.5,
                      potential="quartic", potential_params={"beta": 0.5}, coupling="truncated",
                      initial=InitialState(x0=0.0, sigma_x=0.6),
                      output=dict(interval=0.1, snapshot_times=(0.0, 10.0, 20.0, 30.0, 50.0, 70.0),
                                  **_WIDE_XI)),
            desk=dict(nx=200, n_max=128, dt=0.02, t_final=50.0,
                      output=dict(interval=0.1, snapshot_times=(0.0, 10.0, 20.0, 30.0, 50.0),
                                  **_DESK_XI)),
        ),
        "tunneling": dict(
            full=dict(a=-12.0, b=16.0, nx=1000, n_max=400, dt=0.01, t_final=3.2, hbar=0.1,
                      potential="gaussian_barrier", coupling="full",
                      initial=InitialState(x0=-5.0, sigma_x=0.6, p0=-4.0),
                      output=dict(interval=0.05, snapshot_times=(0.0, 0.8, 1.6, 2.4, 2.8, 3.2),
                                  xi_min=-8.0, xi_max=12.0, xi_count=320)),
            desk=dict(nx=250, n_max=128),
        ),
        "morse": dict(
            full=dict(a=-4.0, b=16.0, nx=1000, n_max=400, dt=0.01, t_final=20.0, hbar=0.5,
                      potential="morse", coupling="full",
                      initial=InitialState(x0=4.0, sigma_x=0.6),
                      output=dict(interval=0.1, snapshot_times=(0.0, 4.0, 8.0, 12.0, 16.0, 20.0),
                                  **_WIDE_XI)),
            desk=dict(nx=200, n_max=128,
                      output=dict(interval=0.1, snapshot_times=(0.0, 4.0, 8.0, 12.0, 16.0, 20.0),
                                  **_DESK_XI)),
        ),
    }


PRESET_NAMES = ("harmonic", "quartic", "tunneling", "morse")


def get_preset(name, desk=False):
    """Scenario for a named preset; ``desk=True`` gives the reduced CI variant."""
    table = _presets()
    if name not in table:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    entry = table[name]
    kw = dict(entry["full"])
    if desk:
        kw.update(entry["desk"])
    return _scenario(name=f"{name}-desk" if desk else name, **kw)


def scenario_presets(desk=False):
    return {name: get_preset(name, desk) for name in PRESET_NAMES}


def with_initial(scenario, **changes):
    return replace(scenario, initial=replace(scenario.initial, **changes))
