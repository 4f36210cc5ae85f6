"""Run description shared by the stepper, the oracle harness and the CLI."""
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .coupling import COUPLING_MODES
from .dynamics import StepperConfig
from .grid import Grid1D
from .potentials import PRESETS, make_potential
from .states import InitialState


class ConfigError(ValueError):
    """Invalid scenario; ``field`` names the offending setting."""

    def __init__(self, field, message):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class OutputPlan:
    interval: float = 0.1
    snapshot_times: tuple = ()
    xi_min: float = -8.0
    xi_max: float = 8.0
    xi_count: int = 256
    out_dir: Optional[str] = None

    def xi_grid(self):
        return np.linspace(self.xi_min, self.xi_max, self.xi_count)


@dataclass(frozen=True)
class Scenario:
    name: str
    a: float
    b: float
    nx: int
    n_max: int
    hbar: float
    dt: float
    t_final: float
    potential: str = "harmonic"
    potential_params: dict = field(default_factory=dict)
    initial: InitialState = field(default_factory=InitialState)
    coupling: str = "full"
    boundary: str = "zero"
    quadrature_order: Optional[int] = None
    stepper: StepperConfig = field(default_factory=StepperConfig)
    output: OutputPlan = field(default_factory=OutputPlan)

    def __post_init__(self):
        self.validate()
        if self.hbar == 0 and self.coupling != "none":
            object.__setattr__(self, "coupling", "none")

    def validate(self):
        def need(cond, name, msg):
            if not cond:
                raise ConfigError(name, msg)

        need(self.dt > 0, "dt", "dt must be positive")
        need(self.t_final >= 0, "t_final", "t_final must be non-negative")
        need(self.b > self.a, "b", "b must be greater than a")
        need(self.nx >= 3, "nx", "nx must be at least 3")
        need(self.n_max >= 0, "n_max", "n_max must be non-negative")
        need(self.hbar >= 0, "hbar", "hbar must be non-negative")
        need(self.potential in PRESETS, "potential",
             f"potential must be one of {', '.join(PRESETS)}")
        need(self.coupling in COUPLING_MODES, "coupling",
             f"coupling must be one of {', '.join(COUPLING_MODES)}")
        need(self.boundary in ("zero", "periodic"), "boundary", "boundary must be 'zero' or 'periodic'")
        need(self.quadrature_order is None or self.quadrature_order >= 2 * (self.n_max + 1),
             "quadrature_order", "quadrature_order must be at least 2 (n_max + 1)")
        need(0 < self.stepper.tol < 1, "krylov_tol", "krylov_tol must lie in (0, 1)")
        need(self.output.interval > 0, "interval", "output interval must be positive")
        need(self.output.xi_count >= 2 and self.output.xi_max > self.output.xi_min,
             "xi", "xi grid needs xi_max > xi_min and at least 2 nodes")
        for t in self.output.snapshot_times:
            need(0 <= t <= self.t_final + 1e-12, "snapshot_times",
                 f"snapshot time {t} outside [0, t_final]")

    @property
    def grid(self):
        return Grid1D(self.a, self.b, self.nx, periodic=self.boundary == "periodic")

    def potential_model(self):
        return make_potential(self.potential, **self.potential_params)

    def replace(self, **changes):
        return replace(self, **changes)
