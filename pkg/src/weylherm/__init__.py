"""Hermite spectral / finite-volume solver for the von Neumann equation in Weyl variables.

The density kernel ``R(t, x, y)`` is expanded in Hermite functions of ``y``;
the resulting hyperbolic system in ``x`` is discretized with centred finite
volumes and integrated with Crank-Nicolson.  Hot loops live in a compiled
extension with a numpy fallback; ``kernels.BACKEND`` says which one is active.
"""
from .coupling import CouplingOperator, apply_coupling, assemble, residual_norms
from .dynamics import (KrylovNoConvergence, RunOutputs, StepperConfig, apply_generator,
                       cn_step, prepare, run)
from .grid import Grid1D, apply_D, apply_D_star, inner_product
from .hermite import default_quadrature, eval_phi, gauss_hermite
from .kernels import BACKEND
from .observables import (kinetic_energy, l2_norm, macro_densities, trace, wigner,
                          wigner_moments)
from .potentials import make_potential
from .reference_oracle import (ConvergenceRow, convergence_study, error_norm,
                               harmonic_exact_field)
from .scenario import ConfigError, OutputPlan, Scenario
from .states import InitialState, get_preset, project

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConfigError", "ConvergenceRow", "CouplingOperator", "Grid1D", "InitialState",
    "KrylovNoConvergence", "OutputPlan", "RunOutputs", "Scenario", "StepperConfig",
    "apply_D", "apply_D_star", "apply_coupling", "apply_generator", "assemble", "cn_step",
    "convergence_study", "default_quadrature", "error_norm", "eval_phi", "gauss_hermite",
    "get_preset", "harmonic_exact_field", "inner_product", "kinetic_energy", "l2_norm",
    "macro_densities", "make_potential", "prepare", "project", "residual_norms", "run",
    "trace", "wigner", "wigner_moments",
]
