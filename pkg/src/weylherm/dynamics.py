"""Discrete generator, Crank-Nicolson stepping and the run loop.

The semi-discrete system is ``dR/dt = M R`` with ``M`` skew-Hermitian for the
discrete inner product, so each Crank-Nicolson step is a Cayley transform and
preserves the L2 norm up to the linear-solver residual.  The implicit system
is solved matrix-free with restarted GMRES.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .coupling import assemble, residual_norms
from .hermite import default_quadrature, gauss_hermite
from .observables import kinetic_energy, l2_norm, trace
from .potentials import discrete_force
from .states import project


class KrylovNoConvergence(RuntimeError):
    """GMRES missed the tolerance within ``max_iter`` iterations."""

    def __init__(self, iterations, residual, target):
        super().__init__(
            f"GMRES did not converge: residual {residual:.3e} > {target:.3e} "
            f"after {iterations} iterations (reduce dt or relax krylov_tol)")
        self.iterations = iterations
        self.residual = residual
        self.outputs = None


@dataclass(frozen=True)
class StepperConfig:
    tol: float = 1e-10
    restart: int = 40
    max_iter: int = 500
    # re-impose R_k = (-1)^k conj(R_k) after each step when the input has it
    enforce_parity: bool = True

    def __post_init__(self):
        if not 0 < self.tol < 1:
            raise ValueError("krylov tolerance must lie in (0, 1)")
        if self.restart < 1 or self.max_iter < 1:
            raise ValueError("restart and max_iter must be positive")


class Generator:
    """``R -> M R`` for a fixed grid, force field and coupling."""

    def __init__(self, grid, E, coupling):
        self.grid = grid
        self.E = np.ascontiguousarray(E, dtype=float)
        self.coupling = coupling
        self.shape = (coupling.n_max + 1, grid.nx)

    def __call__(self, R, out=None):
        R = np.ascontiguousarray(R, dtype=complex).reshape(self.shape)
        if out is None:
            out = np.empty_like(R)
        kernels.advect(R, self.E, self.grid.dx, self.grid.periodic, out)
        op = self.coupling
        if op.mode == "full":
            kernels.add_full_coupling(op.blocks, R, out, -1j)
        elif op.mode == "truncated":
            kernels.add_band_coupling(op.band_weight, R, out, -1j)
        return out


def apply_generator(field, E, coupling, grid):
    return Generator(grid, E, coupling)(field)


def gmres(matvec, b, atol, restart=40, max_iter=500):
    """Restarted GMRES from a zero initial guess.

    Stops when ``||b - A x|| <= atol``.  Returns ``(x, iterations)``; raises
    :class:`KrylovNoConvergence` after ``max_iter`` Arnoldi steps.
    """
    n = b.size
    x = np.zeros(n, dtype=complex)
    r = b.copy()
    beta = np.linalg.norm(r)
    its = 0
    if beta <= atol:
        return x, 0
    while its < max_iter:
        m = min(restart, max_iter - its)
        V = np.empty((m + 1, n), dtype=complex)
        H = np.zeros((m + 1, m), dtype=complex)
        cs = np.zeros(m, dtype=complex)
        sn = np.zeros(m, dtype=complex)
        g = np.zeros(m + 1, dtype=complex)
        g[0] = beta
        V[0] = r / beta
        k = 0
        for j in range(m):
            w = matvec(V[j])
            its += 1
            basis = V[: j + 1].T
            # classical Gram-Schmidt, applied twice
            h = np.conj(np.conj(w) @ basis)
            w = w - basis @ h
            h2 = np.conj(np.conj(w) @ basis)
            w = w - basis @ h2
            h = h + h2
            hn = np.linalg.norm(w)
            H[: j + 1, j] = h
            H[j + 1, j] = hn
            for i in range(j):
                t = np.conj(cs[i]) * H[i, j] + np.conj(sn[i]) * H[i + 1, j]
                H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = t
            denom = math.hypot(abs(H[j, j]), abs(H[j + 1, j]))
            if denom == 0.0:
                cs[j], sn[j] = 1.0, 0.0
            else:
                cs[j] = H[j, j] / denom
                sn[j] = H[j + 1, j] / denom
            H[j, j] = np.conj(cs[j]) * H[j, j] + np.conj(sn[j]) * H[j + 1, j]
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = np.conj(cs[j]) * g[j]
            k = j + 1
            if hn == 0.0 or abs(g[j + 1]) <= atol:
                break
            V[j + 1] = w / hn
        y = _upper_solve(H[:k, :k], g[:k])
        x += y @ V[:k]
        r = b - matvec(x)
        beta = np.linalg.norm(r)
        if beta <= atol:
            return x, its
    raise KrylovNoConvergence(its, beta, atol)


def _upper_solve(U, g):
    y = np.zeros_like(g)
    for i in range(g.size - 1, -1, -1):
        y[i] = (g[i] - U[i, i + 1:] @ y[i + 1:]) / U[i, i]
    return y


# The residual left by GMRES biases the norm in a consistent direction, so
# the drift grows linearly in the step count.  Solving to a fraction of the
# requested tolerance keeps hundreds of steps inside 10 * tol.
SOLVE_MARGIN = 0.01
_EPS_FLOOR = 64 * np.finfo(float).eps


def solve_target(tol):
    """Relative GMRES stopping threshold used for a requested ``krylov_tol``."""
    return min(tol, max(SOLVE_MARGIN * tol, _EPS_FLOOR))


def cn_step(field, config, generator, dt):
    """One Crank-Nicolson step ``(I - dt/2 M) U = (I + dt/2 M) U_in``.

    Solved for the correction ``U - U_in`` from a zero guess; the relative
    residual is measured against ``||(I + dt/2 M) U_in||`` and driven below
    :func:`solve_target` of ``config.tol``.  Returns
    ``(U, iterations)``.  On failure the input field is left untouched.
    """
    h = 0.5 * dt
    u_in = np.ascontiguousarray(field, dtype=complex).ravel()
    m_u = generator(u_in).ravel()
    if not np.any(m_u):
        return u_in.reshape(generator.shape).copy(), 0
    b_norm = np.linalg.norm(u_in + h * m_u)
    buf = np.empty(generator.shape, dtype=complex)

    def matvec(v):
        return v - h * generator(v, buf).ravel()

    delta, its = gmres(matvec, 2.0 * h * m_u, solve_target(config.tol) * b_norm,
                       config.restart, config.max_iter)
    U = (u_in + delta).reshape(generator.shape)
    if config.enforce_parity and parity_defect(u_in.reshape(generator.shape)) <= PARITY_EXACT:
        U = parity_project(U)
    return U, its


PARITY_EXACT = 1e-12


def parity_defect(field):
    """``max |R_k - (-1)^k conj(R_k)|`` relative to ``max |R|``."""
    peak = np.abs(field).max()
    if peak == 0:
        return 0.0
    sign = np.where(np.arange(field.shape[0]) % 2, -1.0, 1.0)[:, None]
    return float(np.abs(field - sign * np.conj(field)).max() / peak)


def parity_project(field):
    """Even modes real, odd modes imaginary."""
    out = field.copy()
    out[0::2] = out[0::2].real
    out[1::2] = 1j * out[1::2].imag
    return out


def time_grid(dt, t_final):
    """Step end times; a final shortened step lands exactly on ``t_final``."""
    n_full = int(math.floor(t_final / dt + 1e-9))
    times = [n * dt for n in range(1, n_full + 1)]
    if t_final - n_full * dt > 1e-12 * max(1.0, t_final):
        times.append(t_final)
    elif times:
        times[-1] = t_final
    return times


@dataclass
class RunOutputs:
    records: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    completed: bool = False
    steps: int = 0
    final: Optional[np.ndarray] = None

    def column(self, name):
        return np.array([r[name] for r in self.records])


@dataclass
class Simulation:
    """Everything assembled from a scenario, ready to step."""

    scenario: object
    grid: object
    model: object
    quadrature: object
    coupling: object
    generator: Generator
    initial: np.ndarray


def prepare(scenario):
    grid = scenario.grid
    model = scenario.potential_model()
    if scenario.quadrature_order:
        quad = gauss_hermite(scenario.quadrature_order)
    else:
        quad = default_quadrature(scenario.n_max)
    op = assemble(scenario.coupling, model, scenario.hbar, grid, scenario.n_max, quad)
    gen = Generator(grid, discrete_force(model, grid), op)
    R0 = project(scenario.initial, grid, scenario.n_max, quad)
    return Simulation(scenario, grid, model, quad, op, gen, R0)


def observe(sim, R, t, iterations=0):
    grid = sim.grid
    d2, d4 = residual_norms(R, sim.model, sim.scenario.hbar, grid, sim.quadrature)
    return {
        "t": t,
        "norm": l2_norm(R, grid),
        "trace": trace(R, grid),
        "kinetic_energy": kinetic_energy(R, grid),
        "d2": d2,
        "d4": d4,
        "iterations": iterations,
    }


def _snapshot_steps(times, requested):
    all_t = np.concatenate([[0.0], times])
    return {int(np.argmin(np.abs(all_t - ts))): float(ts) for ts in requested}


def run(scenario, on_step=None, on_record=None, on_snapshot=None, progress=None, sim=None):
    """Step ``scenario`` from 0 to ``t_final``.

    Observables are recorded every ``output.interval`` (rounded to whole steps)
    and at the final time.  ``on_step(n, t, R)`` sees every step.  On a solver
    failure the raised :class:`KrylovNoConvergence` carries the partial
    outputs in its ``outputs`` attribute.
    """
    sim = sim or prepare(scenario)
    cfg = scenario.stepper
    times = time_grid(scenario.dt, scenario.t_final)
    every = max(1, int(round(scenario.output.interval / scenario.dt)))
    snaps = _snapshot_steps(times, scenario.output.snapshot_times)
    out = RunOutputs()
    R = sim.initial.copy()
    norm0 = l2_norm(R, sim.grid)

    def record(n, t, its):
        rec = observe(sim, R, t, its)
        rec["step"] = n
        out.records.append(rec)
        if on_record:
            on_record(rec)
        if progress is not None:
            drift = (rec["norm"] - norm0) / norm0 if norm0 else 0.0
            print(f"step {n:6d}  t={t:9.4f}  norm_drift={drift:+.3e}  "
                  f"trace={rec['trace']:.10f}  krylov_its={its}", file=progress, flush=True)

    def snapshot(n, t):
        if n in snaps:
            out.snapshots[snaps[n]] = R.copy()
            if on_snapshot:
                on_snapshot(snaps[n], R)

    record(0, 0.0, 0)
    snapshot(0, 0.0)
    if on_step:
        on_step(0, 0.0, R)
    t_prev = 0.0
    its_since = 0
    for n, t in enumerate(times, start=1):
        try:
            R, its = cn_step(R, cfg, sim.generator, t - t_prev)
        except KrylovNoConvergence as exc:
            exc.outputs = out
            raise
        its_since += its
        t_prev = t
        out.steps = n
        if on_step:
            on_step(n, t, R)
        if n % every == 0 or n == len(times):
            record(n, t, its_since)
            its_since = 0
        snapshot(n, t)
    out.completed = True
    out.final = R
    return out

