import math

import numpy as np
import pytest

from weylherm.coupling import assemble
from weylherm.dynamics import Generator
from weylherm.grid import Grid1D, centered_difference
from weylherm.hermite import eval_phi
from weylherm.observables import (default_xi_grid, kinetic_energy, l2_norm, macro_densities,
                                  potential_energy, trace, wigner, wigner_moments)
from weylherm.potentials import discrete_force, make_potential
from weylherm.reference_oracle import harmonic_exact_field
from weylherm.states import InitialState, get_preset, project


def parity_field(rng, n, nx):
    R = rng.normal(size=(n, nx)).astype(complex)
    R[1::2] *= 1j
    return R


def unit_gaussian(grid, n_max=10, **kw):
    return project(InitialState(normalization="unit-trace", **kw), grid, n_max)


def test_trace_examples():
    g = Grid1D(-8, 8, 128)
    assert trace(unit_gaussian(g), g) == pytest.approx(1.0, abs=1e-10)
    assert trace(np.zeros((5, 128), complex), g) == 0.0
    R = np.zeros((5, 128), complex)
    R[1::2] = 1j
    assert trace(R, g) == 0.0


def test_norm_examples(rng):
    g = Grid1D(0, 1, 10)
    R = np.zeros((3, 10), complex)
    R[1, 4] = 1.0
    assert l2_norm(R, g) == pytest.approx(math.sqrt(0.1))
    assert l2_norm(parity_field(rng, 4, 10), g) > 0


def test_macro_mode_zero():
    g = Grid1D(-8, 8, 160)
    R = unit_gaussian(g)
    mf = macro_densities(R, g)
    assert np.all(mf.rho_u == 0)
    assert g.dx * mf.rho_e.sum() == pytest.approx(0.5, abs=1e-10)
    assert kinetic_energy(R, g) == pytest.approx(0.5, abs=1e-10)
    assert kinetic_energy(np.zeros_like(R), g) == 0.0


def test_tunneling_momentum_density():
    g = Grid1D(-12, 16, 280)
    R = project(get_preset("tunneling").initial, g, 128)
    mf = macro_densities(R, g)
    j = np.argmax(mf.rho)
    # -i d/dy of e^{4iy - y^2/2} at y = 0 is 4
    assert mf.rho_u[j] / mf.rho[j] == pytest.approx(4.0, rel=0.02)


def test_discrete_continuity(rng):
    # without coupling the y = 0 trace of the scheme is d rho/dt = -C(rho u)
    g = Grid1D(-5, 5, 40)
    m = make_potential("harmonic")
    gen = Generator(g, discrete_force(m, g), assemble("none", m, 1.0, g, 11))
    R = parity_field(rng, 12, 40)
    R[-1] = 0.0  # the top mode would feed the dropped mode N + 1
    rho_t = macro_densities(gen(R), g).rho
    flux = macro_densities(R, g).rho_u
    assert np.allclose(rho_t, -centered_difference(flux.astype(complex), g).real, atol=1e-12)


def test_momentum_is_first_wigner_moment(rng):
    g = Grid1D(-8, -2, 12)
    R = project(InitialState(x0=-5, sigma_x=0.6, p0=-1.5), g, 48)
    xi = np.linspace(-14, 14, 1401)
    wf = wigner(R, g, xi)
    first = (wf.W * xi).sum(axis=1) * (xi[1] - xi[0])
    assert np.allclose(macro_densities(R, g).rho_u, first, atol=1e-10)


def test_wigner_mode_zero():
    g = Grid1D(-3, 3, 12)
    R = unit_gaussian(g)
    wf = wigner(R, g)
    expect = np.outer(R[0].real, eval_phi(0, default_xi_grid())[0]) / math.sqrt(2 * math.pi)
    assert np.allclose(wf.W, expect, atol=1e-15)
    assert wf.xi.size == 256 and wf.xi[0] == -8 and wf.xi[-1] == 8


def test_wigner_of_harmonic_initial_state():
    s = get_preset("harmonic")
    g = s.grid
    R = project(s.initial, g, s.n_max)
    xi = s.output.xi_grid()
    wf = wigner(R, g, xi)
    exact = np.exp(-((g.centers[:, None] - 5) ** 2 + xi[None, :] ** 2) / 2) / (2 * math.pi)
    assert np.abs(wf.W - exact).max() <= 1e-10
    assert wf.imag_residual <= 1e-10


def test_wigner_moments_match_trace_and_energy(rng):
    g = Grid1D(-6, 6, 60)
    R = project(InitialState(sigma_x=0.8, p0=1.0), g, 40)
    wf = wigner(R, g)
    m0, m2 = wigner_moments(wf, g)
    assert m0 == pytest.approx(trace(R, g), abs=1e-6)
    assert m2 == pytest.approx(2 * kinetic_energy(R, g), abs=1e-5)
    assert wf.imag_residual <= 1e-10


def test_harmonic_energy_constant_along_exact_solution():
    s = get_preset("harmonic")
    g = s.grid
    m = make_potential("harmonic")
    energies = []
    for t in np.linspace(0, 2 * math.pi, 9):
        R = harmonic_exact_field(t, g, 60)
        energies.append(kinetic_energy(R, g) + potential_energy(R, g, m))
    # (x0^2 + 2) / 2 less the small mass outside [-8, 8]
    assert np.ptp(energies) <= 5e-3 * np.mean(energies)
    # at t = pi/2 the packet is centred and nothing is cut off
    assert energies[2] == pytest.approx(13.5, abs=1e-8)
