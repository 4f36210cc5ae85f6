import math
import warnings

import numpy as np
import pytest

from weylherm.grid import Grid1D
from weylherm.hermite import default_quadrature, phi_at_nodes
from weylherm.observables import trace
from weylherm.states import (PRESET_NAMES, InitialState, TruncationWarning, get_preset,
                             project, project_function, scenario_presets, with_initial)


def test_gaussian_populates_mode_zero_only():
    g = Grid1D(-4, 6, 50)
    st = InitialState(x0=1.0, sigma_x=0.7)
    R = project(st, g, 12)
    expected = math.pi**0.25 * st.amp * np.exp(-(g.centers - 1.0) ** 2 / (2 * 0.49))
    assert np.allclose(R[0], expected, atol=1e-14)
    assert np.abs(R[1:]).max() <= 1e-12


def test_momentum_kick_generating_function():
    g = Grid1D(-8, -2, 6)
    st = InitialState(x0=-5.0, sigma_x=0.6, p0=-4.0)
    N = 128
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        R = project(st, g, N)
    # e^{-y^2/2 + i q y} = pi^{1/4} e^{-q^2/4} sum_k (i q / sqrt 2)^k / sqrt(k!) Phi_k
    q = 4.0
    k = np.arange(N + 1)
    log_mag = k * math.log(q / math.sqrt(2)) - 0.5 * np.array([math.lgamma(i + 1) for i in k])
    coeff = math.pi**0.25 * math.exp(-q * q / 4) * np.exp(log_mag) * (1j) ** (k % 4)
    xfac = st.amp * np.exp(-(g.centers + 5.0) ** 2 / (2 * 0.36))
    assert np.allclose(R, coeff[:, None] * xfac[None, :], atol=1e-13)
    assert np.abs(R[100]).max() < 1e-12


@pytest.mark.parametrize("p0", [0.0, 1.0, -4.0, 2.5])
def test_projection_parity(p0):
    g = Grid1D(-6, 6, 30)
    R = project(InitialState(sigma_x=0.8, p0=p0), g, 64)
    sign = np.where(np.arange(65) % 2, -1.0, 1.0)[:, None]
    assert np.abs(R - sign * np.conj(R)).max() <= 1e-12


def test_round_trip(rng):
    g = Grid1D(-1, 1, 7)
    n = 20
    q = default_quadrature(n)
    P = phi_at_nodes(n, q.order)
    R = rng.normal(size=(n + 1, 7)) + 1j * rng.normal(size=(n + 1, 7))
    table = R.T @ P  # (nx, Q)

    def func(x, y):
        j = np.rint((x[:, 0] - g.centers[0]) / g.dx).astype(int)
        return table[j][:, np.searchsorted(q.nodes, y[0])]

    assert np.abs(project_function(func, g, n, q) - R).max() <= 1e-12


def test_default_amplitude_unit_trace():
    g = Grid1D(-10, 10, 200)
    assert trace(project(InitialState(x0=0.5), g, 8), g) == pytest.approx(1.0, abs=1e-10)


def test_unit_trace_normalization():
    g = Grid1D(-8, 8, 64)
    R = project(InitialState(x0=5.0, amplitude=3.0, normalization="unit-trace"), g, 8)
    assert trace(R, g) == pytest.approx(1.0, abs=1e-12)
    odd = InitialState(kind="custom", normalization="unit-trace",
                       func=lambda x, y: x * np.exp(-x * x - y * y / 2) + 0j)
    with pytest.raises(ValueError, match="unit trace"):
        project(odd, g, 8)


def test_truncation_warning():
    g = Grid1D(-8, -2, 12)
    with pytest.warns(TruncationWarning):
        project(InitialState(x0=-5, sigma_x=0.6, p0=-4.0), g, 20)


def test_initial_state_validation():
    with pytest.raises(ValueError):
        InitialState(kind="wkb")
    with pytest.raises(ValueError):
        InitialState(sigma_x=0.0)
    with pytest.raises(ValueError):
        InitialState(kind="custom")
    with pytest.raises(ValueError):
        InitialState(normalization="l2")


def test_preset_parameters():
    h = get_preset("harmonic")
    assert (h.a, h.b, h.potential, h.n_max) == (-8.0, 8.0, "harmonic", 20)
    assert h.t_final == pytest.approx(2 * math.pi)
    assert h.initial.x0 == 5.0 and h.initial.sigma_x == 1.0 and h.initial.p0 == 0.0
    q = get_preset("quartic")
    assert (q.a, q.b, q.nx, q.n_max, q.dt, q.initial.sigma_x) == (-4.0, 4.0, 400, 400, 0.01, 0.6)
    t = get_preset("tunneling")
    assert (t.nx, t.n_max, t.dt, t.a, t.b, t.hbar) == (1000, 400, 0.01, -12.0, 16.0, 0.1)
    assert (t.initial.x0, t.initial.sigma_x, t.initial.p0) == (-5.0, 0.6, -4.0)
    m = get_preset("morse")
    assert (m.hbar, m.nx, m.n_max, m.dt, m.a, m.b, m.initial.x0) == (0.5, 1000, 400, 0.01, -4.0, 16.0, 4.0)


def test_desk_variants():
    for name, s in scenario_presets(desk=True).items():
        assert s.name == f"{name}-desk"
        assert s.n_max <= 128
        full = get_preset(name)
        assert (s.a, s.b, s.potential, s.hbar) == (full.a, full.b, full.potential, full.hbar)
    assert set(scenario_presets()) == set(PRESET_NAMES)
    with pytest.raises(KeyError):
        get_preset("square_well")


def test_with_initial():
    s = with_initial(get_preset("harmonic"), p0=1.0)
    assert s.initial.p0 == 1.0 and s.initial.x0 == 5.0
