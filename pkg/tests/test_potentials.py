import numpy as np
import pytest

from weylherm.grid import Grid1D
from weylherm.potentials import (PRESETS, discrete_force, eval_potential, make_potential,
                                 user_defined)


def test_examples():
    assert eval_potential(make_potential("harmonic"), 2.0) == 2.0
    assert eval_potential(make_potential("quartic", beta=0.5), 1.0, 3) == pytest.approx(3.0)
    assert eval_potential(make_potential("morse"), 0.0) == 0.0


def _fd(f, x, h=1e-4):
    return (f(x + h) - f(x - h)) / (2 * h)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_derivatives_against_finite_differences(name):
    m = make_potential(name)
    x = np.linspace(-3, 6, 37)
    assert np.allclose(m.d1(x), _fd(m.value, x), atol=1e-6)
    assert np.allclose(m.d3(x), (m.d1(x + 1e-3) - 2 * m.d1(x) + m.d1(x - 1e-3)) / 1e-6, atol=1e-4)


@pytest.mark.parametrize("name", sorted(PRESETS))
@pytest.mark.parametrize("hbar", [1.0, 0.5, 0.1])
def test_odd_difference_matches_definition(name, hbar):
    m = make_potential(name)
    x = np.linspace(-4, 8, 13)[:, None]
    y = np.linspace(-9, 9, 19)[None, :]
    direct = (m.value(x + hbar * y / 2) - m.value(x - hbar * y / 2)) / hbar
    assert np.allclose(m.odd_difference(x, y, hbar), direct, rtol=1e-12, atol=1e-12)


def test_user_defined_needs_third_derivative():
    m = user_defined(np.cos, lambda x: -np.sin(x))
    assert eval_potential(m, 0.0) == 1.0
    with pytest.raises(ValueError):
        eval_potential(m, 0.0, 3)
    # the coupling still gets V''' by differencing V'
    assert m.third_derivative(np.array([0.3]))[0] == pytest.approx(np.sin(0.3), abs=1e-6)


def test_harmonic_force_exact():
    g = Grid1D(-8, 8, 37)
    assert np.allclose(discrete_force(make_potential("harmonic"), g), -g.centers, atol=1e-14)


def test_constant_potential_zero_force():
    m = user_defined(lambda x: np.full_like(x, 3.0), lambda x: np.zeros_like(x))
    assert np.all(discrete_force(m, Grid1D(0, 1, 10)) == 0.0)


def test_barrier_force_zero_at_origin():
    g = Grid1D(-3, 3, 31)
    E = discrete_force(make_potential("gaussian_barrier"), g)
    assert g.centers[15] == 0.0
    assert E[15] == 0.0


@pytest.mark.parametrize("name", ["harmonic", "gaussian_barrier"])
def test_even_presets_give_odd_force(name):
    g = Grid1D(-6, 6, 48)
    E = discrete_force(make_potential(name), g)
    assert np.abs(E + E[::-1]).max() <= 1e-13


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_force_second_order(name):
    m = make_potential(name)
    errs = []
    for nx in (40, 80, 160):
        g = Grid1D(-2, 6, nx)
        errs.append(np.abs(discrete_force(m, g) + m.d1(g.centers)).max())
    if errs[0] < 1e-12:  # exact for quadratics
        return
    r1, r2 = errs[0] / errs[1], errs[1] / errs[2]
    assert 3.6 < r1 < 4.4 and 3.6 < r2 < 4.4


def test_quartic_exact_taylor_degree():
    assert make_potential("quartic").max_exact_taylor_degree == 4
    assert make_potential("harmonic").max_exact_taylor_degree == 2
    assert make_potential("morse").max_exact_taylor_degree is None


def test_unknown_preset():
    with pytest.raises(ValueError):
        make_potential("square_well")
