"""Potential presets with analytic derivatives, and the discrete force field."""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

MORSE_DEPTH = 20.0
MORSE_WIDTH = 0.16


@dataclass(frozen=True)
class PotentialModel:
    """A potential ``V`` with first and third derivatives.

    ``odd_difference(x, y, hbar)`` returns ``[V(x + hbar y/2) - V(x - hbar y/2)] / hbar``;
    presets supply a cancellation-free closed form, user models fall back to
    direct subtraction.  ``max_exact_taylor_degree`` is the polynomial degree
    of ``V`` when finite (derivatives beyond it vanish), else ``None``.
    """

    kind: str
    value: Callable
    d1: Callable
    d3: Optional[Callable] = None
    odd_diff: Optional[Callable] = None
    max_exact_taylor_degree: Optional[int] = None
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.value(np.asarray(x, dtype=float))

    def odd_difference(self, x, y, hbar):
        if hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.odd_diff is not None:
            return self.odd_diff(x, y, hbar)
        s = 0.5 * hbar * y
        return (self.value(x + s) - self.value(x - s)) / hbar

    def third_derivative(self, x, h=1e-3):
        """``V'''``; user models without ``d3`` use a centered second difference of ``V'``."""
        x = np.asarray(x, dtype=float)
        if self.d3 is not None:
            return self.d3(x)
        return (self.d1(x + h) - 2.0 * self.d1(x) + self.d1(x - h)) / (h * h)


def harmonic():
    return PotentialModel(
        kind="harmonic",
        value=lambda x: 0.5 * x * x,
        d1=lambda x: 1.0 * x,
        d3=lambda x: np.zeros_like(x),
        odd_diff=lambda x, y, hbar: x * y,
        max_exact_taylor_degree=2,
    )


def quartic(beta=0.5):
    """``x^2/2 + beta x^4/4``."""

    def odd_diff(x, y, hbar):
        return x * y + beta * (x**3 * y + 0.25 * hbar * hbar * x * y**3)

    return PotentialModel(
        kind="quartic",
        value=lambda x: 0.5 * x * x + 0.25 * beta * x**4,
        d1=lambda x: x + beta * x**3,
        d3=lambda x: 6.0 * beta * x,
        odd_diff=odd_diff,
        max_exact_taylor_degree=4,
        params={"beta": beta},
    )


def gaussian_barrier():
    """``exp(-x^2/2)``."""

    def odd_diff(x, y, hbar):
        s = 0.5 * hbar * y
        return -2.0 * np.exp(-0.5 * (x * x + s * s)) * np.sinh(x * s) / hbar

    return PotentialModel(
        kind="gaussian_barrier",
        value=lambda x: np.exp(-0.5 * x * x),
        d1=lambda x: -x * np.exp(-0.5 * x * x),
        d3=lambda x: (3.0 * x - x**3) * np.exp(-0.5 * x * x),
        odd_diff=odd_diff,
    )


def morse():
    """``20 (1 - exp(-0.16 x))^2``."""
    D, a = MORSE_DEPTH, MORSE_WIDTH

    def odd_diff(x, y, hbar):
        s = 0.5 * hbar * y
        u = np.exp(-a * x)
        return D * (4.0 * u * np.sinh(a * s) - 2.0 * u * u * np.sinh(2.0 * a * s)) / hbar

    return PotentialModel(
        kind="morse",
        value=lambda x: D * (1.0 - np.exp(-a * x)) ** 2,
        d1=lambda x: 2.0 * D * a * (np.exp(-a * x) - np.exp(-2.0 * a * x)),
        d3=lambda x: 2.0 * D * a**3 * (np.exp(-a * x) - 4.0 * np.exp(-2.0 * a * x)),
        odd_diff=odd_diff,
    )


def user_defined(value, d1, d3=None, kind="user"):
    return PotentialModel(kind=kind, value=value, d1=d1, d3=d3)


PRESETS = {
    "harmonic": harmonic,
    "quartic": quartic,
    "gaussian_barrier": gaussian_barrier,
    "morse": morse,
}


def make_potential(name, **params):
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown potential preset {name!r}") from None
    return factory(**params)


def eval_potential(model, x, order=0):
    """Evaluate ``V``, ``V'`` or ``V'''`` (order 0, 1 or 3)."""
    x = np.asarray(x, dtype=float)
    if order == 0:
        return model.value(x)
    if order == 1:
        return model.d1(x)
    if order == 3:
        if model.d3 is None:
            raise ValueError(f"potential {model.kind!r} does not provide a third derivative")
        return model.d3(x)
    raise ValueError("order must be 0, 1 or 3")


def discrete_force(model, grid):
    """Centered force ``E_j = -(V(x_{j+1}) - V(x_{j-1})) / (2 dx)``.

    The two neighbours outside ``[a, b]`` are evaluated analytically.
    """
    x = grid.centers
    dx = grid.dx
    return -(model.value(x + dx) - model.value(x - dx)) / (2.0 * dx)
