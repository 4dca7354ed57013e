"""Closed forms for two identical coupled oscillators.

The in-phase mode ``y_+ = (y1 + y2)/sqrt(2)`` oscillates at the bare
frequency ``omega`` and the out-of-phase mode ``y_- = (y2 - y1)/sqrt(2)``
at ``Omega = omega / gamma``.  With oscillator #1 in its ground state and
oscillator #2 in a coherent state of amplitude ``X0``, the ``+`` mode stays
coherent while the ``-`` mode is a displaced squeezed state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Gaussian1D,
    ObservablePoint,
    OscillatorPair,
    ParameterError,
    as_times,
    squeeze_scalar,
)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SymmetricState:
    """Ground/coherent state of an identical pair; ``X0`` is the initial
    displacement of oscillator #2 (its momentum starts at zero)."""

    params: OscillatorPair
    X0: float = 0.0

    def __post_init__(self):
        if not self.params.is_symmetric():
            raise ParameterError("params", "symmetric state needs m1 == m2 and k1 == k2")
        if not math.isfinite(self.X0):
            raise ParameterError("X0", "must be finite")
        object.__setattr__(self, "X0", float(self.X0))

    @property
    def m(self) -> float:
        return self.params.m1

    @property
    def hbar(self) -> float:
        return self.params.hbar

    @property
    def omega(self) -> float:
        return math.sqrt(self.params.k1 / self.params.m1)

    @property
    def Omega(self) -> float:
        return math.sqrt((self.params.k1 + 2.0 * self.params.kappa) / self.params.m1)

    @property
    def gamma(self) -> float:
        return self.omega / self.Omega


def ground_state_reduced(state: SymmetricState) -> tuple[Gaussian1D, Gaussian1D]:
    """Position and momentum marginals of one oscillator in the coupled ground state.

    Coupling narrows the position distribution and widens the momentum one.
    """
    if not isinstance(state, SymmetricState):
        raise ParameterError("state", "ground_state_reduced needs a SymmetricState")
    m, w, g, hbar = state.m, state.omega, state.gamma, state.hbar
    sx = math.sqrt(hbar / (2 * m * w) * (1 + g) / 2)
    sp = math.sqrt(hbar * m * w / 2 * (1 + g) / (2 * g))
    return Gaussian1D(0.0, sx), Gaussian1D(0.0, sp)


def thermal_reduced(params: OscillatorPair, temperature: float, *, k_B: float = 1.0,
                    oscillator: int = 1) -> tuple[Gaussian1D, Gaussian1D]:
    """Position and momentum distributions of a single uncoupled oscillator at
    temperature ``temperature``; ``temperature = 0`` gives the ground state."""
    if temperature < 0 or not math.isfinite(temperature):
        raise ParameterError("temperature", f"must be finite and >= 0, got {temperature!r}")
    if k_B <= 0:
        raise ParameterError("k_B", f"must be > 0, got {k_B!r}")
    if oscillator not in (1, 2):
        raise ParameterError("oscillator", "must be 1 or 2")
    m = params.m1 if oscillator == 1 else params.m2
    w = params.omega1 if oscillator == 1 else params.omega2
    hbar = params.hbar
    coth = 1.0 if temperature == 0 else 1.0 / math.tanh(hbar * w / (k_B * temperature) / 2)
    sx = math.sqrt(hbar / (2 * m * w) * coth)
    sp = math.sqrt(hbar * m * w / 2 * coth)
    return Gaussian1D(0.0, sx), Gaussian1D(0.0, sp)


def _breathing(state: SymmetricState, t):
    """``cos^2(Omega t) + gamma^2 sin^2(Omega t)``, always >= min(1, gamma^2)."""
    c, s = np.cos(state.Omega * t), np.sin(state.Omega * t)
    return c * c + state.gamma**2 * s * s


def coherent_mode_amplitude(state: SymmetricState, y_plus, t):
    """Coherent-state amplitude of the in-phase mode."""
    t = as_times(t)
    m, w, hbar, X0 = state.m, state.omega, state.hbar, state.X0
    c, s = np.cos(w * t), np.sin(w * t)
    y = np.asarray(y_plus, dtype=float)
    phase = (-w * t / 2
             + m * w / (4 * hbar) * X0**2 * s * c
             - m * w / hbar * (X0 / SQRT2) * s * y)
    env = -m * w / (2 * hbar) * (y - X0 / SQRT2 * c) ** 2
    return (m * w / (math.pi * hbar)) ** 0.25 * np.exp(env + 1j * phase)


def squeezed_mode_amplitude(state: SymmetricState, y_minus, t):
    """Displaced squeezed-state amplitude of the out-of-phase mode."""
    t = as_times(t)
    m, w, W, g, hbar, X0 = state.m, state.omega, state.Omega, state.gamma, state.hbar, state.X0
    c, s = np.cos(W * t), np.sin(W * t)
    d = c * c + g * g * s * s
    y = np.asarray(y_minus, dtype=float)
    pref = np.sqrt((c - 1j * g * s) / d)
    phase = (m * w * g * X0**2 * c * s / (4 * hbar * d)
             - m * w * g * (X0 / SQRT2) * s * y / (hbar * d)
             - m * W * (1 - g * g) * c * s * y * y / (2 * hbar * d))
    env = -m * w / (2 * hbar * d) * (y - X0 / SQRT2 * c) ** 2
    return (m * w / (math.pi * hbar)) ** 0.25 * pref * np.exp(env + 1j * phase)


def symmetric_wavefunction(state: SymmetricState, y_plus, y_minus, t):
    """Two-oscillator amplitude in normal-mode coordinates (broadcasts over arrays)."""
    return coherent_mode_amplitude(state, y_plus, t) * squeezed_mode_amplitude(state, y_minus, t)


def symmetric_reduced_distribution(state: SymmetricState, t) -> Gaussian1D:
    """Marginal of ``y1`` at time ``t``."""
    t = as_times(t)
    w, W = state.omega, state.Omega
    mean = state.X0 / 2 * (np.cos(w * t) - np.cos(W * t))
    sigma = np.sqrt(state.hbar / (4 * state.m * w) * (1 + _breathing(state, t)))
    return Gaussian1D(squeeze_scalar(mean), squeeze_scalar(sigma))


def symmetric_observables(state: SymmetricState, t) -> ObservablePoint:
    t = as_times(t)
    m, w, W, g, hbar, X0 = state.m, state.omega, state.Omega, state.gamma, state.hbar, state.X0
    c, s = np.cos(W * t), np.sin(W * t)
    y_mean = X0 / 2 * (np.cos(w * t) - c)
    y_sigma = np.sqrt(hbar / (4 * m * w) * (1 + c * c + g * g * s * s))
    p_mean = -m * X0 / 2 * (w * np.sin(w * t) - W * s)
    p_sigma = np.sqrt(m * w * hbar / 4 * (1 + c * c + s * s / (g * g)))
    product = hbar / 4 * np.sqrt((1 / g + g) ** 2 - (1 / g - g) ** 2 * c**4)
    return ObservablePoint(*(squeeze_scalar(v) for v in (t, y_mean, y_sigma, p_mean, p_sigma, product)))


def uncertainty_product_forms(state: SymmetricState, t) -> np.ndarray:
    """The uncertainty product written three algebraically equivalent ways, stacked on axis 0."""
    t = as_times(t)
    g, hbar = state.gamma, state.hbar
    c, s = np.cos(state.Omega * t), np.sin(state.Omega * t)
    direct = hbar / 4 * np.sqrt((1 + c * c + g * g * s * s) * (1 + c * c + s * s / (g * g)))
    excess = hbar / 2 * np.sqrt(1 + (1 / g - g) ** 2 * (1 - c**4) / 4)
    quartic = hbar / 4 * np.sqrt((1 / g + g) ** 2 - (1 / g - g) ** 2 * c**4)
    return np.array([direct, excess, quartic])


def symmetric_bounds(state: SymmetricState) -> dict[str, tuple[float, float]]:
    """Oscillation ranges of ``y1_sigma``, ``p1_sigma`` and their product."""
    m, w, g, hbar = state.m, state.omega, state.gamma, state.hbar
    return {
        "y1_sigma": (math.sqrt(hbar * (1 + g * g) / (4 * m * w)), math.sqrt(hbar / (2 * m * w))),
        "p1_sigma": (math.sqrt(hbar * m * w / 2), math.sqrt(hbar * m * w * (1 + g**-2) / 4)),
        "product": (hbar / 2, hbar / 4 * (1 / g + g)),
    }
