"""Unequal masses at a common bare frequency.

At resonance the rotation angle depends only on the mass ratio, the
in-phase mode keeps the bare frequency ``omega`` and only the other mode
``Omega`` depends on the coupling.  A light oscillator #1 coupled strongly
to a heavy #2 can be squeezed arbitrarily far below its ground-state width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    RESONANCE_RTOL,
    ObservablePoint,
    OscillatorPair,
    ParameterError,
    as_times,
    squeeze_scalar,
)


@dataclass(frozen=True)
class ResonanceState:
    params: OscillatorPair
    x0: float = 0.0

    def __post_init__(self):
        if not self.params.is_resonant(RESONANCE_RTOL):
            raise ParameterError(
                "params",
                f"not resonant: omega1={self.params.omega1!r}, omega2={self.params.omega2!r}",
            )
        if not math.isfinite(self.x0):
            raise ParameterError("x0", "must be finite")
        object.__setattr__(self, "x0", float(self.x0))

    @property
    def omega(self) -> float:
        return self.params.omega1

    @property
    def Omega(self) -> float:
        p = self.params
        return math.sqrt(self.omega**2 + p.kappa * (p.m1 + p.m2) / (p.m1 * p.m2))

    @property
    def gamma(self) -> float:
        p = self.params
        return (1.0 + p.kappa * (p.m1 + p.m2) / (p.m1 * p.m2 * self.omega**2)) ** -0.5


def resonance_params(m1: float, m2: float, omega: float, gamma: float,
                     hbar: float = 1.0) -> OscillatorPair:
    """Resonant pair whose coupling produces the frequency ratio ``gamma`` in (0, 1]."""
    if not 0 < gamma <= 1:
        raise ParameterError("gamma", f"must lie in (0, 1], got {gamma!r}")
    kappa = (gamma**-2 - 1.0) * m1 * m2 * omega**2 / (m1 + m2)
    return OscillatorPair.from_frequencies(m1, m2, omega, omega, kappa, hbar)


def resonance_observables(state: ResonanceState, t) -> ObservablePoint:
    t = as_times(t)
    p = state.params
    m1, m2, hbar, x0 = p.m1, p.m2, p.hbar, state.x0
    w, W, g = state.omega, state.Omega, state.gamma
    c, s = np.cos(W * t), np.sin(W * t)
    frac = m2 / (m1 + m2)
    y_mean = x0 * frac * (np.cos(w * t) - c)
    y_sigma = np.sqrt(hbar / (2 * m1 * w) * m1 / (m1 + m2) * (1 + m2 / m1 * (c * c + g * g * s * s)))
    p_mean = -m1 * x0 * frac * (w * np.sin(w * t) - W * s)
    p_sigma = np.sqrt(hbar * m1 * w / 2 * m1 / (m1 + m2) * (1 + m2 / m1 * (c * c + s * s / (g * g))))
    vals = (t, y_mean, y_sigma, p_mean, p_sigma, y_sigma * p_sigma)
    return ObservablePoint(*(squeeze_scalar(v) for v in vals))


def resonance_product(state: ResonanceState, t):
    """Uncertainty product written directly as the Heisenberg minimum times a growth factor."""
    t = as_times(t)
    p = state.params
    m1, m2, g = p.m1, p.m2, state.gamma
    c2, s2 = np.cos(state.Omega * t) ** 2, np.sin(state.Omega * t) ** 2
    growth = m1 * m2 / (m1 + m2) ** 2 * (1 / g - g) ** 2 * s2 * (1 + m2 / m1 * c2)
    return squeeze_scalar(p.hbar / 2 * np.sqrt(1 + growth))


@dataclass(frozen=True)
class ResonanceBounds:
    y1_sigma: tuple[float, float]
    p1_sigma: tuple[float, float]
    product: tuple[float, float]

    def as_dict(self) -> dict[str, tuple[float, float]]:
        return {"y1_sigma": self.y1_sigma, "p1_sigma": self.p1_sigma, "product": self.product}


def resonance_bounds(state: ResonanceState) -> ResonanceBounds:
    """Ranges swept by ``y1_sigma``, ``p1_sigma`` and their product over time."""
    p = state.params
    m1, m2, hbar, w, g = p.m1, p.m2, p.hbar, state.omega, state.gamma
    sy0 = math.sqrt(hbar / (2 * m1 * w))
    sp0 = math.sqrt(hbar * m1 * w / 2)
    sy_min = math.sqrt(hbar / (2 * m1 * w) * (m1 + g * g * m2) / (m1 + m2))
    sp_max = math.sqrt(hbar * m1 * w / 2 * (m1 + m2 / (g * g)) / (m1 + m2))
    # The two forms agree at m1 == m2; the m1 <= m2 form covers that boundary.
    if m1 > m2:
        prod_max = hbar / 2 * math.sqrt(1 + m1 * m2 / (m1 + m2) ** 2 * (1 / g - g) ** 2)
    else:
        prod_max = hbar / 4 * (1 / g + g)
    return ResonanceBounds((sy_min, sy0), (sp0, sp_max), (hbar / 2, prod_max))
