"""Physical parameters, normal-mode decomposition and shared value types.

Coordinates are rescaled by quarter powers of the mass ratio so both
oscillators carry the geometric-mean mass, then rotated by an angle
``alpha`` into independent normal modes ``x_+`` and ``x_-``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

#: Relative tolerance on ``|omega1 - omega2| / omega1`` for treating a pair as resonant.
RESONANCE_RTOL = 1e-12


class ParameterError(ValueError):
    """Invalid physical parameter; ``field`` names the offender."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class OscillatorPair:
    """Two oscillators of masses ``m1``, ``m2`` on springs ``k1``, ``k2``,
    joined by a coupling spring ``kappa``."""

    m1: float
    m2: float
    k1: float
    k2: float
    kappa: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or isinstance(value, bool):
                raise ParameterError(f.name, f"expected a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(f.name, f"must be finite, got {value!r}")
            object.__setattr__(self, f.name, float(value))
        for name in ("m1", "m2", "k1", "k2", "hbar"):
            if getattr(self, name) <= 0:
                raise ParameterError(name, f"must be > 0, got {getattr(self, name)!r}")
        if self.kappa < 0:
            raise ParameterError("kappa", f"must be >= 0, got {self.kappa!r}")

    @property
    def omega1(self) -> float:
        return math.sqrt(self.k1 / self.m1)

    @property
    def omega2(self) -> float:
        return math.sqrt(self.k2 / self.m2)

    @property
    def mu(self) -> float:
        return math.sqrt(self.m1 * self.m2)

    def is_symmetric(self) -> bool:
        return self.m1 == self.m2 and self.k1 == self.k2

    def is_resonant(self, rtol: float = RESONANCE_RTOL) -> bool:
        return abs(self.omega1 - self.omega2) < rtol * self.omega1

    @classmethod
    def symmetric(cls, m: float, k: float, kappa: float = 0.0, hbar: float = 1.0) -> OscillatorPair:
        return cls(m, m, k, k, kappa, hbar)

    @classmethod
    def from_frequencies(cls, m1, m2, omega1, omega2, kappa=0.0, hbar=1.0) -> OscillatorPair:
        return cls(m1, m2, m1 * omega1**2, m2 * omega2**2, kappa, hbar)


@dataclass(frozen=True)
class NormalModes:
    """Result of :func:`derive_normal_modes`.

    ``N`` maps oscillator coordinates ``(y1, y2)`` to normal-mode
    coordinates ``(y_+, y_-)``. ``gamma`` is ``omega_plus / omega_minus``;
    it equals the usual coupling ratio in the symmetric and resonant
    cases and is informational otherwise. ``degenerate`` is set when
    ``kappa = 0`` and ``omega1 = omega2``, where every angle diagonalizes
    the Hamiltonian.
    """

    omega1: float
    omega2: float
    mu: float
    alpha: float
    omega_plus: float
    omega_minus: float
    gamma: float
    N: np.ndarray = field(repr=False)
    N_inv: np.ndarray = field(repr=False)
    degenerate: bool = False

    @property
    def cos_alpha(self) -> float:
        return math.cos(self.alpha)

    @property
    def sin_alpha(self) -> float:
        return math.sin(self.alpha)


def _rotation_angle(params: OscillatorPair) -> tuple[float, bool]:
    w1, w2, mu, kap = params.omega1, params.omega2, params.mu, params.kappa
    resonant = params.is_resonant()
    if kap == 0.0 and resonant:
        # Any angle works; take the kappa -> 0+ limit so alpha is continuous.
        return 0.5 * math.atan2(2.0 * mu, params.m1 - params.m2), True
    # At kappa = 0 this gives 0 (omega2 > omega1) or pi/2 (omega2 < omega1),
    # both the kappa -> 0+ limit; the latter just swaps the mode labels.
    num = 2.0 * kap / mu
    den = w2**2 - w1**2 + (kap / mu) * (params.m1 - params.m2) / mu
    if resonant:
        den = (kap / mu) * (params.m1 - params.m2) / mu
    # atan2 with num > 0 puts 2*alpha in (0, pi), i.e. cos(alpha) > 0, sin(alpha) > 0.
    # num == 0.0 (not -0.0) keeps the kappa = 0 angle on the same branch.
    return 0.5 * math.atan2(num, den), False


def _mode_matrix(params: OscillatorPair, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(alpha), math.sin(alpha)
    a = (params.m1 / params.m2) ** 0.25
    b = (params.m2 / params.m1) ** 0.25
    N = np.array([[c * a, s * b], [-s * a, c * b]])
    N_inv = np.array([[c * b, -s * b], [s * a, c * a]])
    return N, N_inv


def derive_normal_modes(params: OscillatorPair) -> NormalModes:
    """Rotation angle and normal-mode frequencies of a coupled pair.

    >>> m = derive_normal_modes(OscillatorPair.symmetric(1.0, 1.0, kappa=1.5))
    >>> round(m.omega_plus, 12), round(m.omega_minus, 12), round(m.gamma, 12)
    (1.0, 2.0, 0.5)
    """
    if not isinstance(params, OscillatorPair):
        raise TypeError(f"expected OscillatorPair, got {type(params).__name__}")
    alpha, degenerate = _rotation_angle(params)
    w1, w2, mu, kap = params.omega1, params.omega2, params.mu, params.kappa
    c, s = math.cos(alpha), math.sin(alpha)
    a = (params.m1 / params.m2) ** 0.25
    b = (params.m2 / params.m1) ** 0.25
    wp2 = w1**2 * c**2 + w2**2 * s**2 + (kap / mu) * (a * s - b * c) ** 2
    wm2 = w1**2 * s**2 + w2**2 * c**2 + (kap / mu) * (a * c + b * s) ** 2
    wp, wm = math.sqrt(wp2), math.sqrt(wm2)
    N, N_inv = _mode_matrix(params, alpha)
    return NormalModes(
        omega1=w1, omega2=w2, mu=mu, alpha=alpha,
        omega_plus=wp, omega_minus=wm, gamma=wp / wm,
        N=N, N_inv=N_inv, degenerate=degenerate,
    )


def mode_matrix(params: OscillatorPair, modes: NormalModes) -> tuple[np.ndarray, np.ndarray]:
    """``(N, N_inv)`` for the rotation angle stored in ``modes``; ``det N = 1``."""
    return _mode_matrix(params, modes.alpha)


@dataclass(frozen=True)
class Gaussian1D:
    """Normalized one-dimensional Gaussian density."""

    mean: float
    sigma: float

    def __post_init__(self):
        if not np.all(np.asarray(self.sigma) > 0):
            raise ValueError(f"sigma must be > 0, got {self.sigma!r}")

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mean) / self.sigma
        return np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * self.sigma)


OBSERVABLE_COLUMNS = ("t", "y1_mean", "y1_sigma", "p1_mean", "p1_sigma", "product")


@dataclass(frozen=True)
class ObservablePoint:
    """Position/momentum mean and spread of oscillator #1.

    Fields are floats for a scalar time and arrays when evaluated on a grid.
    """

    t: float
    y1_mean: float
    y1_sigma: float
    p1_mean: float
    p1_sigma: float
    product: float

    def as_array(self) -> np.ndarray:
        """Stack into shape ``(6,)`` or ``(6, n)`` in ``OBSERVABLE_COLUMNS`` order."""
        return np.array([np.asarray(getattr(self, c), dtype=float) for c in OBSERVABLE_COLUMNS])

    def observables(self) -> np.ndarray:
        """The five observables without ``t``."""
        return self.as_array()[1:]


def as_times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)):
        raise ValueError("times must be finite")
    if np.any(t < 0):
        raise ValueError(f"times must be >= 0, got min {t.min()!r}")
    return t


def squeeze_scalar(x):
    x = np.asarray(x)
    if x.ndim:
        return x
    return complex(x) if np.iscomplexobj(x) else float(x)
