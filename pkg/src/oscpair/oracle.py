"""Brute-force reference: Gaussian moments under the Hamiltonian flow.

A quadratic Hamiltonian keeps a Gaussian state Gaussian, and the first and
second moments of ``(x1, x2, p1, p2)`` obey closed linear ODEs

    d(mean)/dt = A mean,    d(cov)/dt = A cov + cov A^T,

with ``A`` the classical flow matrix.  These are integrated with the
classical fixed-step Runge-Kutta scheme, so the only error is the O(dt^4)
integration error.  Nothing here uses normal modes or propagators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .core import ObservablePoint, OscillatorPair, derive_normal_modes

#: Largest allowed ``dt * max(omega_plus, omega_minus)``.
MAX_PHASE_STEP = 0.1


@dataclass(frozen=True)
class GaussianMoments:
    """Means and covariance of ``(x1, x2, p1, p2)`` at time ``t``."""

    mean: np.ndarray
    cov: np.ndarray
    t: float = 0.0

    def observables(self) -> ObservablePoint:
        sy = math.sqrt(self.cov[0, 0])
        sp = math.sqrt(self.cov[2, 2])
        return ObservablePoint(self.t, float(self.mean[0]), sy, float(self.mean[2]), sp, sy * sp)


def initial_moments(params: OscillatorPair, x0: float) -> GaussianMoments:
    """Oscillator #1 in its ground state, #2 in a coherent state at ``x0`` with zero momentum."""
    hbar, m1, m2 = params.hbar, params.m1, params.m2
    w1, w2 = params.omega1, params.omega2
    cov = np.diag([hbar / (2 * m1 * w1), hbar / (2 * m2 * w2), hbar * m1 * w1 / 2, hbar * m2 * w2 / 2])
    return GaussianMoments(np.array([0.0, x0, 0.0, 0.0]), cov, 0.0)


def flow_matrix(params: OscillatorPair) -> np.ndarray:
    m1, m2, k1, k2, kap = params.m1, params.m2, params.k1, params.k2, params.kappa
    return np.array([
        [0.0, 0.0, 1 / m1, 0.0],
        [0.0, 0.0, 0.0, 1 / m2],
        [-(k1 + kap), kap, 0.0, 0.0],
        [kap, -(k2 + kap), 0.0, 0.0],
    ])


def rk4_step(A: np.ndarray, mean: np.ndarray, cov: np.ndarray, h: float):
    """One classical Runge-Kutta step for the coupled mean/covariance ODEs."""

    def rhs(m, c):
        return A @ m, A @ c + c @ A.T

    k1m, k1c = rhs(mean, cov)
    k2m, k2c = rhs(mean + h / 2 * k1m, cov + h / 2 * k1c)
    k3m, k3c = rhs(mean + h / 2 * k2m, cov + h / 2 * k2c)
    k4m, k4c = rhs(mean + h * k3m, cov + h * k3c)
    return (mean + h / 6 * (k1m + 2 * k2m + 2 * k3m + k4m),
            cov + h / 6 * (k1c + 2 * k2c + 2 * k3c + k4c))


def _step_operator(A: np.ndarray, h: float) -> np.ndarray:
    """The (linear) RK4 step as a 20x20 matrix on ``[mean, vec(cov)]``."""
    P = np.empty((20, 20))
    for j in range(20):
        e = np.zeros(20)
        e[j] = 1.0
        m, c = rk4_step(A, e[:4], e[4:].reshape(4, 4), h)
        P[:, j] = np.concatenate([m, c.ravel()])
    return P


def _check_step(params: OscillatorPair, dt: float):
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    modes = derive_normal_modes(params)
    w = max(modes.omega_plus, modes.omega_minus)
    if dt * w > MAX_PHASE_STEP:
        raise ValueError(
            f"dt={dt!r} too coarse: dt*max(omega_plus, omega_minus)={dt * w:.3g} > {MAX_PHASE_STEP}")


def evolve_series(params: OscillatorPair, init: GaussianMoments, times, dt: float) -> list[GaussianMoments]:
    """Moments at each of ``times`` (any order, all >= ``init.t``).

    Each interval between consecutive output times is split into the
    smallest number of equal steps no longer than ``dt``.
    """
    _check_step(params, dt)
    times = np.asarray(times, dtype=float)
    if np.any(times < init.t):
        raise ValueError("all times must be >= init.t")
    A = flow_matrix(params)
    order = np.argsort(times, kind="stable")
    state = np.concatenate([init.mean, init.cov.ravel()])
    t_now = init.t
    cache: dict[tuple[float, int], np.ndarray] = {}
    out: list[GaussianMoments | None] = [None] * len(times)
    for i in order:
        span = times[i] - t_now
        if span > 0:
            n = max(1, math.ceil(span / dt - 1e-9))
            h = span / n
            key = (h, n)
            if key not in cache:
                cache[key] = np.linalg.matrix_power(_step_operator(A, h), n)
            state = cache[key] @ state
            t_now = times[i]
        cov = state[4:].reshape(4, 4)
        out[i] = GaussianMoments(state[:4].copy(), 0.5 * (cov + cov.T), float(times[i]))
    return out


def evolve_moments(params: OscillatorPair, init: GaussianMoments, t_end: float, dt: float) -> GaussianMoments:
    if t_end < init.t:
        raise ValueError(f"t_end={t_end!r} precedes init.t={init.t!r}")
    return evolve_series(params, init, [t_end], dt)[0]


def evolve_moments_stepwise(params: OscillatorPair, init: GaussianMoments, t_end: float,
                            dt: float) -> GaussianMoments:
    """Same as :func:`evolve_moments` but steps explicitly; slow, kept for cross-checking."""
    _check_step(params, dt)
    span = t_end - init.t
    n = max(1, math.ceil(span / dt - 1e-9)) if span > 0 else 0
    h = span / n if n else 0.0
    A = flow_matrix(params)
    mean, cov = init.mean.copy(), init.cov.copy()
    for _ in range(n):
        mean, cov = rk4_step(A, mean, cov, h)
    return GaussianMoments(mean, cov, float(t_end))


def oracle_observables(params: OscillatorPair, x0: float, times, dt: float = 1e-4) -> ObservablePoint:
    """Observables of oscillator #1 from the moment flow, stacked over ``times``."""
    series = evolve_series(params, initial_moments(params, x0), np.atleast_1d(times), dt)
    rows = np.array([m.observables().as_array() for m in series]).T
    if np.ndim(times) == 0:
        return ObservablePoint(*(float(v[0]) for v in rows))
    return ObservablePoint(*rows)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    converged: bool
    points: int


def quadrature_normalize(density, center, scale, window: float = 8.0, tol: float = 1e-10,
                         start_level: int = 6, max_level: int = 12) -> QuadratureResult:
    """Integrate a 1D or 2D density over ``center +/- window * scale``.

    ``density`` takes one array (1D) or two broadcast arrays (2D); the
    dimension follows ``len(center)``.  Composite Simpson on 2**k + 1 nodes
    per axis is refined until consecutive levels agree within ``tol``.
    """
    center = np.atleast_1d(np.asarray(center, dtype=float))
    scale = np.atleast_1d(np.asarray(scale, dtype=float))
    if window < 6:
        raise ValueError(f"window must be >= 6 sigma, got {window!r}")
    if center.size not in (1, 2) or scale.shape != center.shape:
        raise ValueError("center and scale must both have length 1 or 2")
    if np.any(scale <= 0):
        raise ValueError("scale must be > 0")

    def integrate(level):
        n = 2**level + 1
        axes = [np.linspace(c - window * s, c + window * s, n) for c, s in zip(center, scale)]
        if center.size == 1:
            return simpson(density(axes[0]), x=axes[0]), n
        X, Y = np.meshgrid(axes[0], axes[1], indexing="ij")
        vals = density(X, Y)
        return simpson(simpson(vals, x=axes[1], axis=1), x=axes[0]), n * n

    prev, _ = integrate(start_level)
    err = math.inf
    for level in range(start_level + 1, max_level + 1):
        cur, npts = integrate(level)
        err = float(abs(cur - prev))
        if err <= tol:
            return QuadratureResult(float(cur), err, True, npts)
        prev = cur
    return QuadratureResult(float(prev), err, False, npts)
