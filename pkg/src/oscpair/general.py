"""Wave function and observables for an arbitrary coupled pair.

The propagated state is a two-dimensional Gaussian in normal-mode
coordinates ``Y = N @ (y1, y2)``, described by the real symmetric
matrices ``U`` (width) and ``V`` (chirp) with ``U + iV = Omega1 S^-1 Omega1``.
``Omega1`` and ``Omega2`` blow up whenever ``sin(omega_plus t)`` or
``sin(omega_minus t)`` vanishes, so every quantity used for physics is
computed from combinations whose only denominator is the scalar ``Xi``,
which is bounded away from zero for all times.  The raw matrices are kept
for the algebraic identity checks at non-singular times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Gaussian1D,
    NormalModes,
    ObservablePoint,
    OscillatorPair,
    ParameterError,
    as_times,
    derive_normal_modes,
    squeeze_scalar,
)


@dataclass(frozen=True)
class GeneralState:
    """Oscillator #1 in its ground state, #2 in a coherent state of amplitude ``x0``."""

    params: OscillatorPair
    x0: float = 0.0
    modes: NormalModes = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.params, OscillatorPair):
            raise ParameterError("params", "expected an OscillatorPair")
        if not math.isfinite(self.x0):
            raise ParameterError("x0", "must be finite")
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "modes", derive_normal_modes(self.params))

    @property
    def X0(self) -> float:
        """Amplitude in the mass-rescaled frame."""
        return (self.params.m2 / self.params.m1) ** 0.25 * self.x0

    @property
    def omega_c(self) -> float:
        m = self.modes
        return m.omega1 * m.cos_alpha**2 + m.omega2 * m.sin_alpha**2

    @property
    def omega_s(self) -> float:
        m = self.modes
        return m.omega1 * m.sin_alpha**2 + m.omega2 * m.cos_alpha**2


@dataclass(frozen=True)
class CoeffMatrices:
    """Time-dependent coefficient matrices at one instant.

    ``U``, ``V_minus_Omega2``, ``UZ``, ``VZ``, ``U_inv`` and ``center`` are
    always finite.  ``S``, ``Omega1``, ``Omega2`` and ``V`` contain
    infinities at the mode-singular times and are informational there.
    """

    t: float
    S: np.ndarray
    Omega1: np.ndarray
    Omega2: np.ndarray
    R_mat: np.ndarray
    I_mat: np.ndarray
    M_det: complex
    Xi: complex
    U: np.ndarray
    V: np.ndarray
    V_minus_Omega2: np.ndarray
    U_inv: np.ndarray
    Z: np.ndarray
    UZ: np.ndarray
    VZ: np.ndarray
    center: np.ndarray
    rho: float
    eta: float
    omega_c: float
    omega_s: float
    delta: float


def adjugate(a: np.ndarray) -> np.ndarray:
    """Transposed cofactor matrix of a 2x2 (not the Hermitian conjugate)."""
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]])


def _det2(a):
    return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]


def _trig(state: GeneralState, t):
    m = state.modes
    wp, wm = m.omega_plus, m.omega_minus
    return np.cos(wp * t), np.sin(wp * t), np.cos(wm * t), np.sin(wm * t)


def xi(state: GeneralState, t):
    """The complex scalar ``Xi(t) = M(t) / (rho eta)``, in its finite form."""
    t = as_times(t)
    m = state.modes
    w1, w2, wp, wm = m.omega1, m.omega2, m.omega_plus, m.omega_minus
    cp, sp, cm, sm = _trig(state, t)
    re = -cp * cm + w1 * w2 / (wp * wm) * sp * sm
    im = -state.omega_s / wm * cp * sm - state.omega_c / wp * cm * sp
    return squeeze_scalar(re + 1j * im)


def build_matrices(state: GeneralState, t: float) -> CoeffMatrices:
    t = float(as_times(t))
    m = state.modes
    w1, w2, wp, wm = m.omega1, m.omega2, m.omega_plus, m.omega_minus
    c, s = m.cos_alpha, m.sin_alpha
    wc, ws, delta = state.omega_c, state.omega_s, w2 - w1
    X0 = state.X0
    cp, sp, cm, sm = _trig(state, t)
    rho, eta = sp / wp, sm / wm

    R = np.array([[wc * rho**2, delta * s * c * rho * eta],
                  [delta * s * c * rho * eta, ws * eta**2]])
    I = np.diag([rho * cp, eta * cm])
    M_det = complex(_det2(R - 1j * I))
    Xi = complex(xi(state, t))

    # U + i(V - Omega2), every entry a finite numerator over Xi.
    G = np.empty((2, 2), dtype=complex)
    G[0, 0] = wp**2 * rho * (ws * eta - 1j * cm) - cp * (wc * cm + 1j * w1 * w2 * eta)
    G[1, 1] = wm**2 * eta * (wc * rho - 1j * cp) - cm * (ws * cp + 1j * w1 * w2 * rho)
    G[0, 1] = G[1, 0] = -delta * s * c
    G /= Xi
    U, VmO2 = G.real.copy(), G.imag.copy()
    U_inv = adjugate(U) / _det2(U)

    Z = w2 * X0 * np.array([s * rho, c * eta])
    WZ = w2 * X0 * np.array([s * (w1 * eta - 1j * cm), c * (w1 * rho - 1j * cp)]) / Xi
    UZ, VZ = WZ.real.copy(), WZ.imag.copy()
    center = U_inv @ VZ

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        csc_p, csc_m = np.divide(1.0, sp), np.divide(1.0, sm)
        Omega1 = np.diag([wp * csc_p, wm * csc_m])
        Omega2 = np.diag([wp * cp * csc_p, wm * cm * csc_m])
        S = np.array([[wc - 1j * Omega2[0, 0], delta * s * c],
                      [delta * s * c, ws - 1j * Omega2[1, 1]]])
        V = VmO2 + Omega2

    return CoeffMatrices(
        t=t, S=S, Omega1=Omega1, Omega2=Omega2, R_mat=R, I_mat=I, M_det=M_det, Xi=Xi,
        U=U, V=V, V_minus_Omega2=VmO2, U_inv=U_inv, Z=Z, UZ=UZ, VZ=VZ, center=center,
        rho=rho, eta=eta, omega_c=wc, omega_s=ws, delta=delta,
    )


def general_wavefunction(state: GeneralState, y1, y2, t: float):
    """Two-oscillator amplitude at oscillator coordinates ``(y1, y2)``.

    Broadcasts over ``y1``/``y2``.  The overall phase uses the principal
    branch of the square-root prefactor.
    """
    cm = build_matrices(state, t)
    mu, hbar = state.modes.mu, state.params.hbar
    N = state.modes.N
    y1, y2 = np.broadcast_arrays(np.asarray(y1, dtype=float), np.asarray(y2, dtype=float))
    Yp = N[0, 0] * y1 + N[0, 1] * y2
    Ym = N[1, 0] * y1 + N[1, 1] * y2

    def quad(A, a, b):
        return A[0, 0] * a * a + 2 * A[0, 1] * a * b + A[1, 1] * b * b

    dp, dm = Yp - cm.center[0], Ym - cm.center[1]
    phase = (float(cm.Z @ cm.VZ)
             - 2 * (cm.UZ[0] * Yp + cm.UZ[1] * Ym)
             - quad(cm.V_minus_Omega2, Yp, Ym))
    env = -quad(cm.U, dp, dm)
    norm = (mu**2 * state.modes.omega1 * state.modes.omega2 / (math.pi * hbar) ** 2) ** 0.25
    pref = np.sqrt(-1.0 / cm.Xi)
    return norm * pref * np.exp(mu / (2 * hbar) * (env + 1j * phase))


def _position_closed_form(state: GeneralState, t):
    p, m = state.params, state.modes
    c, s = m.cos_alpha, m.sin_alpha
    w1, w2, wp, wm = m.omega1, m.omega2, m.omega_plus, m.omega_minus
    wc, ws, delta = state.omega_c, state.omega_s, w2 - w1
    cp, sp, cm, sm = _trig(state, t)
    mean = math.sqrt(p.m2 / p.m1) * state.x0 * s * c * (cp - cm)
    bracket = (c * c * (ws / w2 * cp * cp + w1 * wc / wp**2 * sp * sp)
               + s * s * (wc / w2 * cm * cm + w1 * ws / wm**2 * sm * sm)
               + 2 * delta / w2 * c * c * s * s * (cp * cm - w1 * w2 / (wp * wm) * sp * sm))
    sigma = np.sqrt(p.hbar / (2 * p.m1 * w1) * bracket)
    return mean, sigma


def _momentum_closed_form(state: GeneralState, t):
    p, m = state.params, state.modes
    c, s = m.cos_alpha, m.sin_alpha
    w1, w2, wp, wm = m.omega1, m.omega2, m.omega_plus, m.omega_minus
    wc, ws, delta = state.omega_c, state.omega_s, w2 - w1
    cp, sp, cm, sm = _trig(state, t)
    mean = -p.m1 * state.x0 * math.sqrt(p.m2 / p.m1) * s * c * (wp * sp - wm * sm)
    bracket = (c * c * (wc / w1 * cp * cp + ws * wp**2 / (w1**2 * w2) * sp * sp)
               + s * s * (ws / w1 * cm * cm + wc * wm**2 / (w1**2 * w2) * sm * sm)
               - 2 * delta / w1 * c * c * s * s * (cp * cm - wp * wm / (w1 * w2) * sp * sm))
    sigma = np.sqrt(p.hbar * p.m1 * w1 / 2 * bracket)
    return mean, sigma


def general_reduced_distribution(state: GeneralState, t) -> Gaussian1D:
    """Marginal distribution of ``y1`` (closed form)."""
    t = as_times(t)
    mean, sigma = _position_closed_form(state, t)
    return Gaussian1D(squeeze_scalar(mean), squeeze_scalar(sigma))


def general_observables(state: GeneralState, t) -> ObservablePoint:
    """Mean and spread of position and momentum of oscillator #1 (closed forms, vectorized)."""
    t = as_times(t)
    y_mean, y_sigma = _position_closed_form(state, t)
    p_mean, p_sigma = _momentum_closed_form(state, t)
    vals = (t, y_mean, y_sigma, p_mean, p_sigma, y_sigma * p_sigma)
    return ObservablePoint(*(squeeze_scalar(np.broadcast_to(v, t.shape)) for v in vals))


def matrix_observables(state: GeneralState, t: float) -> ObservablePoint:
    """Same observables assembled from the coefficient matrices rather than the closed forms."""
    cm = build_matrices(state, t)
    mu, hbar = state.modes.mu, state.params.hbar
    N, N_inv = state.modes.N, state.modes.N_inv
    y_mean = (N_inv @ cm.center)[0]
    NUN = N.T @ cm.U @ N
    y_sigma = math.sqrt(hbar / (2 * mu) * NUN[1, 1] / _det2(cm.U))
    p_mean = -mu * (N.T @ (cm.UZ + cm.V_minus_Omega2 @ cm.center))[0]
    A = cm.U + cm.V_minus_Omega2 @ cm.U_inv @ cm.V_minus_Omega2
    p_sigma = math.sqrt(mu * hbar / 2 * (N.T @ A @ N)[0, 0])
    return ObservablePoint(cm.t, float(y_mean), y_sigma, float(p_mean), p_sigma, y_sigma * p_sigma)


@dataclass(frozen=True)
class XiBounds:
    lower: float
    upper: float
    zeta: float
    lam: float
    zeta_prime: float
    lam_prime: float


def xi_bounds(state: GeneralState) -> XiBounds:
    """Time-independent bounds ``lower <= |Xi(t)|^2 <= upper``."""
    m = state.modes
    w1, w2, wp, wm = m.omega1, m.omega2, m.omega_plus, m.omega_minus
    wc, ws = state.omega_c, state.omega_s
    terms = (
        wc * ws,
        wc * ws * w1**2 * w2**2 / (wp**2 * wm**2),
        w1 * w2 * ws**2 / wm**2,
        w1 * w2 * wc**2 / wp**2,
    )
    zeta, zeta_p = max(wc * ws, w1 * w2), min(wc * ws, w1 * w2)
    lam, lam_p = min(terms), max(terms)
    return XiBounds(lam / zeta, lam_p / zeta_p, zeta, lam, zeta_p, lam_p)


class IdentityCheckError(AssertionError):
    pass


class IdentityResiduals(dict):
    """Relative residual per identity name."""

    def failed(self, tol: float = 1e-10) -> dict[str, float]:
        return {k: v for k, v in self.items() if not v < tol}

    def check(self, tol: float = 1e-10) -> IdentityResiduals:
        bad = self.failed(tol)
        if bad:
            detail = ", ".join(f"{k}={v:.3e}" for k, v in bad.items())
            raise IdentityCheckError(f"identity residuals above {tol:g}: {detail}")
        return self


def _rel(a, b) -> float:
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    return 0.0 if scale == 0 else float(np.max(np.abs(np.asarray(a) - np.asarray(b))) / scale)


def identity_residuals(state: GeneralState, t: float) -> IdentityResiduals:
    """Residuals of the algebraic identities among the raw coefficient matrices.

    The raw matrices are formed from their definitions, so ``t`` must avoid
    the zeros of ``sin(omega_plus t)`` and ``sin(omega_minus t)``.
    """
    t = float(as_times(t))
    m = state.modes
    w1, w2, wp, wm = m.omega1, m.omega2, m.omega_plus, m.omega_minus
    sp, sm = math.sin(wp * t), math.sin(wm * t)
    if sp == 0.0 or sm == 0.0:
        raise ValueError(f"t={t!r} is a mode-singular time; raw matrices are undefined")
    cm = build_matrices(state, t)
    R, I = cm.R_mat, cm.I_mat

    W = cm.Omega1 @ np.linalg.inv(cm.S) @ cm.Omega1
    U, V = W.real, W.imag
    U_inv = np.linalg.inv(U)
    Z = cm.Z
    detU = _det2(U)
    detS = complex(_det2(cm.S))
    M = cm.M_det

    out = IdentityResiduals()
    out["amplitude_normalization"] = _rel(w2 * state.X0**2, Z @ (V @ U_inv @ V + U) @ Z)
    out["det_U_propagator"] = _rel(detU, w1 * w2 * wp**2 * wm**2 / (sp**2 * sm**2 * abs(detS) ** 2))
    detR = _det2(R)
    out["det_U_reduced"] = max(_rel(abs(M) ** 2 * detU, w1 * w2 * cm.rho**2 * cm.eta**2),
                               _rel(w1 * w2 * cm.rho**2 * cm.eta**2, detR))
    detI = _det2(I)
    scale = max(abs(detR), abs(detI), abs(M.real))
    out["real_part_M"] = float(abs(detR - detI - M.real) / scale) if scale else 0.0
    cof = I @ adjugate(R) + R @ adjugate(I) + M.imag * np.eye(2)
    scale = max(np.max(np.abs(I @ adjugate(R))), np.max(np.abs(R @ adjugate(I))), abs(M.imag))
    out["cofactor_sum"] = float(np.max(np.abs(cof)) / scale) if scale else 0.0
    rho_eta = cm.rho * cm.eta
    explicit = rho_eta * (w1 * w2 * rho_eta - math.cos(wp * t) * math.cos(wm * t)) - 1j * rho_eta * (
        cm.omega_s * cm.eta * math.cos(wp * t) + cm.omega_c * cm.rho * math.cos(wm * t))
    out["explicit_M"] = _rel(M, explicit)
    out["regularized_U"] = _rel(U, cm.U)
    out["regularized_V"] = _rel(V, cm.V)
    out["center"] = _rel(U_inv @ V @ Z, cm.center)
    return out


def position_moments(state: GeneralState, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Mean and covariance of ``(y1, y2)`` under the propagated density."""
    cm = build_matrices(state, t)
    N, N_inv = state.modes.N, state.modes.N_inv
    cov = state.params.hbar / (2 * state.modes.mu) * np.linalg.inv(N.T @ cm.U @ N)
    return N_inv @ cm.center, cov
