"""Acceptance criteria, one marked group per criterion.

The terminal summary prints one PASS/FAIL line per criterion.
"""

import math
import time

import numpy as np
import pytest

from conftest import random_pair, singular_margin
from oscpair import (
    GeneralState,
    OscillatorPair,
    ResonanceState,
    SymmetricState,
    general_observables,
    general_reduced_distribution,
    general_wavefunction,
    identity_residuals,
    matrix_observables,
    oracle_observables,
    quadrature_normalize,
    resonance_bounds,
    resonance_observables,
    resonance_params,
    symmetric_observables,
    symmetric_reduced_distribution,
    thermal_reduced,
    xi,
    xi_bounds,
)
from oscpair.general import position_moments
from oscpair.symmetric import ground_state_reduced

criterion = pytest.mark.criterion


def symmetric_state(gamma=0.5, x0=1.0):
    kappa = (gamma**-2 - 1) / 2  # m = omega = 1
    return SymmetricState(OscillatorPair.symmetric(1.0, 1.0, kappa), x0)


def max_rel_dev(a, b):
    """Per-observable deviation relative to that observable's peak magnitude over the series."""
    scale = np.max(np.abs(b), axis=1, keepdims=True)
    return float(np.max(np.abs(a - b) / scale))


@criterion(1, "symmetric sigma ranges over 1e4 times in [0, 100] (tol 1e-9, < 1 s)")
def test_symmetric_ranges():
    t0 = time.perf_counter()
    o = symmetric_observables(symmetric_state(0.5), np.linspace(0, 100, 10**4))
    elapsed = time.perf_counter() - t0
    assert abs(o.y1_sigma.min() - math.sqrt(0.3125)) < 1e-9
    assert abs(o.y1_sigma.max() - math.sqrt(0.5)) < 1e-9
    assert abs(o.p1_sigma.min() - math.sqrt(0.5)) < 1e-9
    assert abs(o.p1_sigma.max() - math.sqrt(1.25)) < 1e-9
    assert elapsed < 1.0


@criterion(2, "uncertainty product envelope [0.5, 0.625], endpoints within 1e-6 (< 1 s)")
def test_product_envelope():
    t0 = time.perf_counter()
    o = symmetric_observables(symmetric_state(0.5), np.linspace(0, 100, 10**4))
    elapsed = time.perf_counter() - t0
    assert np.all(o.product >= 0.5 * (1 - 1e-12))
    assert np.all(o.product <= 0.625 * (1 + 1e-12))
    assert abs(o.product.min() - 0.5) < 1e-6
    assert abs(o.product.max() - 0.625) < 1e-6
    assert elapsed < 1.0


@criterion(3, "beat amplitude: <y1>(pi) = -x0 (|err| < 1e-12)")
@pytest.mark.parametrize("x0", [1.0, 0.37, 2.5])
def test_beat_amplitude(x0):
    o = symmetric_observables(symmetric_state(0.5, x0), math.pi)
    assert abs(o.y1_mean + x0) < 1e-12


@criterion(4, "general reduces to symmetric, kappa in {0.1, 1, 5}, 1000 times (rel 1e-12)")
@pytest.mark.parametrize("kappa", [0.1, 1.0, 5.0])
def test_general_to_symmetric(kappa):
    p = OscillatorPair.symmetric(1.0, 1.0, kappa)
    t = np.linspace(0, 100, 1000)
    g = general_observables(GeneralState(p, 1.0), t).observables()
    s = symmetric_observables(SymmetricState(p, 1.0), t).observables()
    assert max_rel_dev(g, s) < 1e-12


@criterion(5, "general reduces to resonance, m1=1 m2=4 omega=1 kappa=2.4, 1000 times (rel 1e-12)")
def test_general_to_resonance():
    p = OscillatorPair.from_frequencies(1.0, 4.0, 1.0, 1.0, 2.4)
    t = np.linspace(0, 100, 1000)
    g = general_observables(GeneralState(p, 1.0), t).observables()
    r = resonance_observables(ResonanceState(p, 1.0), t).observables()
    assert max_rel_dev(g, r) < 1e-12


@criterion(6, "oracle equivalence, 20 random sets x 10 times, dt=1e-4 (abs 1e-6, < 30 s)")
def test_oracle_equivalence():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        p = random_pair(rng)
        x0 = rng.uniform(0, 3)
        times = np.sort(rng.uniform(0, 20, 10))
        ref = oracle_observables(p, x0, times, dt=1e-4).observables()
        got = general_observables(GeneralState(p, x0), times).observables()
        worst = max(worst, float(np.max(np.abs(got - ref))))
    elapsed = time.perf_counter() - t0
    assert worst < 1e-6
    assert elapsed < 30.0


@criterion(7, "identity suite at 100 random (params, t) off the sine zeros (rel 1e-10)")
def test_identity_suite():
    rng = np.random.default_rng(7)
    done, worst = 0, {}
    while done < 100:
        p = random_pair(rng)
        s = GeneralState(p, rng.uniform(0, 3))
        t = rng.uniform(0, 20)
        if singular_margin(s.modes, t) <= 1e-3:
            continue
        for name, value in identity_residuals(s, t).items():
            worst[name] = max(worst.get(name, 0.0), value)
        done += 1
    for key in ("amplitude_normalization", "explicit_M", "real_part_M", "cofactor_sum"):
        assert key in worst
    bad = {k: v for k, v in worst.items() if not v < 1e-10}
    assert not bad, bad


@criterion(8, "|Xi|^2 within its bounds, 10 random sets x 1e4 times, zero violations")
def test_xi_bounds():
    rng = np.random.default_rng(8)
    violations = 0
    for _ in range(10):
        s = GeneralState(random_pair(rng), 0.0)
        b = xi_bounds(s)
        x2 = np.abs(xi(s, rng.uniform(0, 1000, 10**4))) ** 2
        violations += int(np.sum(x2 < b.lower) + np.sum(x2 > b.upper))
    assert violations == 0


@criterion(9, "regular at t = n pi / omega_pm, n=1..20, 5 random sets (jump < 1e-6)")
def test_regular_at_singular_times():
    rng = np.random.default_rng(9)
    for _ in range(5):
        p = random_pair(rng)
        s = GeneralState(p, rng.uniform(0, 3))
        n = np.arange(1, 21)
        ts = np.concatenate([n * math.pi / s.modes.omega_plus, n * math.pi / s.modes.omega_minus])
        at = general_observables(s, ts).observables()
        lo = general_observables(s, ts - 1e-9).observables()
        hi = general_observables(s, ts + 1e-9).observables()
        assert np.all(np.isfinite(at))
        assert np.max(np.abs(hi - lo)) < 1e-6
        for t in ts[::7]:
            mat = matrix_observables(s, t).observables()
            assert np.all(np.isfinite(mat))
            np.testing.assert_allclose(mat, general_observables(s, t).observables(), rtol=1e-9, atol=1e-12)
            psi = general_wavefunction(s, np.array([0.0, 0.2]), np.array([0.1, -0.3]), t)
            assert np.all(np.isfinite(psi))


@criterion(10, "normalization: 1D to 1e-10, 2D |Psi|^2 to 1e-7 at 5 random (params, t) (< 10 s)")
def test_normalization():
    rng = np.random.default_rng(10)
    t0 = time.perf_counter()
    for _ in range(5):
        p = random_pair(rng)
        s = GeneralState(p, rng.uniform(0, 3))
        t = rng.uniform(0, 20)
        d = general_reduced_distribution(s, t)
        q1 = quadrature_normalize(d.pdf, d.mean, d.sigma, tol=1e-12)
        assert q1.converged and abs(q1.value - 1) < 1e-10
        mean, cov = position_moments(s, t)
        q2 = quadrature_normalize(lambda a, b: np.abs(general_wavefunction(s, a, b, t)) ** 2,
                                  mean, np.sqrt(np.diag(cov)), tol=1e-9)
        assert q2.converged and abs(q2.value - 1) < 1e-7
    sd = symmetric_reduced_distribution(symmetric_state(0.5), 4.2)
    assert abs(quadrature_normalize(sd.pdf, sd.mean, sd.sigma).value - 1) < 1e-10
    assert time.perf_counter() - t0 < 10.0


@criterion(11, "central difference of <y1> matches <p1>/m1 at 100 random samples (< 1e-8)")
def test_velocity_consistency():
    rng = np.random.default_rng(11)
    h = 1e-5
    worst = 0.0
    for _ in range(100):
        p = random_pair(rng)
        s = GeneralState(p, rng.uniform(0, 3))
        t = rng.uniform(h, 20)
        fd = (general_observables(s, t + h).y1_mean - general_observables(s, t - h).y1_mean) / (2 * h)
        worst = max(worst, abs(fd - general_observables(s, t).p1_mean / p.m1))
    assert worst < 1e-8


@criterion(12, "squeezing bound falls along m1/m2 in {1, 0.1, 0.01} and gamma in {0.5, 0.1, 0.01}")
def test_extreme_squeezing():
    ratios, gammas = (1.0, 0.1, 0.01), (0.5, 0.1, 0.01)
    lower = np.empty((3, 3))
    t = np.linspace(0, 20, 20001)
    for i, r in enumerate(ratios):
        for j, g in enumerate(gammas):
            s = ResonanceState(resonance_params(1.0, 1.0 / r, 1.0, g), 1.0)
            lower[i, j] = resonance_bounds(s).y1_sigma[0]
            for o in (resonance_observables(s, t), general_observables(GeneralState(s.params, 1.0), t)):
                assert np.min(o.product) >= 0.5 * (1 - 1e-12)
    assert np.all(np.diff(lower, axis=0) < 0)
    assert np.all(np.diff(lower, axis=1) < 0)
    np.testing.assert_allclose(np.diag(lower), np.sqrt(0.5 * np.array([1.25 / 2, 0.11 / 1.1, 0.0101 / 1.01])),
                               rtol=1e-14)


@criterion(13, "thermal product (hbar/2) coth(beta/2) to 1e-12; cold limit is the ground state")
@pytest.mark.parametrize("T", [0.05, 0.5, 1.0, 3.0, 40.0])
def test_thermal(T):
    for p in (OscillatorPair.symmetric(1.0, 1.0), OscillatorPair.symmetric(2.5, 0.7, hbar=0.6)):
        gx, gp = thermal_reduced(p, T)
        beta_hw = p.hbar * p.omega1 / T
        assert abs(gx.sigma * gp.sigma - p.hbar / 2 / math.tanh(beta_hw / 2)) < 1e-12
        cx, cp = thermal_reduced(p, 1e-4 * p.hbar * p.omega1)
        ground_x, ground_p = ground_state_reduced(SymmetricState(p))
        assert abs(cx.sigma - ground_x.sigma) < 1e-12
        assert abs(cp.sigma - ground_p.sigma) < 1e-12
        assert abs(cx.sigma - math.sqrt(p.hbar / (2 * p.m1 * p.omega1))) < 1e-12
