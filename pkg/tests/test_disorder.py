import math

import numpy as np
import pytest
from scipy.integrate import quad

from spinwork import (DisorderModel, InvalidInput, KernelSet, Ohmic, SystemConfig,
                      averaged_two_pulse_work, coefficients, ensemble_moments, parse_pulse,
                      t2_star, work_echo, work_two_pulse)
from spinwork.disorder import gauss_average
from spinwork.work import EnsembleMoments, polarization, two_pulse_parts, two_pulse_terms

P1, P2 = parse_pulse("rot:90:y"), parse_pulse("rot:90:x")


def adaptive(f, dm, **kw):
    """Density-weighted adaptive quadrature over +-12 standard deviations."""
    sd = math.sqrt(dm.variance)
    dens = lambda x: math.exp(-0.5 * ((x - dm.mean_gap) / sd) ** 2) / math.sqrt(2 * math.pi) / sd
    lo, hi = dm.mean_gap - 12 * sd, dm.mean_gap + 12 * sd
    return quad(lambda x: dens(x) * f(x), lo, hi, epsabs=0, epsrel=1e-12, limit=2000, **kw)[0]


def test_moments_against_adaptive_quadrature():
    dm = DisorderModel(8.0, 100.0, 1e3)
    m = ensemble_moments(dm)
    E_ref = adaptive(lambda x: 0.5 * x * polarization(x, 1e3), dm)
    m_ref = adaptive(lambda x: polarization(x, 1e3), dm)
    assert m.energy == pytest.approx(E_ref, rel=1e-9)
    assert m.polarization == pytest.approx(m_ref, rel=1e-9)
    assert m.energy < 0 and m.polarization < 0


def test_moments_without_disorder():
    m = ensemble_moments(DisorderModel(2.0, 0.0, 0.7))
    assert m.polarization == pytest.approx(-math.tanh(2.0 / 1.4), rel=1e-15)
    assert m.energy == pytest.approx(-math.tanh(2.0 / 1.4), rel=1e-15)


def test_moments_converge_linearly_as_disorder_vanishes():
    single = ensemble_moments(DisorderModel(2.0, 0.0, 0.7))
    gaps = [abs(ensemble_moments(DisorderModel(2.0, d, 0.7)).energy - single.energy) for d in (1e-2, 1e-3)]
    assert gaps[1] == pytest.approx(gaps[0] / 10, rel=0.02)


def test_hot_ensemble_has_no_moments():
    m = ensemble_moments(DisorderModel(8.0, 100.0, math.inf))
    assert m.energy == 0 and m.polarization == 0
    far = ensemble_moments(DisorderModel(8.0, 100.0, 1e9))
    assert abs(far.energy) < 1e-6 and abs(far.polarization) < 1e-7


def test_invalid_models():
    with pytest.raises(InvalidInput):
        DisorderModel(1.0, -1.0, 1.0)
    with pytest.raises(InvalidInput):
        DisorderModel(1.0, 1.0, -1.0)


def test_t2_star_convention():
    assert t2_star(DisorderModel(8.0, 100.0, 1.0)) == pytest.approx(0.1)
    assert math.isinf(t2_star(DisorderModel(8.0, 0.0, 1.0)))


@pytest.mark.parametrize("scaled_tau", [0.5, 2.0, 4.0, 6.0])
def test_characteristic_function(scaled_tau):
    d = 100.0
    tau = scaled_tau / math.sqrt(d)
    dm = DisorderModel(8.0, d, 1.0)
    avg = gauss_average(lambda om: np.exp(1j * om * tau), dm, atol=1e-14)
    want = math.exp(-d * tau**2 / 2)
    assert abs(avg) == pytest.approx(want, rel=1e-6, abs=1e-14)
    assert abs(avg - want * np.exp(8j * tau)) <= 1e-10 * max(want, 1e-4)


def test_sharp_integrand_falls_back_to_adaptive_quadrature():
    dm = DisorderModel(0.0, 1.0, 1.0)
    g = lambda om: np.tanh((om - 0.3) / 0.01)
    ref = adaptive(lambda x: math.tanh((x - 0.3) / 0.01), dm, points=[0.3])
    assert gauss_average(g, dm, max_nodes=128) == pytest.approx(ref, rel=1e-8)


def test_no_disorder_reduces_to_single_spin():
    ks = KernelSet(Ohmic(0.3, 1.0), 0.5)
    tau = np.linspace(0.05, 10, 80)
    avg = averaged_two_pulse_work(DisorderModel(1.3, 0.0, 0.4), ks, P1, P2, tau)
    one = work_two_pulse(SystemConfig.thermal(1.3, ks, 0.4), P1, P2, tau)
    assert np.allclose(avg.total, one.total, rtol=1e-13, atol=1e-15)
    assert np.allclose(avg.spin, one.spin, rtol=1e-13, atol=1e-15)


def test_array_kernel_matches_scalar_api():
    ks = KernelSet(Ohmic(0.3, 1.0), 0.5)
    c1, c2 = coefficients(P1), coefficients(P2)
    gaps = np.array([[0.4], [1.1], [6.0]])
    tau = np.array([0.3, 2.0])
    _, w2, _ = two_pulse_terms(ks, gaps, polarization(gaps, 0.8), c1, c2, tau)
    for row, gap in zip(w2, gaps[:, 0]):
        ref = work_two_pulse(SystemConfig.thermal(gap, ks, 0.8), P1, P2, tau).per_pulse[1]
        assert np.allclose(row, ref, rtol=1e-14)


def mc_total(dm, ks, tau, n, seed):
    rng = np.random.default_rng(seed)
    gaps = rng.normal(dm.mean_gap, math.sqrt(dm.variance), n)
    c1, c2 = coefficients(P1), coefficients(P2)
    w1, w2, _ = two_pulse_terms(ks, gaps, polarization(gaps, dm.spin_temperature), c1, c2, tau)
    tot = w1 + w2
    return tot.mean(), tot.std() / math.sqrt(n)


def test_average_matches_monte_carlo():
    dm = DisorderModel(8.0, 100.0, 5.0)
    ks = KernelSet(Ohmic(0.1, 1.0), 1.0)
    tau = 0.15
    mean, err = mc_total(dm, ks, tau, 10**6, seed=2024)
    got = averaged_two_pulse_work(dm, ks, P1, P2, tau).total
    assert abs(got - mean) <= 3 * err


@pytest.mark.parametrize("T_S,d", [(1e3, 100.0), (5.0, 100.0), (0.2, 25.0), (0.0, 4.0)])
def test_average_matches_adaptive_quadrature(T_S, d):
    dm = DisorderModel(3.0, d, T_S)
    ks = KernelSet(Ohmic(0.2, 1.0), 0.5)
    c1, c2 = coefficients(P1), coefficients(P2)
    tau = np.array([0.05, 0.3, 1.0, 3.0])
    got = averaged_two_pulse_work(dm, ks, P1, P2, tau).total
    for t, g in zip(tau, got):
        def f(x):
            w1, w2, _ = two_pulse_terms(ks, x, polarization(x, T_S), c1, c2, t)
            return float(w1 + w2)
        ref = adaptive(f, dm, points=[0.0] if T_S < 1 else None)
        assert g == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_long_separation_leaves_no_extraction():
    rng = np.random.default_rng(4)
    for _ in range(10):
        d = rng.uniform(1, 200)
        dm = DisorderModel(rng.uniform(0.5, 10), d, rng.uniform(0.1, 100))
        ks = KernelSet(Ohmic(rng.uniform(0, 1), 1.0), rng.uniform(0.01, 10))
        p1, p2 = (parse_pulse(f"euler:{a}:{b}:{c}") for a, b, c in rng.uniform(-180, 180, (2, 3)))
        tau = 10 / math.sqrt(d)
        assert averaged_two_pulse_work(dm, ks, p1, p2, tau).total >= -1e-10


def smooth_average(dm, ks, tau):
    c1, c2 = coefficients(P1), coefficients(P2)

    def smooth(om):
        w1, w2, _, _, _ = two_pulse_parts(ks, om, polarization(om, dm.spin_temperature), c1, c2, tau)
        return w1 + w2

    return float(gauss_average(smooth, dm)[0])


def test_long_separation_is_the_coherence_free_average():
    dm = DisorderModel(8.0, 100.0, 1e3)
    ks = KernelSet(Ohmic(0.1, 1.0), 1.0)
    tau = 10 / math.sqrt(dm.variance)
    got = averaged_two_pulse_work(dm, ks, P1, P2, tau).total
    assert got == pytest.approx(smooth_average(dm, ks, tau), rel=1e-12)


def test_cold_ensemble_coherence_outlives_the_gaussian_decay():
    # The pole of tanh(Omega / 2 T_S) at i pi T_S leaves a coherent tail of
    # order exp(-pi T_S tau), far above exp(-d tau^2 / 2) once tau > pi T_S / d.
    dm = DisorderModel(8.0, 100.0, 2.0)
    ks = KernelSet(Ohmic(0.1, 1.0), 1.0)
    c1, c2 = coefficients(P1), coefficients(P2)
    tau = 1.0
    got = averaged_two_pulse_work(dm, ks, P1, P2, tau).total
    tail = got - smooth_average(dm, ks, tau)
    assert 1e-4 < abs(tail) < 10 * math.exp(-math.pi * 2.0 * tau + (math.pi * 2.0) ** 2 / 200)

    def f(x):
        w1, w2, _ = two_pulse_terms(ks, x, polarization(x, 2.0), c1, c2, tau)
        return float(w1 + w2)

    assert got == pytest.approx(adaptive(f, dm), rel=1e-9)


def test_echo_sees_disorder_only_through_moments():
    ks = KernelSet(Ohmic(0.1, 1.0), 1.0)
    tau = np.linspace(0.1, 5, 20)
    rx, ry = parse_pulse("rot:90:x"), parse_pulse("rot:-90:y")
    for d in (1.0, 100.0):
        m = ensemble_moments(DisorderModel(8.0, d, 1e3))
        fixed = EnsembleMoments(-0.01, -0.002, 8.0)
        a = work_echo(SystemConfig(8.0, ks, m.polarization), rx, ry, tau, moments=fixed)
        b = work_echo(SystemConfig(8.0, ks, -0.5), rx, ry, tau, moments=fixed)
        assert np.array_equal(a.total, b.total)
