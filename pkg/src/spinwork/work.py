"""Closed-form work for two-pulse and three-pulse (echo) sequences.

Protocol
--------
The spin starts in a diagonal state with polarisation ``sz0 = <sigma_z>`` and
the bath in its thermal state, uncorrelated with the spin.  After a waiting
time ``t`` (the *preparation time*) the first pulse is applied.  For the
two-pulse sequence a second pulse follows after ``tau``.  The echo inserts a
``pi`` pulse at ``t + tau`` and applies the final pulse at ``t + 2 tau``.

Passing ``prep_time=None`` starts instead from the correlated state, in which
the bath has relaxed around each spin level.  For a continuum bath this is
the limit of an infinitely long preparation.  It is the physically relevant
case and the default everywhere.

All results are exact for a bath of harmonic modes with diagonal coupling.
The functions broadcast over ``tau`` and return numpy arrays when ``tau`` is an
array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels as _k
from .errors import DomainError, InvalidInput
from .kernels import KernelSet
from .pulses import Pulse, PulseCoefficients, coefficients

__all__ = [
    "SystemConfig", "EnsembleMoments", "WorkBreakdown",
    "work_first_pulse", "work_two_pulse", "work_echo", "work_echo_finite_t",
    "polarization", "initial_sz", "pauli_phase_averages",
]


def polarization(spin_gap, spin_temperature):
    """Thermal ``<sigma_z> = -tanh(eps / 2 T_S)``; vectorised over ``spin_gap``."""
    eps = np.asarray(spin_gap, dtype=float)
    if spin_temperature == 0:
        out = -np.sign(eps)
    elif math.isinf(spin_temperature):
        out = np.zeros_like(eps)
    else:
        out = -np.tanh(eps / (2 * spin_temperature))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class SystemConfig:
    """Spin gap ``eps``, initial polarisation ``sz0`` and the bath kernels.

    Build it from a spin temperature with :meth:`thermal`, or pass ``sz0``
    directly.  ``spin_temperature`` is then inferred; it is infinite for an
    unpolarised spin and negative for an inverted one.
    """

    spin_gap: float
    kernels: KernelSet
    sz0: float
    spin_temperature: float = field(default=None)

    def __post_init__(self):
        if not (self.spin_gap > 0 and math.isfinite(self.spin_gap)):
            raise InvalidInput("spin gap must be finite and > 0")
        if not -1 <= self.sz0 <= 1:
            raise InvalidInput(f"sz0 must lie in [-1, 1], got {self.sz0}")
        if self.spin_temperature is None:
            object.__setattr__(self, "spin_temperature", _temperature_from(self.spin_gap, self.sz0))

    @classmethod
    def thermal(cls, spin_gap, kernels, spin_temperature):
        if not spin_temperature >= 0:
            raise InvalidInput("spin temperature must be >= 0")
        return cls(spin_gap, kernels, float(polarization(spin_gap, spin_temperature)),
                   float(spin_temperature))

    @property
    def bath_temperature(self):
        return self.kernels.temperature


def _temperature_from(eps, sz0):
    if sz0 == 0:
        return math.inf
    if sz0 == -1:
        return 0.0
    if sz0 == 1:
        return -0.0
    return eps / (2 * math.atanh(-sz0))


def initial_sz(cfg: SystemConfig) -> float:
    """Initial polarisation ``<sigma_z>`` of the spin."""
    return cfg.sz0


def pauli_phase_averages(chi, sz0):
    """``(<exp(i chi sz)>, <exp(i chi sz) sz>)`` on a diagonal spin state."""
    chi = np.asarray(chi, dtype=float)
    c, s = np.cos(chi), np.sin(chi)
    return c + 1j * sz0 * s, sz0 * c + 1j * s


@dataclass(frozen=True)
class EnsembleMoments:
    """Disorder-averaged spin quantities entering the echo.

    ``energy`` is ``<(eps/2) sz0>``, ``polarization`` is ``<sz0>`` and
    ``mean_gap`` is ``<eps>``.  A single spin has ``energy = eps sz0 / 2``.
    """

    energy: float
    polarization: float
    mean_gap: float

    @classmethod
    def single(cls, cfg: SystemConfig):
        return cls(0.5 * cfg.spin_gap * cfg.sz0, cfg.sz0, cfg.spin_gap)


@dataclass(frozen=True, eq=False)
class WorkBreakdown:
    """Work done on the spin plus bath by a pulse sequence.

    Negative ``total`` means work was extracted.  ``spin`` is the change of
    the bare spin energy and ``bath_int`` the change of bath plus interaction
    energy, so that ``total == spin + bath_int``.  ``w`` is the dimensionless
    work ``2 W / G_inf`` (``2 W / (gamma Gamma)`` for the ohmic bath).
    """

    tau: np.ndarray
    per_pulse: tuple
    total: np.ndarray
    spin: np.ndarray
    bath_int: np.ndarray
    w: np.ndarray


def _check_tau(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(~(tau > 0)) or not np.all(np.isfinite(tau)):
        raise DomainError("pulse separations must be finite and > 0")
    return tau


def _check_prep(t):
    if t is not None and not (t >= 0 and math.isfinite(t)):
        raise DomainError("preparation time must be finite and >= 0")


def _breakdown(ks, tau, parts, spin):
    total = sum(parts)
    ginf = _k.g_infinity(ks)
    w = 2 * total / ginf if ginf > 0 else np.full_like(np.asarray(total, dtype=float), np.nan)
    sq = lambda x: x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x
    return WorkBreakdown(sq(tau), tuple(sq(p) for p in parts), sq(total), sq(spin),
                         sq(total - spin), sq(w))


def _g_at(ks, t, shift):
    """``G(t + shift)``, or ``G_inf`` when ``t`` is None."""
    if t is None:
        return _k.g_infinity(ks)
    return _k.spin_bath_kernel(ks, t + shift)


def work_first_pulse(cfg: SystemConfig, pulse: Pulse, prep_time=None) -> float:
    """Work of a single pulse applied after ``prep_time``."""
    _check_prep(prep_time)
    c = coefficients(pulse).zz
    ks = cfg.kernels
    return (1 - c) * (0.5 * _g_at(ks, prep_time, 0.0) - 0.5 * cfg.spin_gap * cfg.sz0)


def two_pulse_parts(ks: KernelSet, eps, sz0, c1: PulseCoefficients, c2: PulseCoefficients,
                    tau, prep_time=None):
    """Two-pulse work split into a smooth part and a precessing part.

    Returns ``(W1, W2_smooth, W2_coh, dHS_smooth, dHS_coh)``.  The full second
    pulse work is ``W2_smooth + Re(exp(i eps tau) W2_coh)``, and likewise for
    the spin energy.  ``W2_coh`` is analytic in ``eps``; the disorder average
    relies on that.  ``eps`` and ``sz0`` may be (complex) arrays broadcasting
    against ``tau``.
    """
    t = prep_time
    eps = np.asarray(eps)
    s0 = np.asarray(sz0)
    a, b = c1.zz, c2.zz
    g_t = _g_at(ks, t, 0.0)
    g_tt = _g_at(ks, t, tau)
    g_tau = _k.spin_bath_kernel(ks, tau)
    chi = _k.chi_two(ks, tau, t)
    xi = _k.decoherence(ks, tau)
    xid = _k.decoherence_rate(ks, tau)

    ph, ph_z = pauli_phase_averages(chi, s0)
    amp = c1["+", "z"] * c2["z", "+"] * np.exp(-xi)

    w1 = (1 - a) * (0.5 * g_t - 0.5 * eps * s0)
    w2 = (1 - b) * (-0.5 * eps * a * s0 + 0.5 * (1 - a) * g_tau + 0.5 * a * g_tt)
    w2_coh = amp * ((eps + 1j * xid) * ph_z - (g_tt - g_tau) * ph)
    d_spin = -0.5 * eps * s0 * (1 - a * b)
    d_coh = amp * eps * ph_z
    return w1, w2, w2_coh, d_spin, d_coh


def two_pulse_terms(ks: KernelSet, eps, sz0, c1: PulseCoefficients, c2: PulseCoefficients,
                    tau, prep_time=None):
    """Array kernel of :func:`work_two_pulse`: returns ``(W1, W2, dH_S)``."""
    eps = np.asarray(eps, dtype=float)
    w1, w2, w2_coh, ds, ds_coh = two_pulse_parts(ks, eps, sz0, c1, c2, tau, prep_time)
    rot = np.exp(1j * eps * tau)
    w2 = w2 + np.real(rot * w2_coh)
    ds = ds + np.real(rot * ds_coh)
    return np.broadcast_to(w1, w2.shape), w2, ds


def work_two_pulse(cfg: SystemConfig, first: Pulse, second: Pulse, tau, prep_time=None):
    """Work of ``first`` and ``second`` separated by ``tau``.

    ``per_pulse`` holds the work of each pulse.  Extraction needs a
    non-equilibrium spin (``T_S != T``) and is driven by the coherence created
    by the first pulse, which the second pulse converts back into energy.
    """
    tau = _check_tau(tau)
    _check_prep(prep_time)
    parts = two_pulse_terms(cfg.kernels, cfg.spin_gap, cfg.sz0, coefficients(first),
                            coefficients(second), tau, prep_time)
    return _breakdown(cfg.kernels, tau, parts[:2], parts[2])


def echo_terms(ks: KernelSet, moments: EnsembleMoments, c1: PulseCoefficients,
               c2: PulseCoefficients, tau, prep_time=None):
    """Array kernel of :func:`work_echo`: returns ``(W1, W_pi, W2, dH_S)``."""
    t = prep_time
    E, m, om = moments.energy, moments.polarization, moments.mean_gap
    a, b = c1.zz, c2.zz
    g_t = _g_at(ks, t, 0.0)
    g_t1 = _g_at(ks, t, tau)
    g_t2 = _g_at(ks, t, 2 * tau)
    g_1 = _k.spin_bath_kernel(ks, tau)
    g_2 = _k.spin_bath_kernel(ks, 2 * tau)
    chi = _k.chi_three(ks, tau, t)
    decay = np.exp(-4 * _k.decoherence(ks, tau) + _k.decoherence(ks, 2 * tau))
    rate = 2 * _k.decoherence_rate(ks, tau) - _k.decoherence_rate(ks, 2 * tau)

    cos, sin = np.cos(chi), np.sin(chi)
    ph, ph_z = pauli_phase_averages(-chi, m)
    ph_e = 2 * E * cos - 1j * om * sin  # <eps exp(-i chi sz) sz> over the ensemble
    amp = c1["-", "z"] * c2["z", "+"] * decay

    w1 = np.broadcast_to((1 - a) * (0.5 * g_t - E), np.shape(tau)).astype(float)
    w_pi = -2 * E * a + (1 - a) * g_1 + a * g_t1
    longitudinal = (1 - b) * (E * a + 0.5 * a * (g_2 - g_t2) + g_1 - 0.5 * g_2)
    w2 = longitudinal + np.real(amp * (ph_e + 1j * rate * ph_z - (g_t2 - g_2) * ph))
    d_spin = -E * (1 + a * b) + np.real(amp * ph_e)
    return w1, w_pi, w2, d_spin


def work_echo(cfg: SystemConfig, first: Pulse, second: Pulse, tau, prep_time=None,
              moments: EnsembleMoments | None = None):
    """Work of the sequence ``first``, wait ``tau``, ``pi``, wait ``tau``, ``second``.

    ``moments`` replaces the single-spin quantities by disorder averages.
    The ``pi`` pulse refocuses the precession phase, so the result depends
    on the disorder only through those three numbers.  ``per_pulse`` is
    ``(W1, W_pi, W2)``.
    """
    tau = _check_tau(tau)
    _check_prep(prep_time)
    if moments is None:
        moments = EnsembleMoments.single(cfg)
    w1, w_pi, w2, d_spin = echo_terms(cfg.kernels, moments, coefficients(first),
                                      coefficients(second), tau, prep_time)
    return _breakdown(cfg.kernels, tau, (w1, w_pi, w2), d_spin)


def work_echo_finite_t(cfg, first, second, tau, prep_time, moments=None):
    """:func:`work_echo` with a finite preparation time."""
    if prep_time is None:
        raise DomainError("prep_time must be a finite non-negative time")
    return work_echo(cfg, first, second, tau, prep_time, moments)
