"""Bath correlation kernels for a spin coupled diagonally to harmonic modes.

Every observable of the pulse sequences depends on the bath only through five
functions of time:

``K(t)``
    symmetrised noise correlator ``sum g^2 coth(w/2T) cos(wt)``;
``xi(t)``
    decoherence exponent, the double time integral of ``K``;
``xi_dot(t)``
    its first derivative;
``G(t)``
    spin-bath response ``sum g^2/w (1 - cos wt)``;
``F(t)``
    phase kernel ``sum g^2/w (t - sin(wt)/w)``.

Two spectral densities are supported.  :class:`Ohmic` is the continuum
``J(w) = gamma w exp(-w/Gamma)``, with closed forms in terms of the complex
log-gamma family.  :class:`Discrete` is a finite list of modes, where the sums
are evaluated directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, InvalidInput, UnsupportedSpectrum
from .special import digamma, loggamma, trigamma

__all__ = [
    "Ohmic", "Discrete", "KernelSet", "DecayRegimeReport",
    "noise_kernel", "decoherence", "decoherence_rate", "spin_bath_kernel",
    "phase_kernel", "g_infinity", "chi_two", "chi_three", "g_two", "g_three",
    "g2_chi2", "g3_chi3",
    "decay_regimes", "discretize_ohmic",
]


@dataclass(frozen=True)
class Ohmic:
    """Ohmic spectral density ``gamma * w * exp(-w / cutoff)``."""

    coupling: float
    cutoff: float

    def __post_init__(self):
        if not self.coupling >= 0:
            raise InvalidInput(f"coupling must be >= 0, got {self.coupling}")
        if not self.cutoff > 0:
            raise InvalidInput(f"cutoff must be > 0, got {self.cutoff}")


@dataclass(frozen=True)
class Discrete:
    """A finite set of bath modes with couplings ``g_k`` and frequencies ``w_k``."""

    couplings: tuple
    frequencies: tuple

    def __post_init__(self):
        g = np.asarray(self.couplings, dtype=float).ravel()
        w = np.asarray(self.frequencies, dtype=float).ravel()
        if g.shape != w.shape or g.size == 0:
            raise InvalidInput("couplings and frequencies must be non-empty and equally long")
        if not np.all(w > 0):
            raise InvalidInput("mode frequencies must be positive")
        if not np.all(np.isfinite(g)):
            raise InvalidInput("couplings must be finite")
        object.__setattr__(self, "couplings", tuple(g.tolist()))
        object.__setattr__(self, "frequencies", tuple(w.tolist()))

    @property
    def g(self):
        return np.asarray(self.couplings)

    @property
    def w(self):
        return np.asarray(self.frequencies)


@dataclass(frozen=True)
class KernelSet:
    """A spectral density together with the bath temperature."""

    spectral: Ohmic | Discrete
    temperature: float

    def __post_init__(self):
        if not self.temperature >= 0 or not math.isfinite(self.temperature):
            raise InvalidInput(f"temperature must be finite and >= 0, got {self.temperature}")
        if not isinstance(self.spectral, (Ohmic, Discrete)):
            raise UnsupportedSpectrum(f"unknown spectral density {self.spectral!r}")

    @property
    def ohmic(self):
        return isinstance(self.spectral, Ohmic)


def _t(t):
    return np.asarray(t, dtype=float)


def _nonneg(t):
    t = _t(t)
    if np.any(t < 0) or np.any(np.isnan(t)):
        raise DomainError("kernel times must be >= 0")
    return t


def _out(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def _coth_half(w, T):
    if T == 0:
        return np.ones_like(w)
    return 1 / np.tanh(w / (2 * T))


def _modes(ks, t):
    s = ks.spectral
    return s.g, s.w, _t(t)[..., None]


def noise_kernel(ks: KernelSet, t):
    """``K(t)``: symmetrised correlator of the collective bath coordinate."""
    s, T = ks.spectral, ks.temperature
    if ks.ohmic:
        t = _t(t)
        gam, Gc = s.coupling, s.cutoff
        u = (Gc * t) ** 2
        out = gam * Gc**2 * (1 - u) / (1 + u) ** 2
        if T > 0:
            z = 1 + T / Gc + 1j * T * t
            out = out + 2 * gam * T**2 * trigamma(z).real
        return _out(out)
    g, w, t = _modes(ks, t)
    return _out(np.sum(g**2 * _coth_half(w, T) * np.cos(w * t), axis=-1))


def decoherence(ks: KernelSet, t):
    """``xi(t)``: log of the coherence decay factor, ``xi(0) = 0``."""
    s, T = ks.spectral, ks.temperature
    if ks.ohmic:
        t = _nonneg(t)
        gam, Gc = s.coupling, s.cutoff
        out = 0.5 * gam * np.log1p((Gc * t) ** 2)
        if T > 0:
            k = T / Gc
            z = 1 + k + 1j * T * t
            out = out + 2 * gam * (loggamma(1 + k).real - loggamma(z).real)
        return _out(out)
    g, w, t = _modes(ks, _nonneg(t))
    return _out(np.sum(g**2 * _coth_half(w, T) * (1 - np.cos(w * t)) / w**2, axis=-1))


def decoherence_rate(ks: KernelSet, t):
    """``d xi / dt``."""
    s, T = ks.spectral, ks.temperature
    if ks.ohmic:
        t = _nonneg(t)
        gam, Gc = s.coupling, s.cutoff
        out = gam * Gc**2 * t / (1 + (Gc * t) ** 2)
        if T > 0:
            z = 1 + T / Gc + 1j * T * t
            out = out + 2 * gam * T * digamma(z).imag
        return _out(out)
    g, w, t = _modes(ks, _nonneg(t))
    return _out(np.sum(g**2 * _coth_half(w, T) * np.sin(w * t) / w, axis=-1))


def spin_bath_kernel(ks: KernelSet, t):
    """``G(t)``, the temperature independent spin-bath response."""
    s = ks.spectral
    if ks.ohmic:
        t = _nonneg(t)
        u = (s.cutoff * t) ** 2
        return _out(s.coupling * s.cutoff * u / (1 + u))
    g, w, t = _modes(ks, _nonneg(t))
    return _out(np.sum(g**2 / w * (1 - np.cos(w * t)), axis=-1))


def phase_kernel(ks: KernelSet, t):
    """``F(t)``, the commutator phase of the bath displacement."""
    s = ks.spectral
    if ks.ohmic:
        t = _nonneg(t)
        x = s.cutoff * t
        return _out(s.coupling * (x - np.arctan(x)))
    g, w, t = _modes(ks, _nonneg(t))
    return _out(np.sum(g**2 / w * (t - np.sin(w * t) / w), axis=-1))


def g_infinity(ks: KernelSet) -> float:
    """Long time limit of ``G``; equals ``gamma * Gamma`` for the ohmic bath."""
    s = ks.spectral
    if ks.ohmic:
        return s.coupling * s.cutoff
    return float(np.sum(s.g**2 / s.w))


def _oscillating_part(ks, t):
    """``F`` minus its linear growth, i.e. the part that stays bounded."""
    s = ks.spectral
    if ks.ohmic:
        return s.coupling * np.arctan(s.cutoff * _t(t))
    g, w, t = _modes(ks, t)
    return np.sum(g**2 / w**2 * np.sin(w * t), axis=-1)


def chi_two(ks: KernelSet, tau, t=None):
    """Phase ``F(t) + F(tau) - F(t + tau)`` picked up between two pulses.

    ``t`` is the time between preparation and the first pulse.  ``None``
    drops every term that depends on ``t``.  That is the exact result for a
    spin and bath starting in their correlated equilibrium, and the long
    preparation limit for a continuum.  For the ohmic bath it gives
    ``-gamma * arctan(Gamma * tau)``.
    """
    tau = _nonneg(tau)
    if t is None:
        return _out(-_oscillating_part(ks, tau))
    _nonneg(t)
    s = _oscillating_part
    return _out(s(ks, t + tau) - s(ks, t) - s(ks, tau))


def chi_three(ks: KernelSet, tau, t=None):
    """Phase ``2F(tau) - F(2tau) - 2F(t+tau) + F(t) + F(t+2tau)`` of the echo."""
    tau = _nonneg(tau)
    s = _oscillating_part
    out = s(ks, 2 * tau) - 2 * s(ks, tau)
    if t is not None:
        _nonneg(t)
        out = out + 2 * s(ks, t + tau) - s(ks, t) - s(ks, t + 2 * tau)
    return _out(out)


def g_two(ks: KernelSet, tau, t=None):
    """``G(t + tau) - G(tau)``; ``G_inf - G(tau)`` when ``t`` is None."""
    ref = g_infinity(ks) if t is None else spin_bath_kernel(ks, _t(t) + tau)
    return _out(ref - spin_bath_kernel(ks, tau))


def g_three(ks: KernelSet, tau, t=None):
    """``G(t + 2 tau) - G(2 tau)``."""
    tau = _t(tau)
    ref = g_infinity(ks) if t is None else spin_bath_kernel(ks, _t(t) + 2 * tau)
    return _out(ref - spin_bath_kernel(ks, 2 * tau))


def g2_chi2(ks: KernelSet, tau, t=None):
    """``(g_2, chi_2)`` for the two-pulse sequence."""
    return g_two(ks, tau, t), chi_two(ks, tau, t)


def g3_chi3(ks: KernelSet, tau, t=None):
    """``(g_3, chi_3)`` for the echo sequence."""
    return g_three(ks, tau, t), chi_three(ks, tau, t)


@dataclass(frozen=True)
class DecayRegimeReport:
    """Qualitative decay of ``exp(-xi)`` for an ohmic bath.

    ``regime`` names the short time behaviour: ``"power-law"`` when
    ``T < Gamma`` and ``"gaussian"`` otherwise.  ``t2`` is the time constant
    of the exponential tail that takes over once ``t`` exceeds both ``1/T``
    and ``1/Gamma``; ``gaussian_time`` is the width of the short time
    Gaussian (only meaningful in the high temperature regime).
    """

    regime: str
    t2: float
    gaussian_time: float
    tail_rate: float
    capped: bool


def decay_regimes(ks: KernelSet) -> DecayRegimeReport:
    if not ks.ohmic:
        raise UnsupportedSpectrum("decay regimes are only classified for the ohmic bath")
    gam, Gc = ks.spectral.coupling, ks.spectral.cutoff
    T = ks.temperature
    # Slope of xi at late times is 2 gamma T arctan(Gamma t) -> pi gamma T.
    rate = math.pi * gam * T
    capped = rate == 0
    t2 = math.inf if capped else 1 / rate
    regime = "gaussian" if T >= Gc else "power-law"
    k0 = gam * Gc**2 + 2 * gam * T**2 * float(trigamma(1 + T / Gc).real) if T > 0 else gam * Gc**2
    gauss = math.inf if k0 == 0 else math.sqrt(2 / k0)
    return DecayRegimeReport(regime, t2, gauss, rate, capped)


def discretize_ohmic(spectral: Ohmic, n: int) -> Discrete:
    """Gauss-Laguerre discretisation of the ohmic density into ``n`` modes.

    Any kernel of the form ``int J(w) f(w) dw`` becomes a weighted sum over
    the Laguerre nodes, which is exactly the discrete-mode formula with
    ``w_k = Gamma x_k`` and ``g_k^2 = gamma Gamma^2 x_k W_k``.
    """
    # Golub-Welsch: scipy's roots_laguerre overflows for a few hundred nodes.
    k = np.arange(n, dtype=float)
    x, vec = eigh_tridiagonal(2 * k + 1, k[1:])
    wts = vec[0] ** 2
    keep = wts > 0
    x, wts = x[keep], wts[keep]
    g = np.sqrt(spectral.coupling * spectral.cutoff**2 * x * wts)
    return Discrete(tuple(g), tuple(spectral.cutoff * x))
