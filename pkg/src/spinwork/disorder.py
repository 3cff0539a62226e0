"""Averages over an inhomogeneously broadened spin ensemble.

Spin gaps are Gaussian, ``Omega ~ N(Omega_0, d)``, and every spin starts at
the common spin temperature ``T_S``.  Averages are computed with
Gauss-Hermite quadrature, doubling the node count until the result stops
changing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import roots_hermite

from .errors import InvalidInput, QuadratureNotConverged
from .kernels import KernelSet
from .pulses import Pulse, coefficients
from .work import EnsembleMoments, WorkBreakdown, _breakdown, _check_tau, polarization, two_pulse_parts

__all__ = ["DisorderModel", "t2_star", "gauss_average", "ensemble_moments",
           "averaged_two_pulse_work"]

RTOL = 1e-10
START_NODES = 64
MAX_NODES = 16384


@dataclass(frozen=True)
class DisorderModel:
    mean_gap: float
    variance: float
    spin_temperature: float

    def __post_init__(self):
        if not self.variance >= 0 or math.isinf(self.variance):
            raise InvalidInput("disorder variance must be finite and >= 0")
        if not self.spin_temperature >= 0:
            raise InvalidInput("spin temperature must be >= 0")


def t2_star(dm: DisorderModel) -> float:
    """Free-induction decay time ``1 / sqrt(d)``; infinite without disorder."""
    return math.inf if dm.variance == 0 else 1 / math.sqrt(dm.variance)


@lru_cache(maxsize=None)
def _nodes(n):
    x, w = roots_hermite(n)
    return x, w / math.sqrt(math.pi)


def gauss_average(f, dm: DisorderModel, rtol=RTOL, max_nodes=MAX_NODES, atol=0.0):
    """Average of ``f(Omega)`` over the gap distribution.

    ``f`` receives a column vector of gaps (shape ``(n, 1)``) and may return
    any array broadcasting against it; the average is taken over axis 0.
    Two successive node counts must agree to ``rtol`` relative to the
    largest result, or to ``atol``.  Integrands with sharp features (a cold
    ensemble much broader than ``T_S``) defeat Gauss-Hermite; if
    ``max_nodes`` is not enough, adaptive quadrature over ``+-12`` standard
    deviations takes over.  Raises :class:`QuadratureNotConverged` if that
    fails too.
    """
    if dm.variance == 0:
        return np.asarray(f(np.array([[dm.mean_gap]])))[0]
    scale = math.sqrt(2 * dm.variance)
    prev = None
    n = START_NODES
    while n <= max_nodes:
        x, w = _nodes(n)
        vals = np.asarray(f(dm.mean_gap + scale * x[:, None]))
        avg = np.tensordot(w, vals, axes=(0, 0))
        if prev is not None:
            size = max(np.max(np.abs(avg)), np.finfo(float).tiny)
            if np.max(np.abs(avg - prev)) <= max(rtol * size, atol):
                return avg
        prev = avg
        n *= 2
    return _adaptive_average(f, dm, rtol, atol, prev)


def _adaptive_average(f, dm, rtol, atol, guess):
    sd = math.sqrt(dm.variance)
    norm = 1 / math.sqrt(2 * math.pi * dm.variance)

    def g(x):
        dens = norm * math.exp(-0.5 * ((x - dm.mean_gap) / sd) ** 2)
        return dens * np.asarray(f(np.array([[x]])))[0]

    size = max(np.max(np.abs(guess)), np.finfo(float).tiny)
    lo, hi = dm.mean_gap - 12 * sd, dm.mean_gap + 12 * sd
    val, err, info = quad_vec(g, lo, hi, epsabs=max(atol, 0.1 * rtol * size), epsrel=rtol,
                              limit=20000, full_output=True)
    if not info.success:
        raise QuadratureNotConverged(f"no convergence to {rtol:g}: {info.message}")
    return val


def ensemble_moments(dm: DisorderModel) -> EnsembleMoments:
    """``E = <(Omega/2) sz0(Omega)>``, ``m = <sz0(Omega)>`` and the mean gap."""
    def f(om):
        sz = polarization(om, dm.spin_temperature)
        return np.concatenate([0.5 * om * sz, sz], axis=1)

    E, m = gauss_average(f, dm)
    return EnsembleMoments(float(E), float(m), dm.mean_gap)


def averaged_two_pulse_work(dm: DisorderModel, kernels: KernelSet, first: Pulse,
                            second: Pulse, tau, prep_time=None, chunk=256) -> WorkBreakdown:
    """Two-pulse work averaged over the ensemble.

    Unlike the echo, the precession phase ``exp(i Omega tau)`` is not
    refocused, so the coherent part of the work decays on the scale
    ``t2_star``.

    Plain Gauss-Hermite nodes alias badly on that phase once ``tau sqrt(d)``
    exceeds a few units.  The coherent part is therefore averaged on the
    shifted line ``Omega + i s``, which turns the phase into decay:

        <exp(i Omega tau) Q(Omega)>
            = exp(-tau s + s^2 / 2d + i s Omega_0 / d) <exp(i (tau - s/d) Omega) Q(Omega + i s)>.

    With ``s = d tau`` the remaining phase vanishes.  ``Q`` contains
    ``tanh(Omega / 2 T_S)``, whose first pole sits at ``i pi T_S``.  Keeping
    the contour well clear of it, ``s`` is capped at ``pi T_S / 2``; beyond
    that the prefactor is already smaller than ``exp(-s tau / 2)``.  At ``T_S = 0`` no shift is possible and
    the real-line average may raise :class:`QuadratureNotConverged`.
    """
    tau = _check_tau(tau)
    flat = np.atleast_1d(tau).ravel()
    c1, c2 = coefficients(first), coefficients(second)
    T_S = dm.spin_temperature
    d = dm.variance

    def smooth(om):
        sz = polarization(om, T_S)
        w1, w2, _, ds, _ = two_pulse_parts(kernels, om, sz, c1, c2, flat, prep_time)
        return np.stack(np.broadcast_arrays(w1, w2, ds), axis=1)

    out = gauss_average(smooth, dm)
    res = [out[0].copy(), out[1].copy(), out[2].copy()]
    # Coherent terms only need to be resolved against the smooth ones.
    atol = RTOL * max(np.max(np.abs(out)), np.finfo(float).tiny)

    if T_S == 0 or d == 0:
        cap = 0.0
    else:
        cap = 0.5 * math.pi * T_S
    for i in range(0, flat.size, chunk):
        blk = flat[i:i + chunk]
        shift = np.minimum(d * blk, cap)
        with np.errstate(under="ignore"):
            pref = np.exp(-blk * shift + (shift**2 / (2 * d) if d else 0.0)
                          + 1j * shift * (dm.mean_gap / d if d else 0.0))
            rate = blk - (shift / d if d else 0.0)

        def coherent(om, blk=blk, shift=shift, pref=pref, rate=rate):
            z = om + 1j * shift
            if T_S == 0:
                sz = polarization(om, 0.0) * np.ones_like(z)
            else:
                sz = -np.tanh(z / (2 * T_S)) if math.isfinite(T_S) else np.zeros_like(z)
            _, _, w2c, _, dsc = two_pulse_parts(kernels, z, sz, c1, c2, blk, prep_time)
            with np.errstate(under="ignore"):
                rot = pref * np.exp(1j * rate * om)
            return np.stack([rot * w2c, rot * dsc], axis=1)

        avg = gauss_average(coherent, dm, atol=atol)
        res[1][i:i + chunk] += avg[0].real
        res[2][i:i + chunk] += avg[1].real
    w1, w2, ds = (r.reshape(tau.shape) for r in res)
    return _breakdown(kernels, tau, (w1, w2), ds)
