"""Second-law bookkeeping for the spin/bath engine.

The spin (temperature ``T_S``) and the bath (temperature ``T``) act as the
two reservoirs.  Whichever is hotter supplies the heat, and extracted work
is compared with it.  Two inequalities must hold for any pulse sequence
started from the correlated equilibrium:

    W >= (1 - T / T_S) dH_S
    W >= (1 - T_S / T) (dH_I + dH_B)

Their slacks are reported, together with the efficiency and the Carnot bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTemperatures, InvalidInput, RestrictionViolated

__all__ = ["EfficiencyReport", "RestrictionReport", "efficiency", "check_restrictions",
           "assert_restrictions", "carnot", "same_temperature"]

REL_EQUAL = 1e-9
TOL = 1e-12


def same_temperature(T, T_S):
    """True if the two temperatures agree to within ``1e-9`` relative."""
    if math.isinf(T_S) or math.isinf(T):
        return T == T_S
    return abs(T - T_S) <= REL_EQUAL * max(abs(T), abs(T_S))


def _validate(T, T_S):
    if not T >= 0 or math.isinf(T):
        raise InvalidInput("bath temperature must be finite and >= 0")
    if not T_S >= 0:
        raise InvalidInput("efficiency needs a non-negative spin temperature")


def carnot(T, T_S):
    """``1 - T_cold / T_hot`` (zero for equal temperatures)."""
    _validate(T, T_S)
    if same_temperature(T, T_S):
        return 0.0
    lo, hi = min(T, T_S), max(T, T_S)
    return 1.0 if math.isinf(hi) or lo == 0 else 1.0 - lo / hi


@dataclass(frozen=True, eq=False)
class EfficiencyReport:
    """Efficiency of one run (or of every point of a sweep).

    ``regime`` is ``"spin hotter"`` when ``T_S > T`` (heat comes from the
    spin, ``eta = |W| / |dH_S|``), ``"bath hotter"`` when ``T_S < T``
    (``eta = |W| / (|W| + |dH_S|)``) or ``"equal"``.  ``eta`` is zero
    wherever no work is extracted.  The two slacks are those of
    :func:`check_restrictions`.
    """

    eta: np.ndarray
    carnot: float
    regime: str
    extracted: np.ndarray
    slack_spin: np.ndarray
    slack_bath: np.ndarray


def _sq(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def efficiency(b, T, T_S) -> EfficiencyReport:
    _validate(T, T_S)
    W = np.asarray(b.total, dtype=float)
    dS = np.asarray(b.spin, dtype=float)
    extracted = W < 0
    bound = carnot(T, T_S)
    rep = check_restrictions(b, T, T_S)
    if same_temperature(T, T_S):
        if np.any(W < -TOL):
            raise DegenerateTemperatures(
                f"work {W.min():.3g} extracted although T = T_S = {T:g}")
        return EfficiencyReport(_sq(np.zeros_like(W)), 0.0, "equal",
                                _sq(np.zeros_like(extracted)), rep.slack_spin, rep.slack_bath)
    regime = "spin hotter" if T_S > T else "bath hotter"
    with np.errstate(divide="ignore", invalid="ignore"):
        if T_S > T:
            eta = np.abs(W) / np.abs(dS)
        else:
            eta = np.abs(W) / (np.abs(W) + np.abs(dS))
    eta = np.where(extracted, np.nan_to_num(eta, nan=0.0), 0.0)
    return EfficiencyReport(_sq(eta), bound, regime, _sq(extracted),
                            rep.slack_spin, rep.slack_bath)


@dataclass(frozen=True, eq=False)
class RestrictionReport:
    slack_spin: np.ndarray
    slack_bath: np.ndarray

    def ok(self, tol=TOL):
        return bool(np.all(self.slack_spin >= -tol) and np.all(self.slack_bath >= -tol))


def _scaled(coef, x):
    """``coef * x`` with ``inf * 0`` taken as zero."""
    with np.errstate(invalid="ignore"):
        out = coef * x
    return np.where(x == 0, 0.0, out)


def check_restrictions(b, T, T_S) -> RestrictionReport:
    """Slacks of both inequalities; non-negative means satisfied."""
    W = np.asarray(b.total, dtype=float)
    dS = np.asarray(b.spin, dtype=float)
    dB = np.asarray(b.bath_int, dtype=float)
    with np.errstate(divide="ignore"):
        a_spin = 1.0 - (T / T_S if T_S != 0 else (0.0 if T == 0 else math.inf))
        a_bath = 1.0 - (T_S / T if T != 0 else (0.0 if T_S == 0 else math.inf))
    if math.isinf(T_S):
        a_bath = -math.inf
    s1 = W - _scaled(a_spin, dS)
    s2 = W - _scaled(a_bath, dB)
    return RestrictionReport(_sq(s1), _sq(s2))


def assert_restrictions(b, T, T_S, tol=TOL, eta=None):
    """Raise :class:`RestrictionViolated` if a slack or the Carnot bound fails."""
    rep = check_restrictions(b, T, T_S)
    if not rep.ok(tol):
        i = int(np.argmin(np.minimum(np.atleast_1d(rep.slack_spin), np.atleast_1d(rep.slack_bath))))
        tau = np.atleast_1d(b.tau)[i] if np.size(b.tau) > 1 else b.tau
        raise RestrictionViolated(
            f"second-law slack negative at tau={float(tau):.6g}: "
            f"spin {np.min(rep.slack_spin):.3g}, bath {np.min(rep.slack_bath):.3g}")
    if eta is None:
        eta = efficiency(b, T, T_S)
    if np.any(np.asarray(eta.eta) > eta.carnot + tol):
        raise RestrictionViolated(
            f"efficiency {np.max(eta.eta):.6g} exceeds Carnot bound {eta.carnot:.6g}")
    return rep
