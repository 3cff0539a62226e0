"""Complex log-gamma, digamma and trigamma.

The ohmic bath kernels need these functions on the line ``1 + T/Gamma + i T t``,
where the imaginary part can reach 1e4 or more.  Everything here is vectorised
over numpy arrays and follows the same three steps:

1. Arguments in the lower half plane are conjugated, evaluated, and conjugated
   back.  This makes ``f(conj z) == conj f(z)`` hold exactly.
2. Arguments with ``Re z < 0`` are sent through the reflection formula.  The
   sine factor is written in a form that stays finite for large ``Im z``.
3. The remaining arguments are pushed to ``Re z >= 12`` by the recurrence and
   then evaluated with the Stirling-type asymptotic series.
"""
from __future__ import annotations

import numpy as np
from scipy.special import zeta

from .errors import PoleError

__all__ = ["loggamma", "digamma", "trigamma"]

# B_2, B_4, ..., B_20
_BERNOULLI = np.array([
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330,
])
_K = 2 * np.arange(1, _BERNOULLI.size + 1)
_LOGGAMMA_COEF = _BERNOULLI / (_K * (_K - 1))
_SHIFT = 12.0
_HALF_LOG_2PI = 0.5 * np.log(2 * np.pi)

# log Gamma(1 + u) = -gamma u + sum_k (-1)^k zeta(k) u^k / k, used near the
# zeros at z = 1 and z = 2 where the recurrence would cancel catastrophically.
_NEAR = 0.25
_ORDERS = np.arange(2, 38)
_TAYLOR = np.concatenate([[0.0, -np.euler_gamma], (-1.0) ** _ORDERS * zeta(_ORDERS) / _ORDERS])


def _as_complex(z):
    z = np.asarray(z, dtype=complex)
    re, im = z.real, z.imag
    poles = (im == 0) & (re <= 0) & (re == np.round(re))
    if np.any(poles):
        bad = z[poles].ravel()[0].real
        raise PoleError(f"pole at z = {bad:g}")
    return z


def _horner(coef, u):
    acc = np.zeros_like(u)
    for c in coef[::-1]:
        acc = acc * u + c
    return acc


def _log1p(u):
    """Complex ``log(1 + u)`` accurate for small ``u`` (numpy's is not)."""
    re = 0.5 * np.log1p(2 * u.real + (u.real**2 + u.imag**2))
    return re + 1j * np.arctan2(u.imag, 1 + u.real)


def _shift_count(x):
    return np.maximum(0, np.ceil(_SHIFT - x.real)).astype(int)


def _loggamma_right(x):
    """Principal log-gamma for ``Re x >= 0`` (not at the origin)."""
    n = _shift_count(x)
    acc = np.zeros_like(x)
    for k in range(int(n.max(initial=0))):
        m = n > k
        acc[m] += np.log(x[m] + k)
    y = x + n
    inv = 1 / y
    series = inv * _horner(_LOGGAMMA_COEF, inv * inv)
    out = (y - 0.5) * np.log(y) - y + _HALF_LOG_2PI + series - acc
    for centre in (1.0, 2.0):
        m = np.abs(x - centre) < _NEAR
        if np.any(m):
            u = x[m] - centre
            out[m] = _horner(_TAYLOR, x[m] - 1.0) if centre == 1.0 else \
                _horner(_TAYLOR, u) + _log1p(u)
    return out


def _digamma_right(x):
    n = _shift_count(x)
    acc = np.zeros_like(x)
    for k in range(int(n.max(initial=0))):
        m = n > k
        acc[m] += 1 / (x[m] + k)
    y = x + n
    u = 1 / (y * y)
    series = u * _horner(_BERNOULLI / _K, u)
    return np.log(y) - 0.5 / y - series - acc


def _trigamma_right(x):
    n = _shift_count(x)
    acc = np.zeros_like(x)
    for k in range(int(n.max(initial=0))):
        m = n > k
        acc[m] += 1 / (x[m] + k) ** 2
    y = x + n
    inv = 1 / y
    u = inv * inv
    series = inv * u * _horner(_BERNOULLI, u)
    return inv + 0.5 * u + series + acc


def _upper(z):
    """Fold into the closed upper half plane; return the mask of flipped entries."""
    flip = z.imag < 0
    return np.where(flip, np.conj(z), z), flip


def _finish(out, flip, scalar):
    out = np.where(flip, np.conj(out), out)
    return out[0] if scalar else out


def loggamma(z):
    """Principal branch of ``log Gamma(z)``.

    Continuous off the negative real axis and satisfying
    ``loggamma(z + 1) == loggamma(z) + log(z)``, like ``scipy.special.loggamma``.
    Raises :class:`PoleError` at ``z = 0, -1, -2, ...``.
    """
    z = _as_complex(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    zu, flip = _upper(z)
    out = np.empty_like(zu)
    refl = zu.real < 0
    right = ~refl
    out[right] = _loggamma_right(zu[right])
    if np.any(refl):
        w = zu[refl]
        e = np.exp(2j * np.pi * w)
        log_sin = np.log(0.5) + 0.5j * np.pi - 1j * np.pi * w + np.log1p(-e)
        out[refl] = np.log(np.pi) - log_sin - _loggamma_right(1 - w)
    return _finish(out, flip, scalar)


def digamma(z):
    """Digamma function ``psi(z) = d/dz log Gamma(z)``."""
    z = _as_complex(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    zu, flip = _upper(z)
    out = np.empty_like(zu)
    refl = zu.real < 0
    out[~refl] = _digamma_right(zu[~refl])
    if np.any(refl):
        w = zu[refl]
        e = np.exp(2j * np.pi * w)
        cot = -1j * (1 + e) / (1 - e)
        out[refl] = _digamma_right(1 - w) - np.pi * cot
    return _finish(out, flip, scalar)


def trigamma(z):
    """Trigamma function ``psi'(z)``."""
    z = _as_complex(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    zu, flip = _upper(z)
    out = np.empty_like(zu)
    refl = zu.real < 0
    out[~refl] = _trigamma_right(zu[~refl])
    if np.any(refl):
        w = zu[refl]
        e = np.exp(2j * np.pi * w)
        inv_sin2 = -4 * e / (1 - e) ** 2
        out[refl] = np.pi ** 2 * inv_sin2 - _trigamma_right(1 - w)
    return _finish(out, flip, scalar)
