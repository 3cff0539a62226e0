"""Instantaneous spin pulses and their Heisenberg-picture coefficients.

A pulse is a 2x2 unitary ``U`` acting on the spin.  In the Heisenberg picture
it maps each of ``sigma_+ = sigma_x + i sigma_y``, ``sigma_-`` and
``sigma_z`` to a linear combination of the same three operators::

    U^dag sigma_a U = sum_b c[a, b] sigma_b,      a, b in (+, -, z)

The work formulas only need a handful of these coefficients.  The basis order
used for the 3x3 coefficient array is ``("+", "-", "z")``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import NotUnitary, ParseError

__all__ = [
    "BASIS", "Pulse", "PulseCoefficients", "identity", "rotation", "from_euler",
    "pi_pulse", "coefficients", "compose", "parse_pulse",
]

BASIS = ("+", "-", "z")
_INDEX = {b: i for i, b in enumerate(BASIS)}

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULI = {"x": _SX, "y": _SY, "z": _SZ}
_OPS = (_SX + 1j * _SY, _SX - 1j * _SY, _SZ)

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Pulse:
    """A spin unitary.  ``matrix`` acts on states, ``|psi> -> U |psi>``."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        u = np.array(self.matrix, dtype=complex)
        if u.shape != (2, 2) or not np.all(np.isfinite(u)):
            raise NotUnitary("pulse must be a finite 2x2 matrix")
        err = np.abs(u.conj().T @ u - np.eye(2)).max()
        if err > UNITARY_TOL:
            raise NotUnitary(f"pulse is not unitary (deviation {err:.3g})")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    def __repr__(self):
        return f"Pulse({self.label or self.matrix.tolist()})"

    def euler_angles(self):
        """Angles ``(phi, psi, theta)`` such that ``from_euler`` rebuilds the pulse.

        The global phase of ``U`` is discarded; it has no physical effect.
        """
        u = self.matrix / np.sqrt(np.linalg.det(self.matrix))
        a, b = u.conj().T[0, 0], u.conj().T[1, 0]
        theta = float(np.arctan2(abs(b), abs(a)))
        phi = float(-np.angle(a)) if abs(a) > 1e-15 else 0.0
        psi = float(np.angle(b)) if abs(b) > 1e-15 else 0.0
        return phi, psi, theta


@dataclass(frozen=True, eq=False)
class PulseCoefficients:
    """The 3x3 array ``c[a, b]``, indexable by basis labels, e.g. ``c["+", "z"]``."""

    array: np.ndarray

    def __getitem__(self, key):
        a, b = key
        return complex(self.array[_INDEX[a], _INDEX[b]])

    @property
    def zz(self) -> float:
        return self["z", "z"].real

    def __matmul__(self, other):
        return PulseCoefficients(self.array @ other.array)


def identity() -> Pulse:
    return Pulse(np.eye(2), "identity")


def rotation(angle: float, axis: str) -> Pulse:
    """Rotation ``exp(-i angle sigma_axis / 2)`` about ``axis`` in ``{x, y, z}``."""
    try:
        s = _PAULI[axis]
    except KeyError:
        raise ParseError(f"unknown rotation axis {axis!r}") from None
    u = np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * s
    return Pulse(u, f"rot:{np.degrees(angle):g}:{axis}")


def from_euler(phi: float, psi: float, theta: float) -> Pulse:
    """Pulse from the three-angle parametrisation.

    ``U^dag = [[e^{-i phi} cos theta, -e^{-i psi} sin theta],
               [e^{i psi} sin theta,   e^{i phi} cos theta]]``
    """
    c, s = np.cos(theta), np.sin(theta)
    udag = np.array([
        [np.exp(-1j * phi) * c, -np.exp(-1j * psi) * s],
        [np.exp(1j * psi) * s, np.exp(1j * phi) * c],
    ])
    deg = np.degrees([phi, psi, theta])
    return Pulse(udag.conj().T, "euler:{:.17g}:{:.17g}:{:.17g}".format(*deg))


def pi_pulse() -> Pulse:
    """The echo pulse ``-i sigma_x``, which swaps ``sigma_+`` and ``sigma_-``."""
    return Pulse(-1j * _SX, "pi")


def coefficients(pulse: Pulse) -> PulseCoefficients:
    """Heisenberg coefficients of ``pulse``.

    For ``M = U^dag sigma_a U`` the expansion reads ``M = c_z sigma_z +
    c_+ sigma_+ + c_- sigma_-`` with ``c_z = M[0,0]``, ``c_+ = M[0,1] / 2``
    and ``c_- = M[1,0] / 2``.
    """
    u = pulse.matrix
    c = np.empty((3, 3), dtype=complex)
    for i, op in enumerate(_OPS):
        m = u.conj().T @ op @ u
        c[i] = (m[0, 1] / 2, m[1, 0] / 2, m[0, 0])
    return PulseCoefficients(c)


def compose(first: Pulse, second: Pulse) -> Pulse:
    """The single pulse equivalent to ``first`` followed immediately by ``second``."""
    label = f"{first.label}+{second.label}" if first.label and second.label else ""
    return Pulse(second.matrix @ first.matrix, label)


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_ROT = re.compile(rf"rot:({_NUM}):([xyz])")
_EULER = re.compile(rf"euler:({_NUM}):({_NUM}):({_NUM})")


def parse_pulse(text: str) -> Pulse:
    """Parse ``rot:<deg>:<axis>``, ``euler:<phi>:<psi>:<theta>`` (degrees), ``pi`` or ``id``.

    Several pulses joined by ``+`` are composed left to right.
    """
    text = text.strip().lower()
    if "+" in text.replace("e+", "e"):
        parts = [p for p in re.split(r"(?<![eE])\+", text)]
        if len(parts) > 1:
            out = parse_pulse(parts[0])
            for p in parts[1:]:
                out = compose(out, parse_pulse(p))
            return out
    if text == "pi":
        return pi_pulse()
    if text in ("id", "identity"):
        return identity()
    m = _ROT.fullmatch(text)
    if m:
        p = rotation(np.radians(float(m.group(1))), m.group(2))
        return Pulse(p.matrix, text)
    m = _EULER.fullmatch(text)
    if m:
        phi, psi, theta = (np.radians(float(g)) for g in m.groups())
        return Pulse(from_euler(phi, psi, theta).matrix, text)
    raise ParseError(f"cannot parse pulse {text!r}")
