import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinwork import (NotUnitary, ParseError, Pulse, coefficients, compose, from_euler, identity,
                      parse_pulse, pi_pulse, rotation)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0 + 0j, -1.0])
SP, SM = SX + 1j * SY, SX - 1j * SY
OPS = {"+": SP, "-": SM, "z": SZ}
angle = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def conj_by(p, op):
    return p.matrix.conj().T @ op @ p.matrix


def expand(c, a):
    return sum(c[a, b] * OPS[b] for b in "+-z")


def test_quarter_turn_about_y():
    c = coefficients(rotation(math.pi / 2, "y"))
    assert c["+", "z"] == pytest.approx(1)
    assert c.zz == pytest.approx(0, abs=1e-15)


def test_quarter_turn_about_x():
    c = coefficients(rotation(math.pi / 2, "x"))
    assert c["z", "+"] == pytest.approx(1 / 2j)
    assert c.zz == pytest.approx(0, abs=1e-15)


def test_negative_quarter_turn_about_x():
    assert coefficients(rotation(-math.pi / 2, "x"))["+", "z"] == pytest.approx(1j)


def test_identity_coefficients():
    assert np.allclose(coefficients(identity()).array, np.eye(3))
    assert np.allclose(coefficients(rotation(0.0, "x")).array, np.eye(3))


def test_rotation_about_x_turns_sz_towards_sy():
    phi = 0.3
    got = conj_by(rotation(phi, "x"), SZ)
    assert np.allclose(got, SZ * math.cos(phi) + SY * math.sin(phi), atol=1e-15)


def test_pi_pulse_flips_sz_and_keeps_sx():
    p = pi_pulse()
    assert np.allclose(conj_by(p, SZ), -SZ)
    assert np.allclose(conj_by(p, SX), SX)
    c = coefficients(p)
    assert c.zz == -1 and c["z", "+"] == 0 and c["z", "-"] == 0
    assert np.allclose(coefficients(compose(p, p)).array, np.eye(3))


def test_compose_with_identity():
    p = from_euler(0.3, -1.1, 0.8)
    assert np.allclose(compose(p, identity()).matrix, p.matrix)
    assert np.allclose(compose(identity(), p).matrix, p.matrix)


def test_non_unitary_rejected():
    with pytest.raises(NotUnitary):
        Pulse(np.array([[1, 0], [0, 2]]))
    with pytest.raises(NotUnitary):
        Pulse(np.eye(3))
    with pytest.raises(NotUnitary):
        Pulse(np.array([[np.nan, 0], [0, 1]]))


@settings(max_examples=1000, deadline=None)
@given(angle, angle, angle)
def test_random_pulses_obey_coefficient_invariants(phi, psi, theta):
    p = from_euler(phi, psi, theta)
    u = p.matrix
    assert np.abs(u.conj().T @ u - np.eye(2)).max() <= 1e-12
    c = coefficients(p)
    bar = {"+": "-", "-": "+", "z": "z"}
    for b in "+-z":
        assert abs(c["-", bar[b]] - np.conj(c["+", b])) <= 1e-12
    assert abs(c["z", "z"].imag) <= 1e-15
    for a in "+-z":
        assert np.abs(expand(c, a) - conj_by(p, OPS[a])).max() <= 1e-12


@settings(max_examples=300, deadline=None)
@given(angle, angle, angle, angle, angle, angle)
def test_composition_multiplies_coefficient_arrays(a1, b1, c1, a2, b2, c2):
    p1, p2 = from_euler(a1, b1, c1), from_euler(a2, b2, c2)
    got = coefficients(compose(p1, p2)).array
    assert np.abs(got - (coefficients(p2) @ coefficients(p1)).array).max() <= 1e-12


def test_euler_angles_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(200):
        p = from_euler(*rng.uniform(-3, 3, 3))
        q = from_euler(*p.euler_angles())
        assert np.allclose(coefficients(p).array, coefficients(q).array, atol=1e-12)
    r = rotation(1.1, "y")
    assert np.allclose(coefficients(from_euler(*r.euler_angles())).array,
                       coefficients(r).array, atol=1e-12)


@pytest.mark.parametrize("text,ref", [
    ("rot:90:y", rotation(math.pi / 2, "y")),
    ("ROT:-90:x", rotation(-math.pi / 2, "x")),
    ("rot:1.5e2:z", rotation(math.radians(150), "z")),
    ("euler:10:20:30", from_euler(*np.radians([10, 20, 30]))),
    ("pi", pi_pulse()),
    ("id", identity()),
    ("rot:90:y+rot:90:x", compose(rotation(math.pi / 2, "y"), rotation(math.pi / 2, "x"))),
])
def test_parse_pulse(text, ref):
    assert np.allclose(parse_pulse(text).matrix, ref.matrix)


def test_euler_labels_parse_back():
    p = from_euler(0.3, -1.2, 0.7)
    assert np.allclose(parse_pulse(p.label).matrix, p.matrix)


@pytest.mark.parametrize("text", ["rot:90", "rot:90:w", "euler:1:2", "spin", "", "rot:x:90"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_pulse(text)
