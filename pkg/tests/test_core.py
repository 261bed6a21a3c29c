import math

import pytest
from hypothesis import given, strategies as st

from rodbilliard import (PhaseState, SimConfig, complex_multiply,
                         unit_rotation)
from rodbilliard.core import EPS, require_finite

finite = st.floats(-10.0, 10.0)


def test_multiply_identity():
    assert complex_multiply(1 + 0j, complex(3.7, -2.2)) == complex(3.7, -2.2)


def test_multiply_i_squared():
    assert complex_multiply(1j, 1j) == -1 + 0j


def test_multiply_hand_value():
    assert complex_multiply(1 + 2j, 3 + 4j) == -5 + 10j


@given(finite, finite, finite, finite)
def test_multiply_commutes(a, b, c, d):
    u, v = complex(a, b), complex(c, d)
    assert complex_multiply(u, v) == complex_multiply(v, u)


@given(finite, finite, finite, finite, finite, finite)
def test_multiply_associates(a, b, c, d, e, f):
    u, v, w = complex(a, b), complex(c, d), complex(e, f)
    lhs = complex_multiply(complex_multiply(u, v), w)
    rhs = complex_multiply(u, complex_multiply(v, w))
    assert abs(lhs - rhs) <= 8 * EPS * (abs(u) * abs(v) * abs(w) + 1e-30)


def test_unit_rotation_axes():
    assert unit_rotation(0.0) == 1 + 0j
    assert abs(unit_rotation(math.pi / 2) - 1j) < 2 * EPS
    assert abs(unit_rotation(math.pi) - (-1 + 0j)) < 2 * EPS


@given(st.floats(-100.0, 100.0))
def test_unit_rotation_modulus(theta):
    assert abs(abs(unit_rotation(theta)) - 1.0) <= 4 * EPS


def test_require_finite_rejects():
    with pytest.raises(ValueError):
        require_finite(complex(math.nan, 0.0))
    with pytest.raises(ValueError):
        require_finite(complex(0.0, math.inf))
    assert require_finite(1 + 2j) == 1 + 2j


def test_phase_state_upper_half_plane():
    PhaseState(t=0.0, z=1j, zdot=1 + 0j)
    PhaseState(t=0.0, z=complex(1.0, -1e-12), zdot=0j)  # roundoff slack
    with pytest.raises(ValueError):
        PhaseState(t=0.0, z=complex(1.0, -1e-3), zdot=0j)
    with pytest.raises(ValueError):
        PhaseState(t=0.0, z=complex(math.nan, 1.0), zdot=0j)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(root_abs_tol=0.0)
    with pytest.raises(ValueError):
        SimConfig(scan_step=-1e-3)
    with pytest.raises(ValueError):
        SimConfig(grazing_tol=0.0)
    with pytest.raises(ValueError):
        SimConfig(n_max=0)
    with pytest.raises(ValueError):
        SimConfig(quasi_mode="bounce")
    cfg = SimConfig(n_max=5, t_max=2.0, quasi_mode="extend")
    assert cfg.n_max == 5 and cfg.quasi_mode == "extend"
