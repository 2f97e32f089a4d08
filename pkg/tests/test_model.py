import math

import numpy as np
import pytest

from knuckle_crane import ConfigError, ControlGains, CraneParams, DomainViolation, GeneralizedState, Setpoint
from knuckle_crane.model import D_MIN, check_domain, generalized_force


def test_default_parameters_and_derived_constants():
    p = CraneParams()
    assert (p.m_b, p.m_j, p.m, p.l_b, p.l_j) == (300.0, 250.0, 100.0, 2.0, 2.3)
    assert p.I_b == pytest.approx(300 * 4 / 12)
    assert p.I_j == pytest.approx(250 * 2.3**2 / 12)
    assert p.A1 == pytest.approx(4 * 100 + 4 * 300 / 4 + 4 * 250)
    assert p.A2 == pytest.approx(2.3**2 * 100 + 2.3**2 * 250 / 4)
    assert p.A3 == pytest.approx(2 * 2 * 2.3 * 100 + 2 * 2.3 * 250)
    # no factor two on the payload coupling constants
    assert p.A4 == pytest.approx(2 * 100)
    assert p.A5 == pytest.approx(2.3 * 100)


@pytest.mark.parametrize("field", ["m_b", "m_j", "m", "l_b", "l_j", "I_tot", "I_b", "I_j", "g"])
@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_params_reject_non_positive(field, bad):
    with pytest.raises(ConfigError, match=field):
        CraneParams(**{field: bad})


def test_params_replace_and_vector_are_consistent():
    p = CraneParams().replace(m=50.0)
    assert p.m == 50.0
    assert p.vector[5] == 50.0
    assert p.vector[3] == pytest.approx(p.A4)
    with pytest.raises(ValueError):
        p.vector[0] = 1.0


def test_gains_positive():
    with pytest.raises(ConfigError, match="kd_beta"):
        ControlGains(kd_beta=0.0)
    k = ControlGains()
    assert list(k.kp) == [1e3, 1e4, 1e4, 1e3]
    assert list(k.kd) == [1e2, 1e3, 1e3, 1e2]


def test_setpoint_defaults_and_bounds():
    sp = Setpoint()
    assert np.allclose(np.degrees(sp.actuated[:3]), [60, 30, 22])
    assert sp.d_d == 2.0
    assert list(sp.q[4:]) == [0.0, 0.0]
    with pytest.raises(ConfigError, match="beta_d"):
        Setpoint(beta_d=math.pi / 2)
    with pytest.raises(ConfigError, match="d_d"):
        Setpoint(d_d=D_MIN / 2)


def test_state_is_read_only_and_round_trips():
    s = GeneralizedState([0, 0.1, 0.2, 2, 0.01, -0.02], np.arange(6.0))
    with pytest.raises(ValueError):
        s.q[0] = 1.0
    again = GeneralizedState.from_vector(s.x)
    assert np.array_equal(again.q, s.q) and np.array_equal(again.qdot, s.qdot)


@pytest.mark.parametrize("index,name", [(1, "beta"), (2, "gamma"), (4, "theta1"), (5, "theta2")])
def test_domain_violation_names_coordinate(index, name):
    q = np.array([0, 0, 0, 2.0, 0, 0])
    q[index] = -math.pi / 2
    with pytest.raises(DomainViolation) as info:
        check_domain(q, t=1.25)
    assert info.value.coordinate == name
    assert info.value.t == 1.25
    assert "t=1.25" in str(info.value)


def test_cable_lower_bound():
    with pytest.raises(DomainViolation, match="d="):
        GeneralizedState([0, 0, 0, 0.005, 0, 0]).check()
    GeneralizedState([0, 0, 0, D_MIN, 0, 0]).check()


def test_luff_guard_can_be_relaxed():
    q = [0, -2.0, 0, 1.0, 0, 0]
    with pytest.raises(DomainViolation):
        check_domain(q)
    check_domain(q, luff=False)


def test_generalized_force_pads_and_rejects_nan():
    assert list(generalized_force([1, 2, 3, 4])) == [1, 2, 3, 4, 0, 0]
    with pytest.raises(ConfigError):
        generalized_force([1, float("nan"), 0, 0])
