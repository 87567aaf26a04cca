import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from deltapol import (
    BoundState, DomainError, InvalidModelError, ModelParams, Region, Sign,
    bound_state, branch_kinematics, psi0_eval,
)


@pytest.mark.parametrize("g, k0, E0, B", [
    (1.0, 1.0, -0.5, 0.5),
    (2.0, 2.0, -2.0, 2.0),
    (0.5, 0.5, -0.125, 0.125),
])
def test_bound_state(g, k0, E0, B):
    s = bound_state(ModelParams(g))
    assert (s.k0, s.E0, s.B) == (k0, E0, B)


@pytest.mark.parametrize("g", [0.0, -1.0, float("nan")])
def test_non_positive_strength_rejected(g):
    with pytest.raises(InvalidModelError):
        ModelParams(g)


def test_units_are_fixed():
    p = ModelParams(3.0)
    assert (p.mass, p.hbar, p.charge) == (1.0, 1.0, 1.0)
    with pytest.raises(TypeError):
        ModelParams(3.0, mass=2.0)


def test_psi0_values(unit_state):
    assert psi0_eval(unit_state, 0.0) == 1.0
    assert psi0_eval(unit_state, 1.0) == psi0_eval(unit_state, -1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    arr = psi0_eval(unit_state, np.array([-2.0, 0.0, 2.0]))
    assert arr[0] == arr[2]


@pytest.mark.parametrize("g", [0.5, 1.0, 2.0])
def test_psi0_normalized(g):
    s = BoundState.from_g(g)
    half, _ = integrate.quad(lambda x: psi0_eval(s, x) ** 2, 0.0, np.inf, epsabs=1e-14, epsrel=1e-13)
    assert 2.0 * half == pytest.approx(1.0, abs=1e-12)


def test_branch_examples(unit_state):
    below = branch_kinematics(unit_state, 0.0, Sign.PLUS)
    assert below.region is Region.BELOW_THRESHOLD and below.k == 1.0
    above = branch_kinematics(unit_state, 1.0, Sign.PLUS)
    assert above.region is Region.ABOVE_THRESHOLD and above.Lambda == 1.0
    neg = branch_kinematics(unit_state, 0.5, Sign.MINUS)
    assert neg.region is Region.NEGATIVE and neg.kprime == pytest.approx(math.sqrt(2), rel=1e-15)


def test_threshold_tie_goes_below(unit_state):
    kin = branch_kinematics(unit_state, 0.5, Sign.PLUS)
    assert kin.region is Region.BELOW_THRESHOLD and kin.k == 0.0


def test_static_momenta_equal_k0():
    s = BoundState.from_g(1.7)
    assert branch_kinematics(s, 0.0, Sign.PLUS).k == pytest.approx(s.k0, rel=1e-15)
    assert branch_kinematics(s, 0.0, Sign.MINUS).kprime == pytest.approx(s.k0, rel=1e-15)


def test_negative_omega_rejected(unit_state):
    with pytest.raises(DomainError):
        branch_kinematics(unit_state, -0.1, Sign.PLUS)


@given(
    g=st.floats(0.1, 5.0),
    x=st.floats(0.0, 20.0),
    sign=st.sampled_from(list(Sign)),
)
def test_exactly_one_momentum_populated(g, x, sign):
    s = BoundState.from_g(g)
    kin = branch_kinematics(s, x * s.B, sign)
    populated = [v for v in (kin.k, kin.Lambda, kin.kprime) if v is not None]
    assert len(populated) == 1
    assert populated[0] >= 0.0
    assert kin.momentum == populated[0]
    if sign is Sign.MINUS:
        assert kin.region is Region.NEGATIVE
    else:
        # the plus branch partitions omega >= 0 at B
        assert (kin.region is Region.BELOW_THRESHOLD) == (x * s.B <= s.B)
