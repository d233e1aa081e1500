import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brusselator.errors import ValidationError
from brusselator.model import (
    BC, BrusselatorParams, DomainSpec, PhysicalInputs, bilinear, homogeneous_state, nondimensionalize,
    nonlinearity, quadratic_coefficient, reaction_u, trilinear,
)

pos = st.floats(0.05, 10.0)
small = st.floats(-2.0, 2.0)


def test_unit_rates_give_identity_scaling():
    s = nondimensionalize(PhysicalInputs(1, 1, 1, 1, 0.3, 0.7, 2.5, 4.0, 1))
    assert s.params == BrusselatorParams(0.3, 0.7, 2.5, 4.0)
    assert s.time_scale == 1.0


def test_alpha_and_lambda_scaling():
    s = nondimensionalize(PhysicalInputs(2, 1, 1, 4, 1, 1, 8, 1, 1))
    assert s.params.alpha == pytest.approx(2.0, rel=1e-14)
    s = nondimensionalize(PhysicalInputs(1, 3, 1, 6, 1, 1, 1, 10, 1))
    assert s.params.lam == pytest.approx(5.0, rel=1e-14)


@pytest.mark.parametrize("alpha, lam, expected", [(2, 5, (2, 2.5)), (1, 0, (1, 0)), (3, 9.8, (3, 3.26667))])
def test_homogeneous_state(alpha, lam, expected):
    u = homogeneous_state(BrusselatorParams(1, 1, alpha, lam))
    assert u == pytest.approx(expected, rel=1e-5)


@given(alpha=pos, lam=st.floats(0, 20))
def test_homogeneous_state_zeroes_the_kinetics(alpha, lam):
    p = BrusselatorParams(1, 1, alpha, lam)
    f1, f2 = reaction_u(*homogeneous_state(p), p)
    assert abs(f1) < 1e-12 * (1 + lam) * alpha and abs(f2) < 1e-12 * (1 + lam) * alpha


def test_nonlinearity_values():
    p = BrusselatorParams(1, 1, 1, 1)
    assert nonlinearity(0.0, 0.0, p) == (0, 0)
    assert tuple(map(float, nonlinearity(1.0, 0.0, p))) == (2.0, -2.0)
    q = BrusselatorParams(1, 1, 1, 2)
    assert bilinear([1, 0], [0, 1], q) == pytest.approx([2, -2])


@given(alpha=pos, lam=st.floats(0, 20), v1=small, v2=small)
@settings(max_examples=200)
def test_nonlinearity_is_the_translated_kinetics(alpha, lam, v1, v2):
    # the mass-action reading is the exact shift of the original kinetics
    p = BrusselatorParams(1, 1, alpha, lam)
    u1, u2 = homogeneous_state(p)
    f1, f2 = reaction_u(u1 + v1, u2 + v2, p)
    lin1 = (lam - 1) * v1 + alpha**2 * v2
    g1, g2 = nonlinearity(v1, v2, p, kinetics="mass_action")
    assert float(f1 - lin1) == pytest.approx(float(g1), abs=1e-10 * (1 + lam + alpha) ** 3)
    assert float(g1 + g2) == 0.0


@given(alpha=pos, lam=st.floats(0, 20), u=st.tuples(small, small), v=st.tuples(small, small))
def test_bilinear_polarization(alpha, lam, u, v):
    p = BrusselatorParams(1, 1, alpha, lam)
    u, v = np.array(u), np.array(v)
    quad = lambda w: nonlinearity(w[0], w[1], p)[0] - w[0] ** 2 * w[1]
    lhs = quad(u + v) - quad(u) - quad(v)
    assert float(lhs) == pytest.approx((bilinear(u, v, p) + bilinear(v, u, p))[0], abs=1e-9 * (1 + lam))


@given(u=st.tuples(small, small))
def test_trilinear_diagonal_is_cubic(u):
    assert trilinear(u, u, u)[0] == pytest.approx(u[0] ** 2 * u[1], abs=1e-14)


def test_quadratic_coefficient_readings():
    p = BrusselatorParams(1, 1, 2, 5)
    assert quadratic_coefficient(p) == 5.0
    assert quadratic_coefficient(p, "mass_action") == 2.5
    with pytest.raises(ValidationError):
        quadratic_coefficient(p, "other")


def test_params_validation_reports_every_field():
    with pytest.raises(ValidationError) as err:
        BrusselatorParams(-1, 0, float("nan"), -2)
    assert set(err.value.fields) == {"mu1", "mu2", "alpha", "lambda"}


def test_domain_validation():
    with pytest.raises(ValidationError):
        DomainSpec.interval(0.0, "dirichlet")
    with pytest.raises(ValidationError):
        DomainSpec.interval(1.0, "periodic")
    with pytest.raises(ValidationError):
        DomainSpec.box((1, 1, 1, 1), BC.NEUMANN)
    with pytest.raises(ValidationError):
        DomainSpec.box((1, 2), BC.NEUMANN).L
    d = DomainSpec.box((1, 2), "Neumann")
    assert d.bc is BC.NEUMANN and d.volume == 2.0 and d.dim == 2


def test_physical_inputs_must_be_positive():
    with pytest.raises(ValidationError) as err:
        PhysicalInputs(0, 1, 1, 1, 1, 1, 1, 1, -1)
    assert set(err.value.fields) == {"k1", "l"}


def test_time_scale_is_inverse_k4():
    s = nondimensionalize(PhysicalInputs(1, 1, 1, 4, 1, 1, 1, 1, 2))
    assert s.time_scale == 0.25 and s.length_scale == 2
    assert s.params.mu1 == pytest.approx(1 / 16)
    assert math.isclose(s.params.alpha, 1 / 8)
