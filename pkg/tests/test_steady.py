import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brusselator.criticality import Regime, regime
from brusselator.errors import ValidationError
from brusselator.model import BrusselatorParams, DomainSpec
from brusselator.oracle import verify_psi
from brusselator.spectrum import eigenpair
from brusselator.steady_transition import (
    CubeCondition, SteadyKind, b1_steady, branch_expansion, classify_steady, cubic_condition,
    neumann_b1_closed_form, neumann_b1_printed, psi_solve,
)

MU = (2e-3, 4e-3)
NEU = DomainSpec.interval(4.0, "neumann")
B1_NEUMANN = -10.53078955712659  # psi reduction at alpha=3, L=4


def test_cube_condition_on_intervals():
    neu = DomainSpec.interval(2.7, "neumann")
    for k in range(2, 30):
        assert cubic_condition(eigenpair(k, neu)).condition is CubeCondition.ZERO
    dir_ = DomainSpec.interval(4.0, "dirichlet")
    assert cubic_condition(eigenpair(41, dir_)).condition is CubeCondition.NONZERO
    for k in range(2, 60, 2):
        assert cubic_condition(eigenpair(k, dir_)).condition is CubeCondition.ZERO


def test_neumann_psi_closed_form():
    p = BrusselatorParams(*MU, 3.0)
    ps = psi_solve(p, NEU)
    assert ps.method == "two_mode" and [m.k for m in ps.modes] == [1, 83]
    r = eigenpair(42, NEU).rho
    assert abs(ps.psi1[0]) < 1e-14
    assert ps.psi2[0] == pytest.approx(-p.mu2**2 * r**2 * (p.mu1 * r + 1) / p.alpha**3, rel=1e-13)
    assert verify_psi(ps, p, NEU).passed


def test_psi_residual_on_dirichlet_interval():
    p = BrusselatorParams(*MU, 3.0)
    dom = DomainSpec.interval(3.9, "dirichlet")
    ps = psi_solve(p, dom)
    assert ps.method == "galerkin" and ps.residual < 1e-12
    assert verify_psi(ps, p, dom).passed


def test_psi_truncation_within_tail():
    p = BrusselatorParams(*MU, 3.0)
    dom = DomainSpec.interval(3.9, "dirichlet")
    a, b = psi_solve(p, dom, K_psi=512), psi_solve(p, dom, K_psi=1024)
    diff = np.abs(np.subtract(a.psi_e2(), b.psi_e2())).max()
    assert diff <= a.tail


def test_psi_in_a_box():
    p = BrusselatorParams(0.02, 0.2, 1.0)
    dom = DomainSpec.box((2.0, 3.3), "dirichlet")
    ps = psi_solve(p, dom, K_psi=256)
    assert ps.residual < 1e-9


def test_psi_rejects_nonzero_cube():
    with pytest.raises(ValidationError):
        psi_solve(BrusselatorParams(*MU, 3.0), DomainSpec.interval(4.0, "dirichlet"))


def test_neumann_b1_paths_agree():
    p = BrusselatorParams(*MU, 3.0)
    b = b1_steady(p, NEU)
    assert b.value == pytest.approx(B1_NEUMANN, rel=1e-12)
    assert b.closed_form == pytest.approx(b.value, rel=1e-12)
    assert b.sign == -1 and not b.inconclusive


def test_printed_variants_are_kept_and_flagged():
    p = BrusselatorParams(*MU, 3.0)
    pv = neumann_b1_printed(p, 4.0, 41)
    assert pv["expanded"] == pytest.approx(-16.504, abs=1e-3)
    assert pv["reduced"] == pytest.approx(-0.234075, abs=1e-6)
    b = b1_steady(p, NEU)
    assert b.printed_variants == pv and len(b.warnings) == 2


@given(mu1=st.floats(1e-3, 2e-2), mu2=st.floats(2e-2, 0.2), alpha=st.floats(0.5, 4.0), L=st.floats(2.0, 10.0))
@settings(max_examples=40, deadline=None)
def test_neumann_closed_form_matches_reduction(mu1, mu2, alpha, L):
    p = BrusselatorParams(mu1, mu2, alpha)
    cn = regime(p, DomainSpec.interval(L, "neumann"))
    if cn.regime is not Regime.REAL_FIRST or len(cn.k0_set) != 1:
        return
    b = b1_steady(p, DomainSpec.interval(L, "neumann"))
    closed = neumann_b1_closed_form(p, L, cn.k0_set[0] - 1)
    assert closed == pytest.approx(b.value, rel=1e-8, abs=1e-12)


def test_b1_needs_real_first():
    with pytest.raises(ValidationError):
        b1_steady(BrusselatorParams(*MU, 2.0), DomainSpec.interval(4.0, "dirichlet"))


def test_classification_matrix():
    p = BrusselatorParams(*MU, 3.0)
    r = classify_steady(p, NEU)
    assert (r.kind, r.type, r.continuous) == (SteadyKind.PITCHFORK, "I", True)
    r = classify_steady(p, DomainSpec.interval(3.9, "dirichlet"))
    assert (r.kind, r.type, r.continuous) == (SteadyKind.PITCHFORK, "II", False)
    assert r.b1.value == pytest.approx(86.2655, rel=1e-5)
    r = classify_steady(p, DomainSpec.interval(4.0, "dirichlet"))
    assert (r.kind, r.type, r.continuous) == (SteadyKind.MIXED, "III", None)


def test_branch_amplitude_vanishes_at_lambda0_and_follows_sqrt():
    p = BrusselatorParams(*MU, 3.0)
    ex = branch_expansion(p, NEU)
    assert ex.law == "sqrt" and ex.amplitude(ex.lambda0) == pytest.approx(0.0, abs=1e-7)
    eps = 1e-4
    ratio = ex.amplitude(ex.lambda0 + 4 * eps) / ex.amplitude(ex.lambda0 + eps)
    assert ratio == pytest.approx(2.0, rel=1e-3)
    with pytest.raises(ValidationError):
        ex.amplitude(ex.lambda0 - 0.01)
    x = np.linspace(0, 4, 9)
    v1p, _ = ex.profile(x, lam=ex.lambda0 + 0.05, sign=1)
    v1m, _ = ex.profile(x, lam=ex.lambda0 + 0.05, sign=-1)
    assert v1p == pytest.approx(-v1m)


def test_mixed_branch_is_linear():
    p = BrusselatorParams(*MU, 3.0)
    ex = branch_expansion(p, DomainSpec.interval(4.0, "dirichlet"))
    assert ex.law == "linear"
    assert ex.amplitude(ex.lambda0) == pytest.approx(0.0, abs=1e-7)
    b = ex.beta(ex.lambda0 + 0.02)
    assert ex.amplitude(ex.lambda0 + 0.02) == pytest.approx(ex.C * b)
    assert ex.C == pytest.approx(8.8754, rel=1e-4)


def test_xi_spans_the_kernel():
    p = BrusselatorParams(*MU, 3.0)
    ex = branch_expansion(p, NEU)
    from brusselator.spectrum import mode_matrix
    m = mode_matrix(p.with_lambda(ex.lambda0), ex.mode.rho).matrix
    assert np.abs(m @ ex.xi).max() < 1e-10 * np.abs(m).max() * np.abs(ex.xi).max()
    assert np.abs(m.T @ ex.xi_adj).max() < 1e-10 * np.abs(m).max() * np.abs(ex.xi_adj).max()
    assert math.isfinite(ex.C)
