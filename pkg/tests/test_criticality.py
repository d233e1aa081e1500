import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brusselator.criticality import (
    LengthCase, Regime, critical_lengths, critical_wavenumbers_1d, lambda0_and_k0, lambda0_closed_form,
    lambda1, pes_check, regime, regime_flip_length, steady_threshold,
)
from brusselator.errors import NoCriticalScale, ValidationError
from brusselator.model import BrusselatorParams, DomainSpec
from brusselator.oracle import real_thresholds
from brusselator.spectrum import eigenvalues

MU = (2e-3, 4e-3)


def test_lambda1_values():
    assert lambda1(BrusselatorParams(1, 1, 2), DomainSpec.interval(17.0, "neumann")) == 5.0
    assert lambda1(BrusselatorParams(1, 1, 1), DomainSpec.interval(math.pi, "dirichlet")) == pytest.approx(4.0)
    got = lambda1(BrusselatorParams(*MU, 3.0), DomainSpec.interval(4.0, "dirichlet"))
    assert got == pytest.approx(6e-3 * math.pi**2 / 16 + 10, rel=1e-14)
    assert got == pytest.approx(10.0037, abs=1e-4)


@pytest.mark.parametrize("alpha, k0", [(2.0, 34), (3.0, 41)])
def test_dirichlet_mode_index(alpha, k0):
    assert lambda0_and_k0(BrusselatorParams(*MU, alpha), DomainSpec.interval(4.0, "dirichlet"))[1] == [k0]


def test_neumann_lambda0():
    p = BrusselatorParams(*MU, 3.0)
    lam0, ks = lambda0_and_k0(p, DomainSpec.interval(4.0, "neumann"))
    assert ks == [42]  # wavenumber 41
    assert lam0 == pytest.approx(lambda0_closed_form(p, 4.0, 41), rel=1e-13)
    assert lam0 == pytest.approx(9.8, abs=0.1)


@given(mu1=st.floats(1e-3, 1.0), mu2=st.floats(1e-3, 1.0), alpha=st.floats(0.2, 4.0), L=st.floats(0.5, 12.0),
       bc=st.sampled_from(["dirichlet", "neumann"]))
@settings(max_examples=60, deadline=None)
def test_lambda0_matches_determinant_bisection(mu1, mu2, alpha, L, bc):
    p = BrusselatorParams(mu1, mu2, alpha)
    dom = DomainSpec.interval(L, bc)
    lam0, ks = lambda0_and_k0(p, dom)
    rho = eigenvalues(dom, 4 * ks[0] + 64)
    thr = real_thresholds(p, rho[rho > 0], lam_max=10 * lam0 + 10)
    assert lam0 == pytest.approx(float(thr.min()), rel=1e-9)


@given(mu1=st.floats(1e-3, 1.0), mu2=st.floats(1e-3, 1.0), alpha=st.floats(0.2, 4.0), L=st.floats(0.5, 12.0))
@settings(max_examples=60, deadline=None)
def test_wavenumber_minimizes_closed_form(mu1, mu2, alpha, L):
    p = BrusselatorParams(mu1, mu2, alpha)
    ns = critical_wavenumbers_1d(p, L)
    best = lambda0_closed_form(p, L, ns[0])
    for n in range(1, max(ns) + 20):
        assert lambda0_closed_form(p, L, n) >= best * (1 - 1e-12)


def test_steady_threshold_is_infinite_for_constant_mode():
    assert steady_threshold(BrusselatorParams(1, 1, 1), 0.0) == math.inf


def test_regime_examples():
    assert regime(BrusselatorParams(*MU, 3.0), DomainSpec.interval(4.0, "dirichlet")).regime is Regime.REAL_FIRST
    assert regime(BrusselatorParams(*MU, 2.0), DomainSpec.interval(4.0, "dirichlet")).regime is Regime.HOPF_FIRST


@given(mu2=st.floats(1e-3, 1.0), ratio=st.floats(1.0, 10.0), alpha=st.floats(0.1, 5.0), L=st.floats(0.1, 50.0))
@settings(max_examples=80, deadline=None)
def test_neumann_with_faster_activator_is_hopf_first(mu2, ratio, alpha, L):
    cn = regime(BrusselatorParams(mu2 * ratio, mu2, alpha), DomainSpec.interval(L, "neumann"))
    assert cn.regime is Regime.HOPF_FIRST
    assert cn.lambda1 == pytest.approx(1 + alpha**2)


def test_neumann_lengths_example():
    cl = critical_lengths(BrusselatorParams(*MU, 3.0), "neumann", 41)
    assert cl.case is LengthCase.NEUMANN_MU1_LT_MU2
    assert cl.values == pytest.approx((11.06, 22.12), abs=0.01)


def test_dirichlet_lengths_example():
    cl = critical_lengths(BrusselatorParams(*MU, 3.0), "dirichlet", 41)
    assert cl.values == pytest.approx((11.0212, 22.1604), abs=1e-4)


def test_equal_diffusion_gives_pi_squared():
    cl = critical_lengths(BrusselatorParams(1, 1, 1), "dirichlet")
    assert cl.values[0] == pytest.approx(math.pi**2, rel=1e-15)
    assert cl.regime_at(3.0) is Regime.REAL_FIRST and cl.regime_at(3.2) is Regime.HOPF_FIRST


def test_no_critical_scale():
    with pytest.raises(NoCriticalScale):
        critical_lengths(BrusselatorParams(1, 1, 1), "neumann", 1)
    with pytest.raises(NoCriticalScale):
        critical_lengths(BrusselatorParams(0.9, 1.0, 1.0), "neumann", 3)


@pytest.mark.parametrize("mu1, mu2, alpha", [(1.0, 1.0, 1.0), (1.0, 0.5, 1.0), (0.3, 0.1, 2.0)])
def test_flip_length_matches_closed_form(mu1, mu2, alpha):
    p = BrusselatorParams(mu1, mu2, alpha)
    Lc = math.sqrt(critical_lengths(p, "dirichlet").values[0])
    lo, hi = regime_flip_length(p, "dirichlet", 0.2 * Lc, 3 * Lc, tol=1e-8)
    assert hi - lo < 1e-6
    assert lo - 1e-12 <= Lc <= hi + 1e-12
    assert regime(p, DomainSpec.interval(0.9 * Lc, "dirichlet")).regime is Regime.REAL_FIRST
    assert regime(p, DomainSpec.interval(1.1 * Lc, "dirichlet")).regime is Regime.HOPF_FIRST


def test_flip_length_needs_a_change():
    with pytest.raises(ValidationError):
        regime_flip_length(BrusselatorParams(1, 1, 1), "dirichlet", 4.0, 5.0)


def test_pes_hopf_neumann():
    v = pes_check(BrusselatorParams(0.1, 0.1, 2.0), DomainSpec.interval(3.0, "neumann"))
    assert v.passed and v.below < 0 < v.above and v.label == "pass"


def test_pes_real_at_lambda0():
    p = BrusselatorParams(*MU, 3.0)
    dom = DomainSpec.interval(4.0, "neumann")
    v = pes_check(p, dom)
    assert v.passed and v.critical_mode == 42
    from brusselator.spectrum import eigenpair, growth_rates, mode_matrix
    g = growth_rates(mode_matrix(p.with_lambda(v.lambda_c), eigenpair(42, dom).rho))
    assert abs(g.beta_plus) < 1e-10


def test_pes_degenerate_at_critical_length():
    p = BrusselatorParams(1, 1, 1)
    lo, hi = regime_flip_length(p, "dirichlet", 1.0, 5.0, tol=1e-12)
    v = pes_check(p, DomainSpec.interval(0.5 * (lo + hi), "dirichlet"))
    assert v.degenerate and v.label == "Degenerate"


def test_pes_reports_offending_mode():
    # asking for the Hopf pattern where a real mode is already unstable
    v = pes_check(BrusselatorParams(*MU, 3.0), DomainSpec.interval(4.0, "dirichlet"), which="hopf")
    assert not v.passed and v.offending_mode is not None and v.offending_value >= 0


def test_ties_are_reported():
    p = BrusselatorParams(1e-2, 1e-1, 1.0)
    # pick L so that wavenumbers n and n+1 have the same threshold
    n = 2
    L = math.pi * math.sqrt(n * (n + 1)) * (p.mu1 * p.mu2 / p.alpha**2) ** 0.25
    assert critical_wavenumbers_1d(p, L) == [n, n + 1]
    assert len(regime(p, DomainSpec.interval(L, "dirichlet")).k0_set) == 2
    cn = regime(p, DomainSpec.interval(L, "dirichlet"))
    with pytest.raises(ValidationError):
        cn.k0
    assert np.isfinite(cn.lambda0)
