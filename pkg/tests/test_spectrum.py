import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from brusselator.errors import ValidationError
from brusselator.model import BC, BrusselatorParams, DomainSpec
from brusselator.oracle import numeric_beta
from brusselator.spectrum import (
    Case, ModeMatrix, coupling_integral, critical_eigenvectors, eigenpair, eigenvalues, growth_rates,
    growth_rates_array, mode_matrix, product_integral, trig_product_integral,
)
from brusselator.criticality import lambda0_and_k0, lambda1, steady_threshold

pos = st.floats(0.05, 5.0)


def _quad_product(kinds, ns, L):
    fns = [np.sin if k == "sin" else np.cos for k in kinds]
    f = lambda x: math.prod(fn(n * math.pi * x / L) for fn, n in zip(fns, ns))
    pts = max(50, 4 * sum(ns))
    return quad(f, 0, L, limit=pts)[0]


@given(kinds=st.lists(st.sampled_from(["sin", "cos"]), min_size=1, max_size=4),
       ns=st.lists(st.integers(0, 12), min_size=4, max_size=4), L=st.floats(0.3, 7.0))
@settings(max_examples=150, deadline=None)
def test_trig_integrals_match_quadrature(kinds, ns, L):
    ns = tuple(ns[: len(kinds)])
    exact = trig_product_integral(tuple(kinds), ns, L)
    assert exact == pytest.approx(_quad_product(kinds, ns, L), abs=1e-9 * L)


def test_eigenpair_examples():
    m = eigenpair(1, DomainSpec.interval(math.pi, "dirichlet"))
    assert m.rho == pytest.approx(1.0, rel=1e-15) and m.normsq == pytest.approx(math.pi / 2)
    m = eigenpair(1, DomainSpec.interval(3.3, "neumann"))
    assert m.rho == 0.0 and m.normsq == pytest.approx(3.3)
    assert float(m(np.linspace(0, 3.3, 5)).std()) == 0.0
    assert eigenpair(2, DomainSpec.interval(4, "dirichlet")).rho == pytest.approx(math.pi**2 / 4, rel=1e-15)


def test_box_eigenvalues_are_sorted_products():
    dom = DomainSpec.box((1.0, 2.0), "dirichlet")
    rho = eigenvalues(dom, 30)
    assert np.all(np.diff(rho) >= 0)
    brute = sorted((a * math.pi) ** 2 + (b * math.pi / 2) ** 2 for a in range(1, 12) for b in range(1, 12))
    assert rho == pytest.approx(brute[:30], rel=1e-14)
    m = eigenpair(3, dom)
    assert m.normsq == pytest.approx(0.5, rel=1e-14)


def test_box_neumann_starts_with_constant():
    dom = DomainSpec.box((1.0, 1.5), "neumann")
    m = eigenpair(1, dom)
    assert m.rho == 0 and m.wavenumbers == (0, 0) and m.normsq == pytest.approx(1.5)


def test_mode_matrix_examples():
    m = mode_matrix(BrusselatorParams(1, 1, 2, 5), 0.0)
    assert m.matrix.tolist() == [[4, 4], [-5, -4]]
    assert m.trace == 0 and m.det == 4
    with pytest.raises(ValidationError):
        mode_matrix(BrusselatorParams(1, 1, 2, 5), -1.0)


@given(mu1=pos, mu2=pos, alpha=pos, rho=st.floats(0, 50))
def test_zero_forcing_is_stable(mu1, mu2, alpha, rho):
    m = mode_matrix(BrusselatorParams(mu1, mu2, alpha, 0.0), rho)
    assert m.trace == pytest.approx(-(mu1 * rho + mu2 * rho + alpha**2 + 1))
    assert m.det == pytest.approx((mu1 * rho + 1) * (mu2 * rho + alpha**2))
    assert growth_rates(m).beta_plus.real < 0


def test_determinant_vanishes_at_lambda0():
    p = BrusselatorParams(2e-3, 4e-3, 3.0)
    dom = DomainSpec.interval(4.0, "neumann")
    lam0, ks = lambda0_and_k0(p, dom)
    m = mode_matrix(p.with_lambda(lam0), eigenpair(ks[0], dom).rho)
    assert abs(m.det) < 1e-12 * np.abs(m.matrix).max() ** 2
    g = growth_rates(m)
    assert abs(g.beta_plus) < 1e-10 and g.beta_minus.real == pytest.approx(m.trace)


def test_neumann_hopf_pair():
    g = growth_rates(mode_matrix(BrusselatorParams(1, 1, 2, 5), 0.0))
    assert g.is_complex_pair
    assert g.beta_plus == pytest.approx(2j, abs=1e-15) and g.beta_minus == pytest.approx(-2j, abs=1e-15)


@given(st.lists(st.floats(-100, 100), min_size=4, max_size=4))
@settings(max_examples=300)
def test_roots_satisfy_vieta(entries):
    m = ModeMatrix(*entries)
    g = growth_rates(m)
    scale = max(1.0, float(np.abs(m.matrix).max()))
    assert abs(g.beta_plus + g.beta_minus - m.trace) <= 1e-12 * scale
    assert abs(g.beta_plus * g.beta_minus - m.det) <= 1e-12 * scale**2
    assert g.beta_plus.real >= g.beta_minus.real


@given(st.lists(st.floats(-50, 50), min_size=4, max_size=4))
def test_roots_match_generic_eigensolver(entries):
    m = ModeMatrix(*entries)
    g = growth_rates(m)
    ev = sorted(np.linalg.eigvals(m.matrix), key=lambda z: (-z.real, -z.imag))
    scale = max(1.0, float(np.abs(m.matrix).max()))
    # near a double root the eigenvalues are only sqrt(eps)-conditioned
    tol = 1e-7 * scale
    assert abs(g.beta_plus - ev[0]) <= tol or abs(g.beta_plus - ev[1]) <= tol
    nb = numeric_beta(m)
    assert abs(nb[0] - g.beta_plus) <= tol


def test_double_root():
    m = ModeMatrix(-1.0, 0.0, 0.0, -1.0)
    g = growth_rates(m)
    assert g.beta_plus == g.beta_minus == -1.0
    nb = numeric_beta(m)
    assert nb[0] == pytest.approx(-1.0) and nb[1] == pytest.approx(-1.0)


def test_vectorized_rates_agree_with_scalar():
    p = BrusselatorParams(0.1, 0.05, 1.5, 3.0)
    rho = np.linspace(0, 40, 17)
    bp, bm, is_c = growth_rates_array(p, rho)
    for r, a, b, c in zip(rho, bp, bm, is_c):
        g = growth_rates(mode_matrix(p, r))
        assert (g.beta_plus, g.beta_minus, g.is_complex_pair) == (a, b, c)


def test_real_eigenvectors():
    p = BrusselatorParams(2e-3, 4e-3, 3.0)
    dom = DomainSpec.interval(4.0, "neumann")
    k0 = lambda0_and_k0(p, dom)[1][0]
    mode = eigenpair(k0, dom)
    pc = p.with_lambda(float(steady_threshold(p, mode.rho)))
    ce = critical_eigenvectors(pc, mode, "real")
    r = mode.rho
    assert ce.xi.tolist() == [-p.mu2 * r, p.mu1 * r + 1]
    assert max(ce.residuals(pc).values()) < 1e-13


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0])
def test_neumann_hopf_eigenvectors(alpha):
    p = BrusselatorParams(1e-2, 1e-2, alpha)
    dom = DomainSpec.interval(2.0, "neumann")
    pc = p.with_lambda(lambda1(p, dom))
    ce = critical_eigenvectors(pc, eigenpair(1, dom), Case.HOPF)
    assert ce.sigma0 == pytest.approx(alpha)
    assert ce.xi == pytest.approx([alpha**2, alpha * (1 - alpha)])
    assert ce.eta == pytest.approx([alpha**2, -alpha * (alpha + 1)])
    assert max(ce.residuals(pc).values()) < 1e-13
    prs = ce.pairings()
    assert abs(prs["xi_etaadj"]) < 1e-12 and abs(prs["eta_xiadj"]) < 1e-12


def test_hopf_eigenvectors_need_oscillation():
    p = BrusselatorParams(1.0, 1.0, 0.1)
    with pytest.raises(ValidationError):
        critical_eigenvectors(p, eigenpair(10, DomainSpec.interval(1.0, "dirichlet")), "hopf")


@pytest.mark.parametrize("L", [1.0, 4.0, 7.3])
def test_dirichlet_coupling(L):
    dom = DomainSpec.interval(L, BC.DIRICHLET)
    e1 = eigenpair(1, dom)
    for k in range(2, 12):
        val = coupling_integral(e1, eigenpair(k, dom))
        if k % 2 == 0:
            assert val == 0.0
        else:
            assert val == pytest.approx(-4 * L / (math.pi * k * (k * k - 4)), rel=1e-13)
            assert val == pytest.approx(_quad_product(("sin",) * 3, (1, 1, k), L), abs=1e-12)


def test_neumann_coupling_to_constant():
    dom = DomainSpec.interval(2.5, BC.NEUMANN)
    e1 = eigenpair(1, dom)
    for k in range(2, 8):
        assert coupling_integral(e1, eigenpair(k, dom)) == 0.0


@given(a=st.integers(1, 6), b=st.integers(1, 6), c=st.integers(1, 6))
def test_box_products_factorize(a, b, c):
    dom = DomainSpec.box((1.0, 1.7), "dirichlet")
    modes = [eigenpair(k, dom) for k in (a, b, c)]
    expect = math.prod(
        trig_product_integral(("sin",) * 3, tuple(m.wavenumbers[ax] for m in modes), L)
        for ax, L in enumerate(dom.lengths))
    assert product_integral(modes) == pytest.approx(expect, abs=1e-15)
