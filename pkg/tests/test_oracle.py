import io
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from brusselator.hopf_transition import b1_hopf_series
from brusselator.model import BrusselatorParams, DomainSpec
from brusselator.oracle import (
    NoCrossing, OracleReport, Sign, fd_reintegrate, hopf_b1_galerkin, mode_thresholds, numeric_beta,
    real_thresholds, relative_difference, scan_first_crossing, sign_of_b1_via_simulation, verify_psi,
    write_jsonl,
)
from brusselator.simulate import InitialCondition, SimConfig, detect_cycle, integrate
from brusselator.spectrum import ModeMatrix, growth_rates, mode_matrix
from brusselator.steady_transition import psi_solve

MU = (2e-3, 4e-3)
NEU4 = DomainSpec.interval(4.0, "neumann")
DIR4 = DomainSpec.interval(4.0, "dirichlet")
GRID = np.linspace(0.0, 20.0, 50)


def test_numeric_beta_on_random_matrices():
    rng = np.random.default_rng(11)
    worst = 0.0
    for a in rng.uniform(-10, 10, size=(2000, 4)):
        m = ModeMatrix(*a)
        g = growth_rates(m)
        nb = numeric_beta(m)
        worst = max(worst, relative_difference(g.beta_plus, nb[0]), relative_difference(g.beta_minus, nb[1]))
    assert worst <= 1e-10


def test_numeric_beta_neumann_pair():
    nb = numeric_beta(mode_matrix(BrusselatorParams(1, 1, 2.0, 5.0), 0.0))
    assert nb[0] == pytest.approx(2j, abs=1e-14) and nb[1] == pytest.approx(-2j, abs=1e-14)


def test_first_crossing_neumann_steady():
    c = scan_first_crossing(BrusselatorParams(*MU, 3.0), NEU4, GRID)
    assert (c.mode, c.wavenumbers, c.kind) == (42, (41,), "real")
    assert c.lambda_c == pytest.approx(9.743727252455379, rel=1e-10)


def test_first_crossing_neumann_hopf():
    c = scan_first_crossing(BrusselatorParams(0.3, 0.1, 2.0), NEU4, GRID)
    assert c.kind == "complex" and c.mode == 1
    assert c.lambda_c == pytest.approx(5.0, rel=1e-10) and c.frequency == pytest.approx(2.0)


def test_first_crossing_dirichlet_hopf():
    c = scan_first_crossing(BrusselatorParams(*MU, 2.0), DIR4, GRID)
    assert c.kind == "complex" and c.mode == 1


def test_no_crossing():
    with pytest.raises(NoCrossing):
        scan_first_crossing(BrusselatorParams(*MU, 3.0), NEU4, np.linspace(0, 5, 10))
    with pytest.raises(NoCrossing):
        scan_first_crossing(BrusselatorParams(*MU, 3.0), NEU4, np.linspace(15, 20, 10))


@given(mu1=st.floats(1e-3, 1.0), mu2=st.floats(1e-3, 1.0), alpha=st.floats(0.2, 4.0))
def test_thresholds_bound_each_other(mu1, mu2, alpha):
    p = BrusselatorParams(mu1, mu2, alpha)
    rho = np.linspace(0.1, 50, 20)
    # any threshold (real or oscillatory) comes no later than the real one
    assert np.all(mode_thresholds(p, rho) <= real_thresholds(p, rho) * (1 + 1e-12))


def test_verify_psi_two_mode():
    p = BrusselatorParams(*MU, 3.0)
    rep = verify_psi(psi_solve(p, NEU4), p, NEU4)
    assert rep.passed and rep.rel <= 1e-9


def test_verify_psi_zero_forcing():
    p = BrusselatorParams(*MU, 3.0)
    ps = psi_solve(p, NEU4, k0=1)
    assert ps.method == "trivial" and not ps.psi1.any() and not ps.psi2.any()
    assert verify_psi(ps, p, NEU4).passed


def test_verify_psi_catches_a_wrong_solution():
    p = BrusselatorParams(*MU, 3.0)
    ps = psi_solve(p, NEU4)
    bad = type(ps)(ps.lambda0, ps.k0, ps.modes, ps.psi1 * 1.01, ps.psi2, ps.weights, 0.0, 0.0, ps.method)
    assert not verify_psi(bad, p, NEU4).passed


def test_galerkin_normal_form_agrees_with_series():
    p = BrusselatorParams(*MU, 2.0)
    series = b1_hopf_series(p, DIR4).value
    assert hopf_b1_galerkin(p, DIR4, N=32) == pytest.approx(series, rel=1e-3)


def test_galerkin_normal_form_neumann_closed_form():
    p = BrusselatorParams(0.1, 0.1, 2.0)
    assert hopf_b1_galerkin(p, NEU4, N=8) == pytest.approx(-32 * math.pi, rel=1e-9)


def test_sign_oracle_neumann_hopf():
    v = sign_of_b1_via_simulation(BrusselatorParams(1.0, 1.0, 2.0), DomainSpec.interval(math.pi, "neumann"))
    assert v.verdict is Sign.SUPERCRITICAL
    assert 1.4 <= v.amplitudes["ratio"] <= 2.9 and v.amplitudes["below"] < 1e-4


def test_sign_oracle_rejects_unknown_kind():
    from brusselator.errors import ValidationError
    with pytest.raises(ValidationError):
        sign_of_b1_via_simulation(BrusselatorParams(1.0, 1.0, 2.0), NEU4, kind="saddle")


def test_fd_zero_data():
    tr = fd_reintegrate(SimConfig(BrusselatorParams(*MU, 3.0, 9.0), NEU4, N=16, t_max=1.0))
    assert not tr.c1.any() and not tr.c2.any()


def test_fd_cycle_period_matches_galerkin():
    cfg = SimConfig(BrusselatorParams(1.0, 1.0, 2.0, 5.1), DomainSpec.interval(math.pi, "neumann"), N=4,
                    t_max=300.0, initial=InitialCondition.mode(1, 0.01, 0.0))
    g = detect_cycle(integrate(cfg), 1)
    f = detect_cycle(fd_reintegrate(cfg), 1)
    assert f.period == pytest.approx(g.period, rel=0.02)


def test_report_serialization():
    r = OracleReport.compare("x", 1.0, 1.0 + 1e-12, 1e-10)
    assert r.passed and isinstance(r.passed, bool)
    bad = OracleReport.residual("y", float("nan"), 1e-9)
    assert not bad.passed
    buf = io.StringIO()
    write_jsonl([r, bad], buf)
    lines = [json.loads(s) for s in buf.getvalue().splitlines()]
    assert lines[0]["quantity"] == "x" and lines[1]["oracle"] == "nan"
