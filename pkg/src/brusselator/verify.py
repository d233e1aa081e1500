"""Verification suites that pit analytic results against independent oracles.

Each check is a module-level function returning a list of
:class:`~brusselator.oracle.OracleReport`, so suites can be spread over a
process pool while the output keeps a fixed order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .criticality import critical_lengths, lambda0_closed_form, lambda1, regime
from .errors import ValidationError
from .hopf_transition import b1_hopf_series, b_neumann, classify_hopf, sigma0
from .model import BC, BrusselatorParams, DomainSpec
from .oracle import (OracleReport, Sign, hopf_b1_galerkin, mode_thresholds, numeric_beta,
                     real_thresholds, scan_first_crossing, sign_of_b1_via_simulation, verify_psi)
from .simulate import InitialCondition, SimConfig, integrate, linear_growth_probe
from .spectrum import eigenpair, growth_rates, mode_matrix
from .steady_transition import classify_steady, psi_solve

EX_PARAMS = {
    "dirichlet_hopf": (2e-3, 4e-3, 2.0),
    "dirichlet_mixed": (2e-3, 4e-3, 3.0),
    "neumann_pitchfork": (2e-3, 4e-3, 3.0),
}
EX_BC = {"dirichlet_hopf": BC.DIRICHLET, "dirichlet_mixed": BC.DIRICHLET, "neumann_pitchfork": BC.NEUMANN}
EX_L = 4.0


def example(name: str, lam: float = 0.0) -> tuple[BrusselatorParams, DomainSpec]:
    """Parameters and domain of one of the three worked examples."""
    mu1, mu2, a = EX_PARAMS[name]
    return BrusselatorParams(mu1, mu2, a, lam), DomainSpec.interval(EX_L, EX_BC[name])


def _flag(quantity: str, analytic: bool, oracle: bool, detail: str = "") -> OracleReport:
    return OracleReport(quantity, float(analytic), float(oracle), 0.0 if analytic == oracle else 1.0, 0.0,
                        analytic == oracle, detail)


def _absolute(quantity: str, value: float, target: float, atol: float, detail: str = "") -> OracleReport:
    err = abs(value - target)
    return OracleReport(quantity, float(value), float(target), err, atol, err <= atol, detail or "absolute")


# ---------------------------------------------------------------------------
# worked examples


def check_mode_index() -> list[OracleReport]:
    out = []
    for name, k_expected in (("dirichlet_hopf", 34), ("dirichlet_mixed", 41)):
        p, dom = example(name)
        k = regime(p, dom).k0
        rho = (np.arange(1, 200) * math.pi / EX_L) ** 2
        k_oracle = int(np.argmin(real_thresholds(p, rho))) + 1
        out.append(OracleReport.compare(f"{name}.k0", k, k_expected, 0.0, "reference index"))
        out.append(OracleReport.compare(f"{name}.k0_bisection", k, k_oracle, 0.0, "numeric thresholds"))
    return out


def check_lambda0() -> list[OracleReport]:
    p, dom = example("neumann_pitchfork")
    cn = regime(p, dom)
    wn = cn.k0 - 1
    oracle = float(real_thresholds(p, np.array([(wn * math.pi / EX_L) ** 2]))[0])
    return [_absolute("neumann_pitchfork.lambda0_reference", cn.lambda0, 9.8, 0.1, "two-digit reference"),
            OracleReport.compare("neumann_pitchfork.lambda0", cn.lambda0, oracle, 1e-9,
                                 "bisection on eigenvalues"),
            OracleReport.compare("neumann_pitchfork.lambda0_closed_form", lambda0_closed_form(p, EX_L, wn), oracle,
                             1e-9)]


def _flip_length2(p: BrusselatorParams, bc: BC, wn: int, lo: float, hi: float) -> float:
    """``L^2`` where the fixed mode ``wn`` and the first mode cross together (numeric)."""
    rho1 = lambda L2: (0.0 if bc is BC.NEUMANN else math.pi**2 / L2)

    def f(L2):
        real = real_thresholds(p, np.array([wn**2 * math.pi**2 / L2]))[0]
        a2 = p.alpha**2
        # first mode loses stability through zero trace
        osc = (p.mu1 + p.mu2) * rho1(L2) + a2 + 1
        return real - osc

    return brentq(f, lo, hi, xtol=1e-13, rtol=1e-14)


def check_critical_lengths() -> list[OracleReport]:
    out = []
    cases = (("neumann_pitchfork", (11.06, 22.12), 0.01), ("dirichlet_mixed", (11.07, 22.14), 0.1))
    for name, reference, atol in cases:
        p, dom = example(name)
        cl = critical_lengths(p, dom.bc, 41)
        for i, (value, ref) in enumerate(zip(cl.values, reference)):
            out.append(_absolute(f"{name}.L2_c{i + 1}_reference", value, ref, atol))
        mid = 0.5 * (cl.values[0] + cl.values[1])
        oracle = (_flip_length2(p, dom.bc, 41, 0.5 * cl.values[0], mid),
                  _flip_length2(p, dom.bc, 41, mid, 2 * cl.values[1]))
        for i, (value, o) in enumerate(zip(cl.values, oracle)):
            out.append(_absolute(f"{name}.L2_c{i + 1}", value, o, 1e-3, "root of lambda0 - lambda1"))
    return out


def check_regimes() -> list[OracleReport]:
    out = []
    for name in ("dirichlet_hopf", "dirichlet_mixed", "neumann_pitchfork"):
        p, dom = example(name)
        cn = regime(p, dom)
        cr = scan_first_crossing(p, dom, np.linspace(0.5, 20.0, 40))
        out.append(_flag(f"{name}.real_first", cn.regime.value == "RealFirst", cr.kind == "real",
                         f"first crossing at {cr.lambda_c:.12g}, mode {cr.mode}"))
        out.append(OracleReport.compare(f"{name}.lambda_c", cn.lambda_c, cr.lambda_c, 1e-9))
    return out


def check_cube() -> list[OracleReport]:
    p, dom = example("dirichlet_mixed")
    rep = classify_steady(p, dom)
    val, _ = quad(lambda x: math.sin(41 * math.pi * x / EX_L) ** 3, 0, EX_L, limit=400)
    return [_flag("dirichlet_mixed.mixed", rep.kind.value == "Mixed", abs(val) > 1e-6, f"int e^3 = {val:.12g}"),
            OracleReport.compare("dirichlet_mixed.cube", rep.cube.value, val, 1e-9, "adaptive quadrature")]


def check_steady_b1() -> list[OracleReport]:
    p, dom = example("neumann_pitchfork")
    rep = classify_steady(p, dom)
    b1 = rep.b1
    return [_flag("neumann_pitchfork.b1_negative", b1.value < 0, True),
            OracleReport.compare("neumann_pitchfork.b1_closed_form", b1.value, b1.closed_form, 1e-8),
            verify_psi(b1.psi, p, dom)]


def check_hopf() -> list[OracleReport]:
    p, dom = example("dirichlet_hopf")
    rep = classify_hopf(p, dom)
    lam1 = lambda1(p, dom)
    beta = numeric_beta(mode_matrix(p.with_lambda(lam1), eigenpair(1, dom).rho))[0]
    pn = BrusselatorParams(2e-3, 4e-3, 2.0)
    dn = DomainSpec.interval(math.pi, BC.NEUMANN)
    s0 = sigma0(p, dom).sigma0
    return [OracleReport.compare("dirichlet_hopf.sigma0", s0, abs(beta.imag), 1e-12, "LAPACK eigenvalue"),
            _flag("dirichlet_hopf.type_I", rep.type == "I", True),
            OracleReport.compare("dirichlet_hopf.b1_galerkin", rep.b1, hopf_b1_galerkin(p, dom, N=48), 1e-3,
                                 "center-manifold computation on a Galerkin basis"),
            OracleReport.compare("neumann.b1", b_neumann(2.0), hopf_b1_galerkin(pn, dn, N=8), 1e-9)]


def check_sign_oracle(name: str) -> list[OracleReport]:
    p, dom = example(name)
    v = sign_of_b1_via_simulation(p, dom)
    return [_flag(f"{name}.supercritical_simulated", True, v.verdict is Sign.SUPERCRITICAL,
                  f"{v.verdict.value}, eps={v.eps:.3g}: {v.reason}")]


WORKED_EXAMPLES: tuple[Callable[[], list[OracleReport]], ...] = (
    check_mode_index, check_lambda0, check_critical_lengths, check_regimes, check_cube, check_steady_b1,
    check_hopf, partial(check_sign_oracle, "dirichlet_hopf"), partial(check_sign_oracle, "neumann_pitchfork"),
)


# ---------------------------------------------------------------------------
# randomized invariants


def inv_eigenvalues(seed: int, samples: int) -> list[OracleReport]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        p = BrusselatorParams(*10 ** rng.uniform(-3, 0, 2), 10 ** rng.uniform(-1, 1), rng.uniform(0, 20))
        m = mode_matrix(p, 10 ** rng.uniform(-2, 3))
        g = growth_rates(m)
        o = numeric_beta(m)
        scale = max(abs(o[0]), abs(o[1]))
        worst = max(worst, abs(g.beta_plus - o[0]) / scale, abs(g.beta_minus - o[1]) / scale)
    return [OracleReport.residual("invariant.growth_rates", worst, 1e-10, f"{samples} random blocks")]


def inv_thresholds(seed: int, samples: int) -> list[OracleReport]:
    rng = np.random.default_rng(seed + 1)
    worst_0 = worst_1 = 0.0
    for _ in range(samples):
        p = BrusselatorParams(*10 ** rng.uniform(-3, -1, 2), 10 ** rng.uniform(-0.5, 0.7))
        bc = BC.NEUMANN if rng.random() < 0.5 else BC.DIRICHLET
        dom = DomainSpec.interval(10 ** rng.uniform(-0.3, 1), bc)
        cn = regime(p, dom, Kmax=512)
        start = 1 if bc is BC.DIRICHLET else 0
        n = np.arange(start, start + 512)
        rho = (n * math.pi / dom.L) ** 2
        th = real_thresholds(p, rho[rho > 0])
        worst_0 = max(worst_0, abs(cn.lambda0 - th.min()) / cn.lambda0)
        lam1_oracle = cn.lambda1 if bc is BC.NEUMANN else float(mode_thresholds(p, rho[:1])[0])
        if bc is BC.DIRICHLET and lam1_oracle < cn.lambda1 * (1 - 1e-9):
            # mode 1 destabilizes through a real eigenvalue first; nothing to compare
            lam1_oracle = cn.lambda1
        worst_1 = max(worst_1, abs(cn.lambda1 - lam1_oracle) / cn.lambda1)
    return [OracleReport.residual("invariant.lambda0", worst_0, 1e-9, f"{samples} random cases"),
            OracleReport.residual("invariant.lambda1", worst_1, 1e-9, f"{samples} random cases")]


def inv_psi(seed: int, samples: int) -> list[OracleReport]:
    rng = np.random.default_rng(seed + 2)
    out = []
    for i in range(min(samples, 3)):
        p = BrusselatorParams(2e-3 * 10 ** rng.uniform(-0.3, 0), 4e-3 * 10 ** rng.uniform(0, 0.3),
                              rng.uniform(2.0, 4.0))
        dom = DomainSpec.interval(rng.uniform(3.5, 4.5), BC.NEUMANN)
        try:
            psi = psi_solve(p, dom)
        except ValidationError:
            continue
        r = verify_psi(psi, p, dom)
        out.append(OracleReport.residual(f"invariant.psi[{i}]", r.rel, r.tol, r.detail))
    return out


def inv_series_tail(seed: int, samples: int) -> list[OracleReport]:
    p, dom = example("dirichlet_hopf")
    a = b1_hopf_series(p, dom, K=256)
    b = b1_hopf_series(p, dom, K=1024)
    diff = abs(a.value - b.value)
    return [OracleReport("invariant.series_tail", float(a.value), float(b.value), diff, a.terms.tail_bound,
                         diff <= a.terms.tail_bound, "K=256 vs K=1024 within the tail bound")]


def inv_simulator(seed: int, samples: int) -> list[OracleReport]:
    p = BrusselatorParams(2e-3, 4e-3, 2.0, 5.1)
    dom = DomainSpec.interval(math.pi, BC.NEUMANN)
    ic = InitialCondition.mode(1, 1e-2, 0.0)
    coarse = integrate(SimConfig(p, dom, N=8, dt=0.02, t_max=20.0, initial=ic, sample_dt=0.04, subspace=(9, 0)))
    fine = integrate(SimConfig(p, dom, N=8, dt=0.01, t_max=20.0, initial=ic, sample_dt=0.04, subspace=(9, 0)))
    halving = float(np.abs(coarse.final - fine.final).max() / np.abs(fine.final).max())
    leak = float(np.abs(fine.final[:, 1:]).max())
    pl = p.with_lambda(4.0)
    g = linear_growth_probe(pl, dom, 1, pl.lam)
    exact = growth_rates(mode_matrix(pl, 0.0)).beta_plus
    return [OracleReport.residual("invariant.step_halving", halving, 1e-4, "ETDRK4, dt 0.02 vs 0.01"),
            OracleReport.residual("invariant.homogeneous_leakage", leak, 1e-12, "spatial modes stay 0"),
            OracleReport.compare("invariant.linear_growth", g.beta_plus, exact, 1e-6, "fitted eigenvalue")]


INVARIANT_CHECKS = (inv_eigenvalues, inv_thresholds, inv_psi, inv_series_tail, inv_simulator)

SUITES = ("paper-examples", "invariants", "all")


def suite_checks(name: str, seed: int = 0, samples: int = 200) -> list[Callable[[], list[OracleReport]]]:
    if name not in SUITES:
        raise ValidationError({"suite": f"unknown suite {name!r}; known suites: {', '.join(SUITES)}"})
    checks: list[Callable[[], list[OracleReport]]] = []
    if name in ("paper-examples", "all"):
        checks.extend(WORKED_EXAMPLES)
    if name in ("invariants", "all"):
        checks.extend(partial(c, seed, samples) for c in INVARIANT_CHECKS)
    return checks


def _call(check):
    return check()


def run_suite(name: str, jobs: int = 1, seed: int = 0, samples: int = 200) -> list[OracleReport]:
    """All reports of a suite, in declaration order regardless of ``jobs``."""
    checks = suite_checks(name, seed, samples)
    if jobs <= 1:
        results = [c() for c in checks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_call, checks))
    return [r for batch in results for r in batch]
