"""Transition through a complex pair (``lambda1 < lambda0``).

The first mode carries a pair ``+- i sigma0`` at ``lambda1``. The sign of the
cubic coefficient ``b1`` of the reduced planar system decides between a
supercritical (Type-I, ``b1 < 0``) and a subcritical (Type-II, ``b1 > 0``)
Hopf bifurcation. ``b1`` is normalized so that the amplitude equation reads
``dr/dt = gamma r + b1 r^3 / (2 pi)`` with ``gamma = (lam - lambda1)/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .criticality import Regime, lambda1 as lambda1_value, regime
from .errors import DegenerateError, ResonanceError, ValidationError
from .model import BC, BrusselatorParams, DomainSpec
from .series import power_law_tail
from .spectrum import (
    Case,
    EigenMode,
    critical_eigenvectors,
    eigenpair,
    hopf_sigma0_sq,
    mode_matrices,
    mode_table,
    product_integral,
)

DEFAULT_K = 512
VARIANT_RTOL = 1e-3


@dataclass(frozen=True)
class HopfFrequency:
    sigma0: float
    source: str

    @property
    def period(self) -> float:
        return 2 * math.pi / self.sigma0


def sigma0(p: BrusselatorParams, dom: DomainSpec) -> HopfFrequency:
    """Frequency of the critical pair at ``lambda1``; exactly ``alpha`` for Neumann."""
    if dom.bc is BC.NEUMANN:
        return HopfFrequency(p.alpha, "neumann")
    s2 = hopf_sigma0_sq(p, eigenpair(1, dom).rho)
    if s2 <= 0:
        raise ValidationError({"sigma0": f"not a Hopf crossing: sigma0^2 = {s2:.6g} <= 0"})
    return HopfFrequency(math.sqrt(s2), "dirichlet")


def b_neumann(alpha: float) -> float:
    """``-pi alpha^2 (2 + 3 alpha^2 / 2)``; negative for every ``alpha``."""
    if not alpha > 0:
        raise ValidationError({"alpha": f"must be > 0, got {alpha}"})
    return -math.pi * alpha**2 * (2.0 + 1.5 * alpha**2)


# ---------------------------------------------------------------------------
# planar normal form (exact when the critical eigenspace is invariant)


def _pmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
    for i, j in zip(*np.nonzero(a)):
        out[i:i + b.shape[0], j:j + b.shape[1]] += a[i, j] * b
    return out


def _linear_poly(cx: float, cy: float) -> np.ndarray:
    """Coefficient array ``P[i, j]`` of ``x^i y^j`` for ``cx x + cy y``."""
    poly = np.zeros((2, 2))
    poly[1, 0] = cx
    poly[0, 1] = cy
    return poly


def planar_hopf_coefficient(f: np.ndarray, g: np.ndarray, omega: float) -> float:
    """``2 pi Re c1`` for ``x' = -omega y + f``, ``y' = omega x + g``.

    ``f`` and ``g`` are coefficient arrays (``[i, j]`` multiplies ``x^i y^j``)
    of the quadratic and cubic terms.
    """
    def c(P, i, j):
        return P[i, j] if i < P.shape[0] and j < P.shape[1] else 0.0

    fxx, fxy, fyy = 2 * c(f, 2, 0), c(f, 1, 1), 2 * c(f, 0, 2)
    gxx, gxy, gyy = 2 * c(g, 2, 0), c(g, 1, 1), 2 * c(g, 0, 2)
    fxxx, fxyy = 6 * c(f, 3, 0), 2 * c(f, 1, 2)
    gxxy, gyyy = 2 * c(g, 2, 1), 6 * c(g, 0, 3)
    a = ((fxxx + fxyy + gxxy + gyyy) / 16.0
         + (fxy * (fxx + fyy) - gxy * (gxx + gyy) - fxx * gxx + fyy * gyy) / (16.0 * omega))
    return 2 * math.pi * a


def planar_hopf_b1(p: BrusselatorParams, dom: DomainSpec) -> float:
    """Cubic coefficient from the projected planar system, ignoring slaved modes.

    Exact on Neumann domains, where constants form an invariant subspace.
    """
    pc = p.with_lambda(lambda1_value(p, dom))
    mode = eigenpair(1, dom)
    ev = critical_eigenvectors(pc, mode, Case.HOPF)
    q = 2 * pc.lam / pc.alpha
    u1 = _linear_poly(ev.xi[0], ev.eta[0])
    u2 = _linear_poly(ev.xi[1], ev.eta[1])
    quad = q * _pmul(u1, u1) + 2 * pc.alpha * _pmul(u1, u2)
    cub = _pmul(_pmul(u1, u1), u2)
    e2, e3, e4 = mode.normsq, mode.cube, mode.quart
    G = np.zeros((4, 4))
    G[:quad.shape[0], :quad.shape[1]] += quad * e3
    G[:cub.shape[0], :cub.shape[1]] += cub * e4
    # second component is -G
    f = G * (ev.xi_adj[0] - ev.xi_adj[1]) / (ev.xi @ ev.xi_adj * e2)
    g = G * (ev.eta_adj[0] - ev.eta_adj[1]) / (ev.eta @ ev.eta_adj * e2)
    return planar_hopf_coefficient(f, g, ev.sigma0)


# ---------------------------------------------------------------------------
# series coefficient


class Delta0(str, Enum):
    """Reading of the otherwise undefined constant in the B1 coefficient."""

    SIGMA0_SQ = "sigma0_sq"
    SIGMA0 = "sigma0"


@dataclass(frozen=True)
class HopfSeriesTerms:
    """Per-mode ingredients of the series and the six partial sums."""

    k: np.ndarray
    weight: np.ndarray
    D: np.ndarray
    Q: np.ndarray
    det_M: np.ndarray
    det_M2: np.ndarray
    sums: dict[str, float]
    b1_terms: np.ndarray
    K: int
    tail_bound: float
    decay_exponent: float

    def partial_sum(self, n_terms: int) -> float:
        """Head constant plus the first ``n_terms`` contributions to ``b1``."""
        return float(self.sums["head"] + self.b1_terms[:n_terms].sum())


@dataclass(frozen=True)
class HopfB1Result:
    value: float
    delta0: Delta0
    variants: dict[str, float]
    terms: HopfSeriesTerms
    warnings: tuple[str, ...] = ()


def _series_modes(dom: DomainSpec, K: int) -> tuple[EigenMode, list[EigenMode], np.ndarray]:
    e1 = eigenpair(1, dom)
    if dom.is_interval:
        if dom.bc is BC.DIRICHLET:
            ks = range(3, 2 * K + 2, 2)  # even modes have zero coupling
        else:
            ks = range(2, K + 2)
        modes = [eigenpair(k, dom) for k in ks]
    else:
        table = mode_table(dom, 1 + 8 * K)
        modes = []
        for m in table[1:]:
            if len(modes) == K:
                break
            if abs(product_integral((e1, e1, m))) > 1e-14 * dom.volume:
                modes.append(m)
    w = np.array([product_integral((e1, e1, m)) ** 2 / m.normsq for m in modes]) if modes else np.zeros(0)
    return e1, modes, w


def b1_hopf_series(p: BrusselatorParams, dom: DomainSpec, K: int = DEFAULT_K,
                   delta0: "Delta0 | str" = Delta0.SIGMA0_SQ,
                   require_hopf_first: bool = True) -> HopfB1Result:
    """Series form of the Hopf cubic coefficient.

    The ``K`` modes with nonzero coupling ``int e1^2 e_k`` enter through
    ``det M_k``, ``det(M_k^2 + 4 sigma0^2 I)``, ``D_k`` and ``Q_k`` and are
    combined into ``B_i``, ``C_i`` and ``A_i = (2 lambda1 - mu2 rho1 -
    alpha^2) B_i + alpha^2 C_i``. Both readings of the constant next to
    ``B1`` are evaluated; ``delta0`` picks the reported one. On 1D Dirichlet
    intervals the shortened printed variant is also evaluated.
    """
    delta0 = Delta0(delta0)
    if K < 1:
        raise ValidationError({"K": f"must be >= 1, got {K}"})
    if require_hopf_first:
        cn = regime(p, dom)
        if cn.regime is Regime.DEGENERATE:
            raise DegenerateError("lambda0 == lambda1: codimension-two point")
        if cn.regime is not Regime.HOPF_FIRST:
            raise ValidationError({"regime": f"Hopf transition needs lambda1 < lambda0, got {cn.regime.value}"})
    mu1, mu2, a = p.mu1, p.mu2, p.alpha
    a2 = a * a
    lam1 = lambda1_value(p, dom)
    e1, modes, w = _series_modes(dom, K)
    r1 = e1.rho
    s2 = hopf_sigma0_sq(p, r1)
    if s2 <= 0:
        raise ValidationError({"sigma0": f"not a Hopf crossing: sigma0^2 = {s2:.6g} <= 0"})
    s = math.sqrt(s2)
    rk = np.array([m.rho for m in modes])
    kk = np.array([m.k for m in modes])
    M = mode_matrices(p.with_lambda(lam1), rk)
    detM = M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    detQ = np.linalg.det(M @ M + 4 * s2 * np.eye(2)) if len(modes) else np.zeros(0)
    for det, what in ((detM, "det M_k"), (detQ, "det(M_k^2 + 4 sigma0^2)")):
        bad = np.nonzero(np.abs(det) <= 1e-12 * np.maximum(1.0, np.abs(M).max(axis=(1, 2)) ** 2))[0]
        if bad.size:
            raise ResonanceError(int(kk[bad[0]]), float(det[bad[0]]), what)
    D = (mu2 * rk + a2) ** 2 + 4 * s2 - a2 * (mu1 + mu2) * rk - a2 * (a2 + 1)
    Q = lam1 * a2 - lam1 * (mu1 + mu2) * (rk - r1) - (mu1 * rk + 1 - lam1) ** 2 - 4 * s2
    tB1 = mu2 * rk * w / detM
    tB2 = w / (detM * detQ) * ((mu2 * rk + a2) * D + a2 * Q)
    tB3 = w / detQ * D
    tC1 = -(mu1 * r1 + 1) * w / detM
    tC2 = w / (detM * detQ) * ((mu1 * rk + 1 - lam1) * Q - lam1 * D)
    tC3 = w / detQ * Q
    cA = 2 * lam1 - mu2 * r1 - a2
    e2, e3, e4 = e1.normsq, e1.cube, e1.quart
    head = (2 * math.pi * a2 * e3**2 / (s2 * e2**2) * (mu1 * r1 + 1)
            * (mu2**2 * r1**2 + 2 * mu2 * r1 * (mu1 * r1 + 1) - s2)
            - math.pi * a2 * e4 / (2 * e2) * (2 * mu2 * r1 + 3 * a2))
    k1 = 2 * math.pi * a2 / e2
    k2 = 8 * math.pi * a2 * s2 / e2
    k3 = 4 * math.pi * a2 / e2
    cA1 = k1 * (3 * mu1 * r1 + mu2 * r1 + 3)
    cA2 = -k2 * (mu1 * r1 + mu2 * r1 + 1)
    cB2 = k2 * (mu1 * mu2 * r1**2 + mu2 * r1 - s)
    cA3 = -k3 * (mu1 * mu2 * r1**2 + mu2 * r1 - s2)
    cB3 = -k3 * s2 * (mu1 * r1 + mu2 * r1 + 1)

    def combine(d0: float, b2_scale: float = 1.0) -> np.ndarray:
        cB1 = k1 * (mu1 * mu2 * r1**2 + mu2 * r1 + d0)
        return (cA1 * (cA * tB1 + a2 * tC1) + cB1 * tB1
                + cA2 * (cA * b2_scale * tB2 + a2 * tC2) + cB2 * b2_scale * tB2
                + cA3 * (cA * tB3 + a2 * tC3) + cB3 * tB3)

    chosen = s2 if delta0 is Delta0.SIGMA0_SQ else s
    per_k = combine(chosen)
    value = head + float(per_k.sum())
    variants = {
        "delta0=sigma0_sq": head + float(combine(s2).sum()),
        "delta0=sigma0": head + float(combine(s).sum()),
    }
    warnings: list[str] = []
    if dom.is_interval and dom.bc is BC.DIRICHLET:
        # shortened printed form: identical except for a 33/32 factor on B2
        variants["reduced_1d"] = head + float(combine(s, 33.0 / 32.0).sum())
        if abs(variants["reduced_1d"] - value) > VARIANT_RTOL * abs(value):
            warnings.append(f"reduced 1D form gives {variants['reduced_1d']:.6g} vs {value:.6g}")
    sums = {
        "head": head, "B1": float(tB1.sum()), "B2": float(tB2.sum()), "B3": float(tB3.sum()),
        "C1": float(tC1.sum()), "C2": float(tC2.sum()), "C3": float(tC3.sum()),
    }
    for i in (1, 2, 3):
        sums[f"A{i}"] = cA * sums[f"B{i}"] + a2 * sums[f"C{i}"]
    if per_k.size:
        tail, pexp = power_law_tail(np.sqrt(rk), per_k)
    else:
        tail, pexp = 0.0, math.inf
    terms = HopfSeriesTerms(kk, w, D, Q, detM, detQ, sums, per_k, len(modes), tail, pexp)
    return HopfB1Result(value, delta0, variants, terms, tuple(warnings))


def large_length_limit(alpha: float, n_terms: int = 100000) -> float:
    """Limit of the series coefficient on ``(0, L)`` Dirichlet as ``L -> inf``.

    ``-2 pi alpha^2 [64/(9 pi^2) + 9 alpha^2/16 + 64 E]`` with
    ``E = sum_k 1/(pi^2 (2k+1)^2 ((2k+1)^2 - 4)^2)``.
    """
    j = 2 * np.arange(1, n_terms + 1, dtype=float) + 1
    E = float(np.sum(1.0 / (math.pi**2 * j**2 * (j**2 - 4) ** 2)))
    return -2 * math.pi * alpha**2 * (64 / (9 * math.pi**2) + 9 * alpha**2 / 16 + 64 * E)


def b1_sign_changes(p: BrusselatorParams, lengths: np.ndarray, K: int = 256, tol: float = 1e-8,
                    bc: "BC | str" = BC.DIRICHLET) -> list[tuple[float, float]]:
    """All sign changes of the series coefficient along a grid of lengths, bisected to ``tol``."""
    bc = BC.parse(bc)

    def f(L: float) -> float:
        return b1_hopf_series(p, DomainSpec.interval(L, bc), K, require_hopf_first=False).value

    lengths = np.asarray(lengths, dtype=float)
    vals = [f(L) for L in lengths]
    out = []
    for (La, fa), (Lb, fb) in zip(zip(lengths, vals), zip(lengths[1:], vals[1:])):
        if np.sign(fa) == np.sign(fb):
            continue
        lo, hi, flo = La, Lb, fa
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if np.sign(fm) == np.sign(flo):
                lo, flo = mid, fm
            else:
                hi = mid
        out.append((lo, hi))
    return out


# ---------------------------------------------------------------------------
# classification and orbit


@dataclass(frozen=True)
class PeriodicOrbit:
    """Leading-order periodic solution ``v(x, t)``.

    ``radius`` solves ``gamma + b1 r^2 / (2 pi) = 0``. The printed
    amplitude formulas are kept in ``printed`` for comparison; they omit the
    ``sqrt(pi)`` that this normalization of ``b1`` carries.
    """

    sigma0: float
    gamma: float
    b1: float
    radius: float
    amp_v1: float
    amp_v2: float
    theta: float
    mode: EigenMode
    printed: dict[str, float] = field(default_factory=dict)

    @property
    def period(self) -> float:
        return 2 * math.pi / self.sigma0

    def __call__(self, x, t):
        e = self.mode(x)
        t = np.asarray(t, dtype=float)
        v1 = self.amp_v1 * e * np.sin(self.sigma0 * t + math.pi / 4)
        v2 = self.amp_v2 * e * np.cos(self.sigma0 * t + self.theta)
        return v1, v2


def periodic_expansion(p: BrusselatorParams, dom: DomainSpec, b1: float | None = None,
                       lam: float | None = None) -> PeriodicOrbit:
    """Bifurcated cycle at ``lam`` (``p.lam`` if not given)."""
    lam = p.lam if lam is None else lam
    lam1 = lambda1_value(p, dom)
    if b1 is None:
        b1 = b_neumann(p.alpha) if dom.bc is BC.NEUMANN else b1_hopf_series(p, dom).value
    gamma = 0.5 * (lam - lam1)
    if b1 == 0:
        raise DegenerateError("b1 = 0: the cubic coefficient does not decide the type")
    ratio = -gamma / b1
    if ratio < 0:
        side = "lambda > lambda1 (Type-I)" if b1 < 0 else "lambda < lambda1 (Type-II)"
        raise ValidationError({"lambda": f"periodic orbit exists only for {side}"})
    mode = eigenpair(1, dom)
    s = sigma0(p, dom).sigma0
    c = p.mu2 * mode.rho + p.alpha**2
    r = math.sqrt(2 * math.pi * ratio)
    amp1 = math.sqrt(2.0) * p.alpha**2 * r
    amp2 = math.sqrt(2 * (s * s + c * c)) * r
    theta = math.atan2(s + c, s - c)
    printed = {"amp_v1": 2 * p.alpha**2 * math.sqrt(ratio)}
    if dom.bc is BC.NEUMANN:
        printed["amp_v2"] = math.sqrt(ratio) * p.alpha * math.sqrt(2 * (p.alpha**2 + 1))
    else:
        printed["amp_v2"] = 2 * (s * s + c * c) * math.sqrt(ratio)
    printed["theta"] = math.atan((s + c) / (s - c)) if s != c else math.pi / 2
    return PeriodicOrbit(s, gamma, b1, r, amp1, amp2, theta, mode, printed)


@dataclass(frozen=True)
class HopfTransitionReport:
    type: str | None
    lambda1: float
    frequency: HopfFrequency
    b1: float
    series: HopfB1Result | None
    warnings: tuple[str, ...] = ()

    @property
    def supercritical(self) -> bool | None:
        return {"I": True, "II": False}.get(self.type)


def classify_hopf(p: BrusselatorParams, dom: DomainSpec, K: int = DEFAULT_K,
                  delta0: "Delta0 | str" = Delta0.SIGMA0_SQ) -> HopfTransitionReport:
    cn = regime(p, dom)
    if cn.regime is Regime.DEGENERATE:
        raise DegenerateError("lambda0 == lambda1: codimension-two point")
    if cn.regime is not Regime.HOPF_FIRST:
        raise ValidationError({"regime": f"Hopf transition needs lambda1 < lambda0, got {cn.regime.value}"})
    freq = sigma0(p, dom)
    if dom.bc is BC.NEUMANN:
        b1 = b_neumann(p.alpha)
        return HopfTransitionReport("I", cn.lambda1, freq, b1, None)
    res = b1_hopf_series(p, dom, K, delta0)
    vals = list(res.variants.values())
    warnings = list(res.warnings)
    if len({np.sign(v) for v in vals}) > 1:
        warnings.append("series variants disagree on the sign of b1; defer to the simulation oracle")
        t = None
    elif res.value == 0:
        t = None
    else:
        t = "I" if res.value < 0 else "II"
    return HopfTransitionReport(t, cn.lambda1, freq, res.value, res, tuple(warnings))
