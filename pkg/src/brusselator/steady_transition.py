"""Transition through a real eigenvalue (``lambda0 < lambda1``).

If the critical profile has a nonzero cube integral the reduced equation is
quadratic and the transition is mixed (Type-III). Otherwise the cubic
coefficient ``b1`` decides between a continuous (Type-I, ``b1 < 0``) and a
jump (Type-II, ``b1 > 0``) pitchfork. ``b1`` needs the second-order center
manifold correction ``psi``, obtained by inverting the linear operator on the
eigenmode expansion of ``e_k0^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .criticality import Regime, regime, steady_threshold
from .errors import DegenerateError, ResonanceError, ValidationError
from .model import BC, BrusselatorParams, DomainSpec
from .series import power_law_tail
from .spectrum import (
    EigenMode,
    eigenpair,
    growth_rates,
    mode_matrix,
    mode_table,
    product_integral,
)

CUBE_RTOL = 1e-12
B1_INCONCLUSIVE_RTOL = 1e-8
DENOM_ATOL = 1e-12
CLOSED_FORM_RTOL = 1e-8


class CubeCondition(str, Enum):
    NONZERO = "NonzeroCube"
    ZERO = "ZeroCube"


@dataclass(frozen=True)
class CubeVerdict:
    condition: CubeCondition
    value: float


def cubic_condition(mode: EigenMode) -> CubeVerdict:
    """Classify ``int e^3`` as zero or not, relative to the domain volume."""
    vol = float(np.prod(mode.lengths))
    cond = CubeCondition.ZERO if abs(mode.cube) <= CUBE_RTOL * vol else CubeCondition.NONZERO
    return CubeVerdict(cond, mode.cube)


def _critical_mode(p: BrusselatorParams, dom: DomainSpec, k0: int | None) -> EigenMode:
    if k0 is None:
        k0 = regime(p, dom).k0
    return eigenpair(k0, dom)


def _forcing(p: BrusselatorParams, mode: EigenMode) -> float:
    """Scalar ``c`` with ``L psi = -c (e^2, -e^2)``."""
    r = mode.rho
    return 2.0 * p.mu2**2 * r**2 * (p.mu1 * r + 1.0) / p.alpha


@dataclass(frozen=True)
class PsiSolution:
    """Mode coefficients of ``psi = sum_k (psi1_k, psi2_k) e_k``.

    ``weights`` are ``int e_k0^2 e_k``, so ``int psi_i e_k0^2 = sum psi_i,k w_k``.
    ``tail`` bounds what the truncated modes could add to those sums.
    """

    lambda0: float
    k0: int
    modes: tuple[EigenMode, ...]
    psi1: np.ndarray
    psi2: np.ndarray
    weights: np.ndarray
    residual: float
    tail: float
    method: str

    def psi_e2(self) -> tuple[float, float]:
        return float(self.psi1 @ self.weights), float(self.psi2 @ self.weights)

    def __call__(self, *coords):
        v1 = sum(c * m(*coords) for c, m in zip(self.psi1, self.modes))
        v2 = sum(c * m(*coords) for c, m in zip(self.psi2, self.modes))
        return np.asarray(v1), np.asarray(v2)


def _solve_blocks(p: BrusselatorParams, lam0: float, c: float, modes, coeffs, k0: int):
    """Solve ``M_k(lam0) psi_k = -c coef_k (1, -1)`` for every mode with nonzero coefficient."""
    pl = p.with_lambda(lam0)
    psi = np.zeros((len(modes), 2))
    res = 0.0
    scale = 0.0
    for i, (m, ck) in enumerate(zip(modes, coeffs)):
        if ck == 0.0:
            continue
        rhs = -c * ck * np.array([1.0, -1.0])
        mat = mode_matrix(pl, m.rho).matrix
        d = np.linalg.det(mat)
        if abs(d) <= 1e-12 * max(1.0, np.abs(mat).max() ** 2):
            raise ResonanceError(m.k, d)
        x = np.linalg.solve(mat, rhs)
        psi[i] = x
        res = max(res, float(np.abs(mat @ x - rhs).max()))
        scale = max(scale, float(np.abs(rhs).max()))
    return psi, res / scale if scale else 0.0


def psi_solve(p: BrusselatorParams, dom: DomainSpec, k0: int | None = None, K_psi: int = 512) -> PsiSolution:
    """Second-order center-manifold correction at ``lambda0`` for mode ``k0``.

    ``lambda0`` is evaluated from the threshold of mode ``k0`` itself (the
    ``lam`` field of ``p`` is ignored). On a 1D Neumann interval ``e_k0^2``
    involves just the constant mode and mode ``2 k0 - 1``, so two 2x2 solves
    are exact. Elsewhere the expansion is truncated at ``K_psi`` modes.
    """
    mode = _critical_mode(p, dom, k0)
    if mode.rho == 0:
        # the forcing carries rho^2, so psi vanishes identically
        zero = np.zeros(1)
        return PsiSolution(math.inf, mode.k, (mode,), zero, zero.copy(), np.zeros(1), 0.0, 0.0, "trivial")
    verdict = cubic_condition(mode)
    if verdict.condition is CubeCondition.NONZERO:
        raise ValidationError({"cube": f"int e^3 = {verdict.value:.6g} != 0: right-hand side not in range"})
    lam0 = float(steady_threshold(p, mode.rho))
    c = _forcing(p, mode)
    if dom.is_interval and dom.bc is BC.NEUMANN:
        modes = (eigenpair(1, dom), eigenpair(2 * mode.k - 1, dom))
        method = "two_mode"
    else:
        modes = tuple(mode_table(dom, K_psi))
        method = "galerkin"
    weights = np.array([product_integral((mode, mode, m)) for m in modes])
    # drop roundoff-level couplings so the unique-solution structure is exact
    wscale = max(np.abs(weights).max(), 1e-300)
    weights = np.where(np.abs(weights) <= 1e-13 * wscale, 0.0, weights)
    coeffs = np.array([w / m.normsq for w, m in zip(weights, modes)])
    for i, m in enumerate(modes):
        if m.k == mode.k:
            coeffs[i] = 0.0
            weights[i] = 0.0
    psi, res = _solve_blocks(p, lam0, c, modes, coeffs, mode.k)
    tail = 0.0
    if method == "galerkin":
        contrib = np.abs(psi[:, 0] * weights) + np.abs(psi[:, 1] * weights)
        rho = np.array([m.rho for m in modes])
        tail, _ = power_law_tail(np.sqrt(rho), contrib)
    return PsiSolution(lam0, mode.k, modes, psi[:, 0], psi[:, 1], weights, res, tail, method)


# ---------------------------------------------------------------------------
# cubic coefficient


@dataclass(frozen=True)
class B1Result:
    """Cubic coefficient with diagnostics.

    ``value`` is the coefficient from the projected center-manifold reduction
    using ``psi``. On 1D Neumann intervals ``closed_form`` is an independent
    algebraic evaluation of the same number; ``printed_variants`` holds two
    printed simplifications that are kept for comparison only.
    """

    value: float
    denominator: float
    numerator_terms: tuple[float, float, float]
    psi: PsiSolution
    inconclusive: bool
    closed_form: float | None = None
    printed_variants: dict[str, float] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def sign(self) -> int:
        return 0 if self.inconclusive else (1 if self.value > 0 else -1)


def neumann_b1_closed_form(p: BrusselatorParams, L: float, n0: int) -> float:
    """Exact two-mode evaluation on ``(0, L)`` with Neumann bc at wavenumber ``n0``."""
    mu1, mu2, a = p.mu1, p.mu2, p.alpha
    r = (n0 * math.pi / L) ** 2
    a2 = a * a
    S = a2 * (mu1 * r + 1) - mu2 * r * (mu2 * r + a2)
    P = mu2**2 * r**2 * (mu1 * r + 1)
    bracket = (mu2 * r + 3 * a2 / 8
               - mu2 * r * (8 * mu1 * mu2 * r * r + 8 * mu2 * r + 3 * a2) / (2 * (12 * mu1 * mu2 * r * r - 3 * a2)))
    return P * L / a * bracket / S


def neumann_b1_printed(p: BrusselatorParams, L: float, n0: int) -> dict[str, float]:
    """The two printed simplified forms, evaluated literally.

    ``expanded`` keeps the prefactor and the ``rho_j = 4 rho`` fraction;
    ``reduced`` is the shortened bracket. Neither matches the reduction.
    """
    mu1, mu2, a = p.mu1, p.mu2, p.alpha
    r = (n0 * math.pi / L) ** 2
    rj = 4 * r
    a2 = a * a
    lam0 = (mu1 * r + 1) * (mu2 * r + a2) / (mu2 * r)
    S = a2 * (mu1 * r + 1) - mu2 * r * (mu2 * r + a2)
    pre = mu2**2 * r**2 * (mu1 * r + 1) * L / a
    frac = ((a2 * (mu1 * rj + 1) * mu2 * r - 0.5 * (mu1 * r + 1) * (2 * mu2 * r + a2) * mu2 * rj)
            / ((mu1 * rj + 1) * (mu2 * rj + a2) - mu2 * rj * lam0))
    expanded = pre * (mu2 * r + 3 * a2 / 8 + frac) / S
    reduced = (mu2 * r + 3 * a2 / 8
               - mu2 * r * (4 * mu1 * mu2 * r * r + 4 * mu2 * r - 2 * a2 * mu1 * r + a2)
               / (12 * mu1 * mu2 * r * r - 3 * a2)) / S
    return {"expanded": expanded, "reduced": reduced}


def b1_steady(p: BrusselatorParams, dom: DomainSpec, k0: int | None = None, K_psi: int = 512,
              require_real_first: bool = True) -> B1Result:
    """Cubic coefficient of the reduced equation at ``lambda0``.

    ``b1 = [alpha P int e^4 - 2 alpha^2 mu2 rho int psi2 e^2
    - 2 (mu1 rho + 1)(2 mu2 rho + alpha^2) int psi1 e^2] / S``
    with ``P = mu2^2 rho^2 (mu1 rho + 1)`` and
    ``S = alpha^2 (mu1 rho + 1) - mu2 rho (mu2 rho + alpha^2)``. The reduced
    equation is then ``dy/dt = beta y + mu2 rho b1 y^3 / (alpha int e^2)``.
    """
    cn = regime(p, dom)
    if require_real_first:
        if cn.regime is Regime.DEGENERATE:
            raise DegenerateError("lambda0 == lambda1: codimension-two point")
        if cn.regime is not Regime.REAL_FIRST:
            raise ValidationError({"regime": f"steady transition needs lambda0 < lambda1, got {cn.regime.value}"})
    mode = _critical_mode(p, dom, k0)
    r = mode.rho
    a, a2 = p.alpha, p.alpha**2
    S = a2 * (p.mu1 * r + 1) - p.mu2 * r * (p.mu2 * r + a2)
    if abs(S) <= DENOM_ATOL:
        raise DegenerateError(f"degenerate normalization: denominator {S:.3e}")
    psi = psi_solve(p, dom, mode.k, K_psi)
    i1, i2 = psi.psi_e2()
    t0 = a * p.mu2**2 * r**2 * (p.mu1 * r + 1) * mode.quart
    t1 = -2 * a2 * p.mu2 * r * i2
    t2 = -2 * (p.mu1 * r + 1) * (2 * p.mu2 * r + a2) * i1
    value = (t0 + t1 + t2) / S
    scale = max(abs(t0), abs(t1), abs(t2)) / abs(S)
    inconclusive = abs(value) <= B1_INCONCLUSIVE_RTOL * scale
    closed = None
    printed: dict[str, float] = {}
    warnings: list[str] = []
    if dom.is_interval and dom.bc is BC.NEUMANN:
        n0 = mode.wavenumbers[0]
        closed = neumann_b1_closed_form(p, dom.L, n0)
        printed = neumann_b1_printed(p, dom.L, n0)
        if abs(closed - value) > CLOSED_FORM_RTOL * max(abs(closed), abs(value)):
            warnings.append(f"closed form {closed:.12g} disagrees with reduction {value:.12g}")
        for name, v in printed.items():
            if abs(v - value) > CLOSED_FORM_RTOL * max(abs(v), abs(value)):
                warnings.append(f"printed '{name}' form gives {v:.6g} vs {value:.6g}")
    if inconclusive:
        warnings.append("b1 is at noise level; refine before calling the type")
    return B1Result(value, S, (t0, t1, t2), psi, inconclusive, closed, printed, tuple(warnings))


# ---------------------------------------------------------------------------
# classification and branches


class SteadyKind(str, Enum):
    MIXED = "Mixed"
    PITCHFORK = "Pitchfork"


@dataclass(frozen=True)
class BranchExpansion:
    """Leading-order bifurcated steady states ``v = y(lam) xi e_k0``.

    ``law`` is ``"linear"`` (mixed case, ``y = C beta``) or ``"sqrt"``
    (pitchfork, ``y^2 = g beta`` with ``g = -alpha int e^2 / (mu2 rho b1)``).
    """

    law: str
    mode: EigenMode
    xi: np.ndarray
    xi_adj: np.ndarray
    constant: float
    lambda0: float
    params: BrusselatorParams
    b1: float | None = None

    def beta(self, lam: float) -> float:
        return growth_rates(mode_matrix(self.params.with_lambda(lam), self.mode.rho)).beta_plus.real

    def amplitude(self, lam: float) -> float:
        """Coefficient ``y`` of the (``+``) branch at ``lam``."""
        b = self.beta(lam)
        if self.law == "linear":
            return self.constant * b
        y2 = self.constant * b
        if y2 < 0 and abs(b) <= 1e-12 * max(1.0, abs(lam)):
            return 0.0  # at lambda0 up to roundoff
        if y2 < 0:
            side = "lambda > lambda0" if self.b1 < 0 else "lambda < lambda0"
            raise ValidationError({"lambda": f"pitchfork branches exist only for {side}"})
        return math.sqrt(y2)

    @property
    def C(self) -> float:
        """Constant in ``y = C beta`` or ``y = +-C sqrt(beta)`` (``nan`` if imaginary)."""
        if self.law == "linear":
            return self.constant
        return math.sqrt(self.constant) if self.constant >= 0 else math.nan

    def profile(self, *coords, lam: float, sign: int = 1):
        y = sign * self.amplitude(lam)
        e = self.mode(*coords)
        return y * self.xi[0] * e, y * self.xi[1] * e


def branch_expansion(p: BrusselatorParams, dom: DomainSpec, k0: int | None = None,
                     b1: float | None = None) -> BranchExpansion:
    mode = _critical_mode(p, dom, k0)
    r = mode.rho
    a, a2 = p.alpha, p.alpha**2
    lam0 = float(steady_threshold(p, r))
    xi = np.array([-p.mu2 * r, p.mu1 * r + 1.0])
    xi_adj = np.array([p.mu2 * r + a2, a2])
    verdict = cubic_condition(mode)
    if verdict.condition is CubeCondition.NONZERO:
        C = ((a * p.mu2 * r * (p.mu2 * r + a2) - a**3 * (p.mu1 * r + 1)) * mode.normsq
             / (2 * p.mu2**3 * r**3 * (p.mu1 * r + 1) * mode.cube))
        return BranchExpansion("linear", mode, xi, xi_adj, C, lam0, p)
    if b1 is None:
        b1 = b1_steady(p, dom, mode.k, require_real_first=False).value
    g = -a * mode.normsq / (p.mu2 * r * b1)
    return BranchExpansion("sqrt", mode, xi, xi_adj, g, lam0, p, b1)


@dataclass(frozen=True)
class SteadyTransitionReport:
    kind: SteadyKind
    type: str | None
    lambda0: float
    k0: int
    cube: CubeVerdict
    b1: B1Result | None
    expansion: BranchExpansion

    @property
    def continuous(self) -> bool | None:
        return {"I": True, "II": False}.get(self.type)


def classify_steady(p: BrusselatorParams, dom: DomainSpec, K_psi: int = 512) -> SteadyTransitionReport:
    """Classification: nonzero cube is Type-III, otherwise the sign of ``b1``."""
    cn = regime(p, dom)
    if cn.regime is Regime.DEGENERATE:
        raise DegenerateError("lambda0 == lambda1: codimension-two point")
    mode = eigenpair(cn.k0, dom)
    cube = cubic_condition(mode)
    if cube.condition is CubeCondition.NONZERO:
        exp = branch_expansion(p, dom, mode.k)
        return SteadyTransitionReport(SteadyKind.MIXED, "III", cn.lambda0, mode.k, cube, None, exp)
    b1 = b1_steady(p, dom, mode.k, K_psi)
    t = None if b1.inconclusive else ("I" if b1.value < 0 else "II")
    exp = branch_expansion(p, dom, mode.k, b1.value)
    return SteadyTransitionReport(SteadyKind.PITCHFORK, t, cn.lambda0, mode.k, cube, b1, exp)
