"""Critical parameter values, the critical mode and the regime map.

``lambda0`` is the smallest ``lam`` at which some mode matrix becomes
singular (a real eigenvalue crosses zero); ``lambda1`` is the value at which
the first mode has a purely imaginary pair. Whichever is smaller decides the
kind of the first transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import NoCriticalScale, ValidationError
from .model import BC, BrusselatorParams, DomainSpec
from .spectrum import Case, eigenvalues, growth_rates_array, hopf_sigma0_sq

DEGENERACY_RTOL = 1e-9
TIE_RTOL = 1e-12


class Regime(str, Enum):
    REAL_FIRST = "RealFirst"
    HOPF_FIRST = "HopfFirst"
    DEGENERATE = "Degenerate"


def steady_threshold(p: BrusselatorParams, rho):
    """``(mu1 rho + 1)(mu2 rho + alpha^2) / (mu2 rho)``, the lam at which mode rho goes singular."""
    rho = np.asarray(rho, dtype=float)
    with np.errstate(divide="ignore"):  # rho = 0 never destabilizes: inf
        return (p.mu1 * rho + 1.0) * (p.mu2 * rho + p.alpha**2) / (p.mu2 * rho)


def lambda1(p: BrusselatorParams, dom: DomainSpec) -> float:
    """``(mu1 + mu2) rho_1 + alpha^2 + 1``; Neumann gives ``alpha^2 + 1``."""
    rho1 = float(eigenvalues(dom, 1)[0])
    return (p.mu1 + p.mu2) * rho1 + p.alpha**2 + 1.0


def bracket_ratio(p: BrusselatorParams, L: float) -> float:
    """``x0 = alpha L^2 / (pi^2 sqrt(mu1 mu2))``, the continuous minimizer in ``n^2``."""
    return p.alpha * L**2 / (math.pi**2 * math.sqrt(p.mu1 * p.mu2))


def lambda0_closed_form(p: BrusselatorParams, L: float, n: int) -> float:
    """Threshold at wavenumber ``n`` on an interval, written out in ``n``."""
    x = n * n
    return (p.mu1 * x * math.pi**2 / L**2 + p.alpha**2 * L**2 / (p.mu2 * x * math.pi**2)
            + p.mu1 / p.mu2 * p.alpha**2 + 1.0)


def critical_wavenumbers_1d(p: BrusselatorParams, L: float) -> list[int]:
    """Integer wavenumber(s) minimizing the threshold on ``(0, L)``.

    The minimizer ``m`` or ``m + 1`` brackets ``sqrt(x0)``; both are returned
    when their thresholds coincide.
    """
    x0 = bracket_ratio(p, L)
    m = max(1, int(math.floor(math.sqrt(x0))))
    # floor(sqrt) can be off by one for huge x0 in floating point
    while m * m > x0 and m > 1:
        m -= 1
    while (m + 1) ** 2 <= x0:
        m += 1
    fm = lambda0_closed_form(p, L, m)
    fm1 = lambda0_closed_form(p, L, m + 1)
    if abs(fm - fm1) <= TIE_RTOL * max(abs(fm), abs(fm1)):
        return [m, m + 1]
    return [m] if fm < fm1 else [m + 1]


def _wavenumber_to_index(n: int, bc: BC) -> int:
    return n if bc is BC.DIRICHLET else n + 1


def lambda0_and_k0(p: BrusselatorParams, dom: DomainSpec, Kmax: int = 4096) -> tuple[float, list[int]]:
    """``lambda0`` and the minimizing mode index set (1-based mode indices).

    Intervals use the integer bracket around ``sqrt(x0)``. Boxes scan the
    first ``Kmax`` modes with ``rho > 0`` and refuse if the continuous
    minimizer ``rho* = alpha / sqrt(mu1 mu2)`` lies beyond the scan.
    """
    if dom.is_interval:
        ns = critical_wavenumbers_1d(p, dom.L)
        lam0 = min(lambda0_closed_form(p, dom.L, n) for n in ns)
        ks = [_wavenumber_to_index(n, dom.bc) for n in ns]
        if max(ks) > Kmax:
            raise ValidationError({"Kmax": f"critical mode {max(ks)} beyond scan Kmax={Kmax}; increase Kmax"})
        return lam0, ks
    rho = eigenvalues(dom, Kmax)
    rho_star = p.alpha / math.sqrt(p.mu1 * p.mu2)
    if rho[-1] <= rho_star:
        raise ValidationError({"Kmax": f"scan ends at rho={rho[-1]:.6g} below minimizer {rho_star:.6g}; increase Kmax"})
    pos = rho > 0
    f = np.full(rho.shape, np.inf)
    f[pos] = steady_threshold(p, rho[pos])
    lam0 = float(f.min())
    ks = [int(i) + 1 for i in np.nonzero(f <= lam0 * (1 + TIE_RTOL))[0]]
    return lam0, ks


@dataclass(frozen=True)
class CriticalNumbers:
    lambda0: float
    lambda1: float
    k0_set: tuple[int, ...]
    regime: Regime
    sigma0_sq: float
    rho1: float
    rho_k0: float

    @property
    def lambda_c(self) -> float:
        return min(self.lambda0, self.lambda1)

    @property
    def k0(self) -> int:
        """The unique critical index; ties must be resolved by the caller."""
        if len(self.k0_set) != 1:
            raise ValidationError({"k0": f"critical mode is not unique: {list(self.k0_set)}"})
        return self.k0_set[0]


def regime(p: BrusselatorParams, dom: DomainSpec, Kmax: int = 4096) -> CriticalNumbers:
    lam0, ks = lambda0_and_k0(p, dom, Kmax)
    lam1 = lambda1(p, dom)
    rho = eigenvalues(dom, max(ks))
    rho1 = float(rho[0])
    if abs(lam0 - lam1) <= DEGENERACY_RTOL * max(abs(lam0), abs(lam1)):
        reg = Regime.DEGENERATE
    elif lam0 < lam1:
        reg = Regime.REAL_FIRST
    else:
        reg = Regime.HOPF_FIRST
    return CriticalNumbers(lam0, lam1, tuple(ks), reg, hopf_sigma0_sq(p, rho1), rho1, float(rho[ks[0] - 1]))


# ---------------------------------------------------------------------------
# critical lengths


class LengthCase(str, Enum):
    DIRICHLET_MU1_GE_MU2 = "dirichlet_mu1_ge_mu2"
    DIRICHLET_MU1_LT_MU2 = "dirichlet_mu1_lt_mu2"
    NEUMANN_MU1_LT_MU2 = "neumann_mu1_lt_mu2"


@dataclass(frozen=True)
class CriticalLengths:
    """Squared critical lengths and the ``L^2`` interval where the real mode wins.

    ``real_first`` is ``(lo, hi)`` in ``L^2``; outside it the regime is
    HopfFirst. ``values`` has one entry (``L_c^2``) or two (lower, upper).
    """

    case: LengthCase
    k0: int
    values: tuple[float, ...]
    real_first: tuple[float, float]
    notes: tuple[str, ...] = field(default=())

    def regime_at(self, L: float) -> Regime:
        lo, hi = self.real_first
        return Regime.REAL_FIRST if lo < L * L < hi else Regime.HOPF_FIRST


def critical_lengths(p: BrusselatorParams, bc: "BC | str", k0: int = 1) -> CriticalLengths:
    """Lengths at which ``lambda0 = lambda1`` for a fixed critical wavenumber.

    ``k0`` is the wavenumber of the critical mode (for Neumann this is the
    mode index minus one). Raises :class:`NoCriticalScale` when no real
    length exists, in which case the regime is HopfFirst for every L.
    """
    bc = BC.parse(bc)
    mu1, mu2, a = p.mu1, p.mu2, p.alpha
    pi2 = math.pi**2
    if bc is BC.DIRICHLET and mu1 >= mu2:
        Lc2 = pi2 / (2 * a) * (math.sqrt((mu1 - mu2) ** 2 * a * a + 4 * mu2 * mu2) - a * (mu1 - mu2))
        notes = ()
        if Lc2 > 2 * pi2 * math.sqrt(mu1 * mu2) / a * (1 + 1e-12):
            notes = ("L_c exceeds the k0=1 bracket; the length was derived assuming k0=1",)
        return CriticalLengths(LengthCase.DIRICHLET_MU1_GE_MU2, 1, (Lc2,), (0.0, Lc2), notes)
    if bc is BC.NEUMANN and mu1 >= mu2:
        raise NoCriticalScale("Neumann with mu1 >= mu2: lambda1 < lambda0 for every L and alpha")
    k2 = float(k0) ** 2
    if bc is BC.DIRICHLET:
        inner = 4 * mu2 / k2 * (k2 * mu1 - mu1 - mu2)
        disc = (mu2 - mu1) ** 2 * a * a - inner
        if disc < 0:
            raise NoCriticalScale("negative discriminant: no real critical scale; regime is HopfFirst for all L")
        lo = k2 * pi2 / (2 * a) * ((mu2 - mu1) * a - math.sqrt(disc))
        hi = k2 * pi2 / (2 * a) * ((mu2 - mu1) * a + math.sqrt(disc))
        if k2 * mu1 <= mu1 + mu2:
            # the lower root is not positive: real-first on the whole (0, L_c2)
            return CriticalLengths(LengthCase.DIRICHLET_MU1_LT_MU2, k0, (lo, hi), (0.0, hi),
                                   ("lower root non-positive",))
        return CriticalLengths(LengthCase.DIRICHLET_MU1_LT_MU2, k0, (lo, hi), (lo, hi))
    disc = (mu2 - mu1) ** 2 * a * a - 4 * mu1 * mu2
    if disc < 0:
        raise NoCriticalScale("negative discriminant: no real critical scale; regime is HopfFirst for all L")
    lo = k2 * pi2 / (2 * a) * ((mu2 - mu1) * a - math.sqrt(disc))
    hi = k2 * pi2 / (2 * a) * ((mu2 - mu1) * a + math.sqrt(disc))
    return CriticalLengths(LengthCase.NEUMANN_MU1_LT_MU2, k0, (lo, hi), (lo, hi))


def regime_flip_length(p: BrusselatorParams, bc: "BC | str", L_lo: float, L_hi: float,
                       tol: float = 1e-9, Kmax: int = 4096) -> tuple[float, float]:
    """Bisect on ``L`` for a change of regime; returns the final bracket.

    The regime at each trial length comes from the full ``lambda0``/``lambda1``
    computation, so the result checks the closed-form critical lengths.
    """
    bc = BC.parse(bc)

    def gap(L: float) -> float:
        # raw sign of lambda0 - lambda1; the tie band would stop short of the crossing
        cn = regime(p, DomainSpec.interval(L, bc), Kmax)
        return cn.lambda0 - cn.lambda1

    g_lo, g_hi = gap(L_lo), gap(L_hi)
    if g_lo * g_hi > 0:
        name = (Regime.REAL_FIRST if g_lo < 0 else Regime.HOPF_FIRST).value
        raise ValidationError({"L": f"no regime change in [{L_lo}, {L_hi}] (both {name})"})
    a, b = L_lo, L_hi
    while b - a > tol and g_lo != 0 and g_hi != 0:
        mid = 0.5 * (a + b)
        g = gap(mid)
        if g == 0:
            return mid, mid
        if (g < 0) == (g_lo < 0):
            a, g_lo = mid, g
        else:
            b, g_hi = mid, g
    return (a, a) if g_lo == 0 else (b, b) if g_hi == 0 else (a, b)


# ---------------------------------------------------------------------------
# principle of exchange of stabilities


@dataclass(frozen=True)
class PESVerdict:
    passed: bool
    degenerate: bool
    which: Case
    lambda_c: float
    critical_mode: int
    below: float
    above: float
    offending_mode: int | None = None
    offending_value: float | None = None

    @property
    def label(self) -> str:
        if self.degenerate:
            return "Degenerate"
        return "pass" if self.passed else "fail"


def pes_check(p: BrusselatorParams, dom: DomainSpec, which: "Case | str | None" = None,
              eps: float | None = None, Kscan: int | None = None) -> PESVerdict:
    """Check the sign pattern of the spectrum around the critical value.

    The critical eigenvalue (or real part of the critical pair) must be
    negative at ``lam_c - eps`` and positive at ``lam_c + eps``, while every
    other scanned eigenvalue keeps a negative real part at ``lam_c``.
    """
    cn = regime(p, dom)
    if which is None:
        which = Case.HOPF if cn.regime is Regime.HOPF_FIRST else Case.REAL
    which = Case(which)
    if which is Case.REAL:
        lam_c, crit = cn.lambda0, cn.k0_set[0]
    else:
        lam_c, crit = cn.lambda1, 1
    eps = 1e-4 * lam_c if eps is None else eps
    K = Kscan or max(256, 4 * max(cn.k0_set) + 64)
    rho = eigenvalues(dom, K)

    def top_real(lam: float) -> np.ndarray:
        bp, _, _ = growth_rates_array(p.with_lambda(lam), rho)
        return bp.real

    below = float(top_real(lam_c - eps)[crit - 1])
    above = float(top_real(lam_c + eps)[crit - 1])
    at = top_real(lam_c)
    if which is Case.HOPF:
        bp, bm, is_c = growth_rates_array(p.with_lambda(lam_c), rho)
        if not is_c[0]:
            return PESVerdict(False, False, which, lam_c, crit, below, above, 1, float(bp[0].real))
    degenerate = cn.regime is Regime.DEGENERATE
    if degenerate:
        return PESVerdict(False, True, which, lam_c, crit, below, above)
    others = np.delete(at, crit - 1)
    idx = np.delete(np.arange(1, K + 1), crit - 1)
    bad = np.nonzero(others >= 0)[0]
    crossing_ok = below < 0 < above
    if bad.size:
        j = int(bad[0])
        return PESVerdict(False, False, which, lam_c, crit, below, above, int(idx[j]), float(others[j]))
    if not crossing_ok:
        return PESVerdict(False, False, which, lam_c, crit, below, above, crit, float(at[crit - 1]))
    return PESVerdict(True, False, which, lam_c, crit, below, above)
