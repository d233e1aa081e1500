"""Laplacian eigenpairs and the per-mode 2x2 linearization.

On an interval or box every eigenfunction is a product of sines (Dirichlet)
or cosines (Neumann), so all integrals of products of modes are computed
exactly from the exponential expansion of each factor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .model import BC, BrusselatorParams, DomainSpec


# ---------------------------------------------------------------------------
# exact trigonometric product integrals


def _exp_integral(m: int, L: float) -> complex:
    """``int_0^L exp(i m pi x / L) dx``."""
    if m == 0:
        return complex(L)
    return L * ((-1) ** (m % 2) - 1) / (1j * m * math.pi)


def trig_product_integral(kinds: "tuple[str, ...]", wavenumbers: "tuple[int, ...]", L: float) -> float:
    """Exact ``int_0^L prod_j f_j(n_j pi x / L) dx`` with ``f_j`` in {sin, cos}.

    Each factor is expanded into two exponentials, so the cost is
    ``2**len(kinds)`` elementary integrals.
    """
    terms: dict[int, complex] = {0: 1.0 + 0.0j}
    for kind, n in zip(kinds, wavenumbers):
        if kind == "sin":
            pair = ((n, 1 / 2j), (-n, -1 / 2j))
        elif kind == "cos":
            pair = ((n, 0.5), (-n, 0.5))
        else:
            raise ValueError(f"unknown factor {kind!r}")
        nxt: dict[int, complex] = {}
        for m, c in terms.items():
            for dn, dc in pair:
                nxt[m + dn] = nxt.get(m + dn, 0.0) + c * dc
        terms = nxt
    total = sum(c * _exp_integral(m, L) for m, c in terms.items() if c != 0)
    return float(total.real)


# ---------------------------------------------------------------------------
# eigenpairs


@dataclass(frozen=True)
class EigenMode:
    """One Laplacian eigenpair on an interval or box.

    ``wavenumbers`` holds the integer ``n_i`` per axis; the profile is
    ``prod_i sin(n_i pi x_i / L_i)`` (Dirichlet) or the cosine analogue.
    """

    k: int
    rho: float
    wavenumbers: tuple[int, ...]
    lengths: tuple[float, ...]
    bc: BC
    normsq: float = field(default=0.0)
    cube: float = field(default=0.0)
    quart: float = field(default=0.0)

    @property
    def kind(self) -> str:
        return "sin" if self.bc is BC.DIRICHLET else "cos"

    def __call__(self, *coords) -> np.ndarray:
        """Evaluate the profile; pass one coordinate array per axis."""
        fn = np.sin if self.bc is BC.DIRICHLET else np.cos
        out = np.ones(np.broadcast(*coords).shape)
        for x, n, L in zip(coords, self.wavenumbers, self.lengths):
            out = out * fn(n * np.pi * np.asarray(x, dtype=float) / L)
        return out


def product_integral(modes: "list[EigenMode] | tuple[EigenMode, ...]") -> float:
    """Exact integral over the domain of the product of the given modes."""
    first = modes[0]
    total = 1.0
    for axis, L in enumerate(first.lengths):
        kinds = tuple(m.kind for m in modes)
        ns = tuple(m.wavenumbers[axis] for m in modes)
        total *= trig_product_integral(kinds, ns, L)
    return total


def _make_mode(k: int, ns: tuple[int, ...], dom: DomainSpec) -> EigenMode:
    rho = sum((n * math.pi / L) ** 2 for n, L in zip(ns, dom.lengths))
    bare = EigenMode(k, rho, ns, dom.lengths, dom.bc)
    return EigenMode(
        k, rho, ns, dom.lengths, dom.bc,
        normsq=product_integral((bare, bare)),
        cube=product_integral((bare,) * 3),
        quart=product_integral((bare,) * 4),
    )


@lru_cache(maxsize=256)
def _box_indices(lengths: tuple[float, ...], bc: BC, count: int) -> tuple[tuple[int, ...], ...]:
    lo = 1 if bc is BC.DIRICHLET else 0
    # Grow the per-axis cutoff until the `count` smallest rho are certainly inside.
    cut = max(2, int(math.ceil(count ** (1.0 / len(lengths)))) + 1)
    while True:
        cand = list(itertools.product(range(lo, lo + cut), repeat=len(lengths)))
        rhos = [sum((n * math.pi / L) ** 2 for n, L in zip(ns, lengths)) for ns in cand]
        order = sorted(range(len(cand)), key=lambda i: (rhos[i], cand[i]))
        if len(order) >= count:
            bound = min(((lo + cut) * math.pi / L) ** 2 for L in lengths)
            if rhos[order[count - 1]] < bound:
                return tuple(cand[i] for i in order[:count])
        cut *= 2


def eigenpair(k: int, dom: DomainSpec) -> EigenMode:
    """The ``k``-th eigenpair (1-based) in order of nondecreasing ``rho``.

    1D Dirichlet uses ``sin(k pi x / L)``; 1D Neumann uses
    ``cos((k-1) pi x / L)``, so ``k = 1`` is the constant mode. On boxes, ties
    in ``rho`` are broken by the lexicographic order of the wavenumbers.
    """
    if int(k) != k or k < 1:
        raise ValidationError({"k": f"mode index must be an integer >= 1, got {k}"})
    k = int(k)
    if dom.is_interval:
        n = k if dom.bc is BC.DIRICHLET else k - 1
        return _make_mode(k, (n,), dom)
    ns = _box_indices(dom.lengths, dom.bc, k)[k - 1]
    return _make_mode(k, ns, dom)


def mode_from_wavenumbers(ns: "tuple[int, ...]", dom: DomainSpec) -> EigenMode:
    """Eigenpair with prescribed per-axis wavenumbers (k is set to 0 for boxes)."""
    ns = tuple(int(n) for n in ns)
    if dom.is_interval:
        k = ns[0] if dom.bc is BC.DIRICHLET else ns[0] + 1
        return eigenpair(k, dom)
    return _make_mode(0, ns, dom)


def mode_table(dom: DomainSpec, count: int) -> list[EigenMode]:
    """First ``count`` eigenpairs."""
    if dom.is_interval:
        return [eigenpair(k, dom) for k in range(1, count + 1)]
    return [_make_mode(k + 1, ns, dom) for k, ns in enumerate(_box_indices(dom.lengths, dom.bc, count))]


def eigenvalues(dom: DomainSpec, count: int) -> np.ndarray:
    """``rho_1..rho_count`` as an array (cheap; no integrals)."""
    if dom.is_interval:
        k = np.arange(1, count + 1)
        n = k if dom.bc is BC.DIRICHLET else k - 1
        return (n * np.pi / dom.L) ** 2
    idx = _box_indices(dom.lengths, dom.bc, count)
    return np.array([sum((n * math.pi / L) ** 2 for n, L in zip(ns, dom.lengths)) for ns in idx])


def coupling_integral(e1: EigenMode, ek: EigenMode) -> float:
    """``int e1^2 ek dx``, exact."""
    if e1.lengths != ek.lengths or e1.bc is not ek.bc:
        raise ValidationError({"modes": "coupling requires modes from the same domain and bc"})
    return product_integral((e1, e1, ek))


# ---------------------------------------------------------------------------
# per-mode linearization


@dataclass(frozen=True)
class ModeMatrix:
    """``M = [[-mu1 rho + lam - 1, alpha^2], [-lam, -mu2 rho - alpha^2]]``."""

    a11: float
    a12: float
    a21: float
    a22: float
    rho: float = 0.0

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def discriminant(self) -> float:
        # (a - d)^2 + 4 b c equals tr^2 - 4 det without the cancellation
        return (self.a11 - self.a22) ** 2 + 4.0 * self.a12 * self.a21


def mode_matrix(p: BrusselatorParams, rho: float) -> ModeMatrix:
    if rho < 0:
        raise ValidationError({"rho": f"must be >= 0, got {rho}"})
    a2 = p.alpha**2
    return ModeMatrix(-p.mu1 * rho + p.lam - 1.0, a2, -p.lam, -p.mu2 * rho - a2, float(rho))


def mode_matrices(p: BrusselatorParams, rho: np.ndarray) -> np.ndarray:
    """Stack of mode matrices with shape ``(len(rho), 2, 2)``."""
    rho = np.asarray(rho, dtype=float)
    a2 = p.alpha**2
    out = np.empty(rho.shape + (2, 2))
    out[..., 0, 0] = -p.mu1 * rho + p.lam - 1.0
    out[..., 0, 1] = a2
    out[..., 1, 0] = -p.lam
    out[..., 1, 1] = -p.mu2 * rho - a2
    return out


@dataclass(frozen=True)
class GrowthRatePair:
    """Eigenvalues of a mode matrix; ``beta_plus`` has the larger real part."""

    beta_plus: complex
    beta_minus: complex
    is_complex_pair: bool


def _roots(a11, a12, a21, a22):
    """Vectorized eigenvalues of 2x2 blocks, returned as (plus, minus, complex flag)."""
    a11, a12, a21, a22 = (np.asarray(x, dtype=float) for x in (a11, a12, a21, a22))
    tr = a11 + a22
    det = a11 * a22 - a12 * a21
    disc = (a11 - a22) ** 2 + 4.0 * a12 * a21
    is_c = disc < 0
    sq = np.sqrt(np.abs(disc))
    # real branch: the root with |.| largest from tr + sign(tr) sqrt, the other from det
    s = tr + np.copysign(sq, tr)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = 0.5 * s
        small = np.where(s != 0, 2.0 * det / np.where(s != 0, s, 1.0), 0.0)
    r_plus = np.maximum(big, small)
    r_minus = np.minimum(big, small)
    plus = np.where(is_c, 0.5 * tr + 0.5j * sq, r_plus + 0j)
    minus = np.where(is_c, 0.5 * tr - 0.5j * sq, r_minus + 0j)
    return plus, minus, is_c


def growth_rates(m: ModeMatrix) -> GrowthRatePair:
    """Eigenvalues ``beta+-`` from the quadratic formula.

    The sign of the discriminant picks the real or complex branch; the real
    roots are formed so that neither suffers cancellation.
    """
    plus, minus, is_c = _roots(m.a11, m.a12, m.a21, m.a22)
    return GrowthRatePair(complex(plus), complex(minus), bool(is_c))


def growth_rates_array(p: BrusselatorParams, rho: np.ndarray):
    """``(beta_plus, beta_minus, is_complex)`` arrays over a set of ``rho``."""
    m = mode_matrices(p, rho)
    return _roots(m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1])


# ---------------------------------------------------------------------------
# critical eigenvectors


class Case(str, Enum):
    REAL = "real"
    HOPF = "hopf"


@dataclass(frozen=True)
class CriticalEigenvectors:
    """Amplitude vectors of the critical eigenfunctions (each times ``mode``).

    Real case: ``xi`` spans the kernel of ``M`` and ``xi_adj`` that of its
    transpose. Hopf case: ``M xi = sigma0 eta``, ``M eta = -sigma0 xi`` and
    the adjoint pair satisfies the same relations with the transpose.
    """

    case: Case
    mode: EigenMode
    xi: np.ndarray
    xi_adj: np.ndarray
    eta: np.ndarray | None = None
    eta_adj: np.ndarray | None = None
    sigma0: float | None = None

    def pairings(self) -> dict[str, float]:
        """Spatial inner products ``(a, b) = (a . b) int e^2``."""
        n2 = self.mode.normsq
        out = {"xi_xiadj": float(self.xi @ self.xi_adj) * n2}
        if self.case is Case.HOPF:
            out.update(
                eta_etaadj=float(self.eta @ self.eta_adj) * n2,
                xi_etaadj=float(self.xi @ self.eta_adj) * n2,
                eta_xiadj=float(self.eta @ self.xi_adj) * n2,
            )
        return out

    def residuals(self, p: BrusselatorParams) -> dict[str, float]:
        m = mode_matrix(p, self.mode.rho).matrix
        if self.case is Case.REAL:
            return {"M_xi": float(np.abs(m @ self.xi).max()),
                    "MT_xiadj": float(np.abs(m.T @ self.xi_adj).max())}
        s = self.sigma0
        return {
            "M_xi": float(np.abs(m @ self.xi - s * self.eta).max()),
            "M_eta": float(np.abs(m @ self.eta + s * self.xi).max()),
            "MT_xiadj": float(np.abs(m.T @ self.xi_adj - s * self.eta_adj).max()),
            "MT_etaadj": float(np.abs(m.T @ self.eta_adj + s * self.xi_adj).max()),
        }


def hopf_sigma0_sq(p: BrusselatorParams, rho1: float) -> float:
    """``alpha^2 (mu1 rho1 + 1) - mu2 rho1 (mu2 rho1 + alpha^2)``."""
    a2 = p.alpha**2
    return a2 * (p.mu1 * rho1 + 1.0) - p.mu2 * rho1 * (p.mu2 * rho1 + a2)


def critical_eigenvectors(p: BrusselatorParams, mode: EigenMode, case: "Case | str") -> CriticalEigenvectors:
    """Closed-form critical eigenvectors for ``mode``.

    Pass ``p`` with ``lam`` already at the critical value: the real-case
    kernel vector only annihilates ``M`` when ``lam = lambda0`` for this mode,
    and the Hopf pair only rotates correctly at ``lam = lambda1``.
    """
    case = Case(case)
    r = mode.rho
    a2 = p.alpha**2
    if case is Case.REAL:
        xi = np.array([-p.mu2 * r, p.mu1 * r + 1.0])
        xi_adj = np.array([p.mu2 * r + a2, a2])
        return CriticalEigenvectors(case, mode, xi, xi_adj)
    s2 = hopf_sigma0_sq(p, r)
    if s2 <= 0:
        raise ValidationError({"sigma0": f"not a Hopf crossing: sigma0^2 = {s2:.6g} <= 0"})
    s = math.sqrt(s2)
    c = p.mu2 * r + a2
    xi = np.array([a2, s - c])
    eta = np.array([a2, -(s + c)])
    xi_adj = np.array([s + c, a2])
    eta_adj = np.array([c - s, a2])
    return CriticalEigenvectors(case, mode, xi, xi_adj, eta, eta_adj, s)
