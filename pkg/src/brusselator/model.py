"""Nondimensional Brusselator reaction-diffusion system.

The state is the deviation ``v = u - u0`` from the homogeneous equilibrium
``u0 = (alpha, lambda/alpha)``. Linear part per Laplacian mode lives in
:mod:`brusselator.spectrum`; this module holds parameters, domains and the
nonlinear reaction term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any

import numpy as np

from .errors import ValidationError


class BC(str, Enum):
    """Boundary condition applied to both species."""

    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    @classmethod
    def parse(cls, value: "BC | str") -> "BC":
        if isinstance(value, BC):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValidationError({"bc": f"expected 'dirichlet' or 'neumann', got {value!r}"}) from None


def _positive(name: str, value: Any, problems: dict[str, str], allow_zero: bool = False) -> None:
    try:
        x = float(value)
    except (TypeError, ValueError):
        problems[name] = f"not a number: {value!r}"
        return
    if not math.isfinite(x):
        problems[name] = "must be finite"
    elif allow_zero and x < 0:
        problems[name] = f"must be >= 0, got {x}"
    elif not allow_zero and x <= 0:
        problems[name] = f"must be > 0, got {x}"


@dataclass(frozen=True)
class BrusselatorParams:
    """Model parameters ``(mu1, mu2, alpha, lam)``.

    ``lam`` is the control parameter; it is spelled out because ``lambda``
    is a Python keyword.
    """

    mu1: float
    mu2: float
    alpha: float
    lam: float = 0.0

    def __post_init__(self) -> None:
        problems: dict[str, str] = {}
        _positive("mu1", self.mu1, problems)
        _positive("mu2", self.mu2, problems)
        _positive("alpha", self.alpha, problems)
        _positive("lambda", self.lam, problems, allow_zero=True)
        if problems:
            raise ValidationError(problems)
        for name in ("mu1", "mu2", "alpha", "lam"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def with_lambda(self, lam: float) -> "BrusselatorParams":
        return replace(self, lam=lam)


@dataclass(frozen=True)
class DomainSpec:
    """Interval ``(0, L)`` or rectangular box ``prod (0, L_i)`` with one bc.

    Build with :meth:`interval` or :meth:`box`; ``lengths`` has one entry
    per spatial dimension.
    """

    lengths: tuple[float, ...]
    bc: BC

    def __post_init__(self) -> None:
        object.__setattr__(self, "bc", BC.parse(self.bc))
        lengths = tuple(self.lengths) if np.ndim(self.lengths) else (self.lengths,)
        problems: dict[str, str] = {}
        if not 1 <= len(lengths) <= 3:
            problems["lengths"] = f"dimension must be 1, 2 or 3, got {len(lengths)}"
        for i, length in enumerate(lengths):
            _positive(f"lengths[{i}]", length, problems)
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "lengths", tuple(float(x) for x in lengths))

    @classmethod
    def interval(cls, L: float, bc: BC | str) -> "DomainSpec":
        return cls((L,), BC.parse(bc))

    @classmethod
    def box(cls, lengths: "list[float] | tuple[float, ...]", bc: BC | str) -> "DomainSpec":
        return cls(tuple(lengths), BC.parse(bc))

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def is_interval(self) -> bool:
        return self.dim == 1

    @property
    def L(self) -> float:
        """Length of a 1D domain. Raises on boxes."""
        if not self.is_interval:
            raise ValidationError({"domain": "a single length is only defined for intervals"})
        return self.lengths[0]

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))

    def with_length(self, L: float) -> "DomainSpec":
        return DomainSpec.interval(L, self.bc)


@dataclass(frozen=True)
class PhysicalInputs:
    """Dimensional rate constants, diffusivities, reservoir levels and length."""

    k1: float
    k2: float
    k3: float
    k4: float
    sigma1: float
    sigma2: float
    a: float
    b: float
    l: float

    def __post_init__(self) -> None:
        problems: dict[str, str] = {}
        for name in ("k1", "k2", "k3", "k4", "sigma1", "sigma2", "a", "b", "l"):
            _positive(name, getattr(self, name), problems)
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class Scaling:
    """Result of :func:`nondimensionalize`: parameters plus the unit scales."""

    params: BrusselatorParams
    time_scale: float
    length_scale: float


def nondimensionalize(raw: PhysicalInputs) -> Scaling:
    """Map dimensional inputs to ``(mu1, mu2, alpha, lam)``.

    ``alpha = a sqrt(k1^2 k3 / k4^3)``, ``lam = b k2 / k4`` and
    ``mu_i = sigma_i / (l^2 k4)``; time is measured in units of ``1/k4``.
    """
    alpha = raw.a * math.sqrt(raw.k1**2 * raw.k3 / raw.k4**3)
    lam = raw.b * raw.k2 / raw.k4
    mu1 = raw.sigma1 / (raw.l**2 * raw.k4)
    mu2 = raw.sigma2 / (raw.l**2 * raw.k4)
    return Scaling(BrusselatorParams(mu1, mu2, alpha, lam), 1.0 / raw.k4, raw.l)


def homogeneous_state(p: BrusselatorParams) -> tuple[float, float]:
    """Spatially constant equilibrium ``(alpha, lam/alpha)``."""
    return p.alpha, p.lam / p.alpha


def quadratic_coefficient(p: BrusselatorParams, kinetics: str = "translated") -> float:
    """Coefficient of ``v1^2`` in the reaction term.

    ``"translated"`` is the form used throughout the analysis, ``2 lam/alpha``.
    ``"mass_action"`` is what one gets by shifting the cubic autocatalytic
    kinetics exactly, ``lam/alpha``.
    """
    if kinetics == "translated":
        return 2.0 * p.lam / p.alpha
    if kinetics == "mass_action":
        return p.lam / p.alpha
    raise ValidationError({"kinetics": f"expected 'translated' or 'mass_action', got {kinetics!r}"})


def nonlinearity(v1, v2, p: BrusselatorParams, kinetics: str = "translated"):
    """Pointwise reaction nonlinearity ``(G1, G2)`` with ``G2 = -G1``.

    ``G1 = q v1^2 + 2 alpha v1 v2 + v1^2 v2`` where ``q`` is given by
    :func:`quadratic_coefficient`. Works on scalars and arrays alike.
    """
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    q = quadratic_coefficient(p, kinetics)
    g = v1 * (q * v1 + 2.0 * p.alpha * v2 + v1 * v2)
    return g, -g


def bilinear(u, v, p: BrusselatorParams) -> np.ndarray:
    """Bilinear form ``G2(u, v)`` with ``G2(u, u)`` the quadratic part of G.

    Follows the unsymmetrized convention
    ``first = 2 (lam/alpha) u1 v1 + 2 alpha u1 v2``; the second component is
    its negative. Use :func:`bilinear_sym` when a symmetric form is needed.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    first = 2.0 * (p.lam / p.alpha * u[0] * v[0] + p.alpha * u[0] * v[1])
    return np.array([first, -first])


def bilinear_sym(u, v, p: BrusselatorParams) -> np.ndarray:
    """Symmetric part of :func:`bilinear`."""
    return 0.5 * (bilinear(u, v, p) + bilinear(v, u, p))


def trilinear(u, v, w) -> np.ndarray:
    """Fully symmetric trilinear form with ``G3(u, u, u) = (u1^2 u2, -u1^2 u2)``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    first = (u[0] * v[0] * w[1] + u[0] * w[0] * v[1] + v[0] * w[0] * u[1]) / 3.0
    return np.array([first, -first])


def reaction_u(u1, u2, p: BrusselatorParams):
    """Kinetics in the original concentrations: ``(alpha - (lam+1) u1 + u1^2 u2, lam u1 - u1^2 u2)``."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    auto = u1 * u1 * u2
    return p.alpha - (p.lam + 1.0) * u1 + auto, p.lam * u1 - auto
