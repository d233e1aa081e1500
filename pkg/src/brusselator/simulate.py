"""Spectral Galerkin simulation of the 1D system and trajectory diagnostics.

The state is stored as sine (Dirichlet) or cosine (Neumann) coefficients of
``v1`` and ``v2``. Each mode evolves under its own 2x2 linear matrix, which
is integrated exactly; the reaction nonlinearity is evaluated on a
collocation grid through fast type-I trigonometric transforms. The grid is
twice the mode count, which removes all aliasing of the cubic term.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
from scipy.fft import dct, dst, next_fast_len
from scipy.linalg import expm

from .errors import BlowUpError, ContaminationError, NotCyclic, NotSteady, ValidationError
from .model import BC, BrusselatorParams, DomainSpec, quadratic_coefficient
from .spectrum import mode_matrices

SCHEMES = ("etdrk4", "lie", "strang")


@dataclass(frozen=True)
class InitialCondition:
    """Initial mode coefficients, keyed by 1-based mode index.

    ``noise`` adds independent normal coefficients of that size to every
    mode of both species (reproducible through ``seed``).
    """

    v1: Mapping[int, float] = field(default_factory=dict)
    v2: Mapping[int, float] = field(default_factory=dict)
    noise: float = 0.0
    seed: int | None = None
    state: np.ndarray | None = None

    @classmethod
    def zero(cls) -> "InitialCondition":
        return cls()

    @classmethod
    def mode(cls, k: int, amplitude: float, ratio: float = 1.0) -> "InitialCondition":
        """``amplitude`` on ``v1`` of mode ``k`` and ``ratio * amplitude`` on ``v2``."""
        return cls({k: amplitude}, {k: ratio * amplitude})

    @classmethod
    def from_state(cls, state: np.ndarray) -> "InitialCondition":
        """Continue from a ``(2, N)`` coefficient array (for example ``Trajectory.final``)."""
        return cls(state=np.array(state, dtype=float))

    @classmethod
    def preset(cls, name: str, **kw) -> "InitialCondition":
        name = name.strip().lower()
        if name == "zero":
            return cls.zero()
        if name == "homogeneous":
            return cls.mode(1, kw.get("amplitude", 1e-3), kw.get("ratio", 0.0))
        if name == "mode":
            return cls.mode(int(kw["k"]), kw.get("amplitude", 1e-3), kw.get("ratio", 1.0))
        if name == "noise":
            return cls(noise=kw.get("amplitude", 1e-6), seed=kw.get("seed"))
        raise ValidationError({"initial": f"unknown preset {name!r}; known: zero, homogeneous, mode, noise"})

    def coefficients(self, N: int) -> np.ndarray:
        if self.state is not None:
            st = np.zeros((2, N))
            n = min(N, self.state.shape[1])
            st[:, :n] = self.state[:, :n]
            return st
        st = np.zeros((2, N))
        for row, table in enumerate((self.v1, self.v2)):
            for k, c in table.items():
                if not 1 <= int(k) <= N:
                    raise ValidationError({"initial": f"mode {k} outside 1..{N}"})
                st[row, int(k) - 1] = c
        if self.noise:
            st += self.noise * np.random.default_rng(self.seed).standard_normal((2, N))
        return st


@dataclass(frozen=True)
class SimConfig:
    """Settings for one Galerkin run.

    ``subspace = (step, offset)`` keeps only wavenumbers ``n`` with
    ``n % step == offset`` (for example ``(2, 1)`` for odd sine modes); the
    nonlinear forcing of every other mode is zeroed, so they stay exactly 0.
    """

    params: BrusselatorParams
    domain: DomainSpec
    N: int = 64
    dt: float = 0.01
    t_max: float = 100.0
    initial: InitialCondition = field(default_factory=InitialCondition)
    dealias: bool = True
    scheme: str = "etdrk4"
    sample_dt: float | None = None
    kinetics: str = "translated"
    subspace: tuple[int, int] | None = None
    blowup: float = 1e6
    target_mode: int | None = None

    def __post_init__(self) -> None:
        problems: dict[str, str] = {}
        if not self.domain.is_interval:
            problems["domain"] = "simulation supports 1D intervals only"
        if int(self.N) != self.N or self.N < 2:
            problems["N"] = f"need an integer >= 2, got {self.N}"
        if not self.dt > 0:
            problems["dt"] = f"must be > 0, got {self.dt}"
        if not self.t_max > self.dt:
            problems["t_max"] = f"must exceed dt, got {self.t_max}"
        if self.scheme not in SCHEMES:
            problems["scheme"] = f"expected one of {SCHEMES}, got {self.scheme!r}"
        if self.sample_dt is not None and not self.sample_dt >= self.dt:
            problems["sample_dt"] = "must be >= dt"
        if self.target_mode is not None and self.N < 2 * self.target_mode:
            problems["N"] = f"N={self.N} must be >= 2 * target mode {self.target_mode}"
        if self.subspace is not None:
            step, off = self.subspace
            if step < 1 or not 0 <= off < step:
                problems["subspace"] = f"need step >= 1 and 0 <= offset < step, got {self.subspace}"
        if not isinstance(self.initial, InitialCondition):
            problems["initial"] = "must be an InitialCondition"
        if problems:
            raise ValidationError(problems)

    @property
    def sample_every(self) -> int:
        if self.sample_dt is None:
            return 1
        return max(1, int(round(self.sample_dt / self.dt)))

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))


def _phi_functions(A: np.ndarray, h: float) -> tuple[np.ndarray, ...]:
    """``exp(hA), phi1(hA), phi2(hA), phi3(hA)`` for a stack of 2x2 matrices."""
    n = A.shape[0]
    aug = np.zeros((n, 8, 8))
    aug[:, 0:2, 0:2] = h * A
    eye = np.eye(2)
    aug[:, 0:2, 2:4] = eye
    aug[:, 2:4, 4:6] = eye
    aug[:, 4:6, 6:8] = eye
    ex = expm(aug)
    return tuple(ex[:, 0:2, 2 * j:2 * j + 2] for j in range(4))


class GalerkinSystem:
    """Mode basis, transforms and right-hand side for one configuration.

    States are ``(2, N)`` arrays of ``v1`` and ``v2`` coefficients.
    """

    DIRECT_LIMIT = 384  # grid size up to which dense transform matrices beat FFTs

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        p, dom, N = cfg.params, cfg.domain, cfg.N
        self.L = dom.L
        self.bc = dom.bc
        self.N = N
        if self.bc is BC.NEUMANN:
            self.n = np.arange(N)  # wavenumbers
            self.M = next_fast_len(2 * N) if cfg.dealias else max(N - 1, 1)
            self.x = np.arange(self.M + 1) * self.L / self.M
        else:
            self.n = np.arange(1, N + 1)
            self.M = next_fast_len(2 * N + 2) if cfg.dealias else N + 1
            self.x = np.arange(1, self.M) * self.L / self.M
        self.rho = (self.n * np.pi / self.L) ** 2
        self.A = mode_matrices(p, self.rho)
        self.q = quadratic_coefficient(p, cfg.kinetics)
        self.alpha = p.alpha
        if cfg.subspace is None:
            self.mask = np.ones(N, dtype=bool)
        else:
            step, off = cfg.subspace
            self.mask = (self.n % step) == off
        if self.bc is BC.DIRICHLET:
            # products of two sines are cosine series; project them exactly
            n = self.n[:, None].astype(float)
            j = np.arange(2 * N + 1)[None, :].astype(float)
            with np.errstate(divide="ignore", invalid="ignore"):
                C = (2 / np.pi) * n * (1 - (-1.0) ** (n + j)) / (n**2 - j**2)
            C[np.broadcast_to(n == j, C.shape)] = 0.0
            self._cos_to_sin = C  # (N, 2N + 1)
        self._direct = self.x.size <= self.DIRECT_LIMIT
        if self._direct:
            self._S = self.synth_fft(np.eye(N))           # (N, points)
            self._T = self.analyze_fft(np.eye(self.x.size))  # (points, N)
            if self.bc is BC.DIRICHLET:
                self._Q = self.analyze_even_fft(np.eye(self.x.size))

    # transforms -------------------------------------------------------------
    def synth_fft(self, c: np.ndarray) -> np.ndarray:
        if self.bc is BC.NEUMANN:
            pad = np.zeros(c.shape[:-1] + (self.M + 1,))
            pad[..., : self.N] = c
            return 0.5 * (dct(pad, type=1, axis=-1) + pad[..., :1])
        pad = np.zeros(c.shape[:-1] + (self.M - 1,))
        pad[..., : self.N] = c
        return 0.5 * dst(pad, type=1, axis=-1)

    def analyze_fft(self, f: np.ndarray) -> np.ndarray:
        if self.bc is BC.NEUMANN:
            a = dct(f, type=1, axis=-1) / self.M
            a[..., 0] *= 0.5
            return a[..., : self.N]
        return (dst(f, type=1, axis=-1) / self.M)[..., : self.N]

    def analyze_even_fft(self, f: np.ndarray) -> np.ndarray:
        """Sine coefficients of a cosine series vanishing at both ends, from interior values."""
        pad = np.zeros(f.shape[:-1] + (self.M + 1,))
        pad[..., 1:-1] = f
        a = dct(pad, type=1, axis=-1) / self.M
        a[..., 0] *= 0.5
        return a[..., : 2 * self.N + 1] @ self._cos_to_sin.T

    def analyze_even(self, f: np.ndarray) -> np.ndarray:
        return f @ self._Q if self._direct else self.analyze_even_fft(f)

    def synth(self, c: np.ndarray) -> np.ndarray:
        """Grid values from mode coefficients (last axis)."""
        return c @ self._S if self._direct else self.synth_fft(c)

    def analyze(self, f: np.ndarray) -> np.ndarray:
        """Mode coefficients of grid values, truncated to the first N modes."""
        return f @ self._T if self._direct else self.analyze_fft(f)

    # dynamics ---------------------------------------------------------------
    def reaction(self, u: np.ndarray) -> np.ndarray:
        """Mode coefficients of the first component of the nonlinearity."""
        v1, v2 = self.synth(u)
        if self.bc is BC.NEUMANN:
            gh = self.analyze(v1 * (self.q * v1 + 2.0 * self.alpha * v2 + v1 * v2))
        else:
            gh = self.analyze(v1 * v1 * v2) + self.analyze_even(v1 * (self.q * v1 + 2.0 * self.alpha * v2))
        if self.cfg.subspace is not None:
            gh = np.where(self.mask, gh, 0.0)
        return gh

    def rhs(self, u: np.ndarray) -> np.ndarray:
        g = self.reaction(u)
        A = self.A
        return np.stack([A[:, 0, 0] * u[0] + A[:, 0, 1] * u[1] + g,
                         A[:, 1, 0] * u[0] + A[:, 1, 1] * u[1] - g])

    @cached_property
    def _etd(self):
        h = self.cfg.dt
        E, p1, p2, p3 = _phi_functions(self.A, h)
        E2, q1, _, _ = _phi_functions(self.A, h / 2)
        col = lambda P: (P[:, :, 0] - P[:, :, 1]).T  # action on (g, -g), shape (2, N)
        lin = lambda P: np.transpose(P, (1, 2, 0))     # (2, 2, N)
        return dict(
            E=lin(E), E2=lin(E2),
            P2=(h / 2) * col(q1),
            F1=h * col(p1 - 3 * p2 + 4 * p3),
            F2=2 * h * col(p2 - 2 * p3),
            F3=h * col(4 * p3 - p2),
        )

    def stepper(self):
        c = self._etd
        mv = lambda P, u: P[:, 0] * u[0] + P[:, 1] * u[1]
        h = self.cfg.dt
        react = self.reaction
        if self.cfg.scheme == "etdrk4":
            E, E2, P2, F1, F2, F3 = c["E"], c["E2"], c["P2"], c["F1"], c["F2"], c["F3"]

            def step(u):
                gu = react(u)
                eu = mv(E2, u)
                a = eu + P2 * gu
                ga = react(a)
                b = eu + P2 * ga
                gb = react(b)
                gc = react(mv(E2, a) + P2 * (2 * gb - gu))
                return mv(E, u) + F1 * gu + F2 * (ga + gb) + F3 * gc
            return step
        sgn = np.array([[1.0], [-1.0]])
        if self.cfg.scheme == "lie":
            E = c["E"]

            def step(u):
                return mv(E, u + h * sgn * react(u))
            return step
        E2 = c["E2"]

        def step(u):
            w = mv(E2, u)
            w = w + h * sgn * react(w + 0.5 * h * sgn * react(w))
            return mv(E2, w)
        return step


@dataclass(frozen=True)
class Trajectory:
    """Sampled mode coefficients; ``c1[i, j]`` is ``v1`` of mode ``j + 1`` at ``times[i]``."""

    times: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    config: SimConfig
    completed: bool = True

    @property
    def final(self) -> np.ndarray:
        return np.stack([self.c1[-1], self.c2[-1]])

    def mode(self, k: int, component: int = 0) -> np.ndarray:
        return (self.c1 if component == 0 else self.c2)[:, k - 1]

    @cached_property
    def system(self) -> GalerkinSystem:
        return GalerkinSystem(self.config)

    def grid(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(x, v1, v2)`` on the collocation grid for every sample."""
        s = self.system
        return s.x, s.synth(self.c1), s.synth(self.c2)

    def rhs_norm(self, i: int = -1) -> float:
        """RMS norm of ``dv/dt`` at sample ``i``."""
        s = self.system
        return state_norm(s.rhs(np.stack([self.c1[i], self.c2[i]])), s.bc)

    def to_csv(self, path, grid: bool = False) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            if grid:
                x, g1, g2 = self.grid()
                w.writerow(["t"] + [f"v1_x{j}" for j in range(len(x))] + [f"v2_x{j}" for j in range(len(x))])
                for t, a, b in zip(self.times, g1, g2):
                    w.writerow([repr(float(t))] + [repr(float(z)) for z in a] + [repr(float(z)) for z in b])
                return
            N = self.c1.shape[1]
            w.writerow(["t"] + [f"v1_k{k}" for k in range(1, N + 1)] + [f"v2_k{k}" for k in range(1, N + 1)])
            for t, a, b in zip(self.times, self.c1, self.c2):
                w.writerow([repr(float(t))] + [repr(float(z)) for z in a] + [repr(float(z)) for z in b])


def integrate(cfg: SimConfig) -> Trajectory:
    """Advance the Galerkin system to ``t_max`` and return the sampled history.

    Raises :class:`BlowUpError` (with the partial trajectory attached) if the
    state becomes non-finite or exceeds ``cfg.blowup``.
    """
    sysm = GalerkinSystem(cfg)
    step = sysm.stepper()
    u = cfg.initial.coefficients(cfg.N)
    if cfg.subspace is not None:
        u[:, ~sysm.mask] = 0.0
    every = cfg.sample_every
    n_steps = cfg.n_steps
    n_samp = n_steps // every + 1
    times = np.empty(n_samp)
    c1 = np.empty((n_samp, cfg.N))
    c2 = np.empty((n_samp, cfg.N))
    times[0], c1[0], c2[0] = 0.0, u[0], u[1]
    j = 1
    for i in range(1, n_steps + 1):
        u = step(u)
        if not np.isfinite(u).all() or np.abs(u).max() > cfg.blowup:
            part = Trajectory(times[:j], c1[:j], c2[:j], cfg, completed=False)
            raise BlowUpError(i * cfg.dt, part)
        if i % every == 0:
            times[j], c1[j], c2[j] = i * cfg.dt, u[0], u[1]
            j += 1
    return Trajectory(times[:j], c1[:j], c2[:j], cfg)


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class SteadyState:
    mode: int
    coefficient: np.ndarray
    state: np.ndarray
    residual: float
    config: SimConfig

    @property
    def amplitude(self) -> float:
        """``v1`` coefficient of the critical mode."""
        return float(self.coefficient[0])

    def projection(self, xi: np.ndarray, xi_adj: np.ndarray) -> float:
        """Coordinate ``y`` along ``xi`` of the critical-mode coefficient pair."""
        return float(self.coefficient @ xi_adj / (xi @ xi_adj))

    def profile(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        L = self.config.domain.L
        N = self.state.shape[1]
        if self.config.domain.bc is BC.NEUMANN:
            basis = np.cos(np.outer(x, np.arange(N)) * np.pi / L)
        else:
            basis = np.sin(np.outer(x, np.arange(1, N + 1)) * np.pi / L)
        return basis @ self.state[0], basis @ self.state[1]


def _crossings(t: np.ndarray, s: np.ndarray, level: float) -> np.ndarray:
    d = s - level
    idx = np.nonzero((d[:-1] < 0) & (d[1:] >= 0))[0]
    frac = -d[idx] / (d[idx + 1] - d[idx])
    return t[idx] + frac * (t[idx + 1] - t[idx])


def detect_steady(traj: Trajectory, mode: int | None = None, tol: float = 1e-8) -> SteadyState:
    """Final state if ``||dv/dt|| < tol`` there; otherwise :class:`NotSteady`.

    ``mode`` defaults to the configured target mode or, failing that, the
    mode with the largest final ``v1`` coefficient.
    """
    res = traj.rhs_norm(-1)
    fin = traj.final
    if mode is None:
        mode = traj.config.target_mode or int(np.argmax(np.abs(fin[0]))) + 1
    if res >= tol:
        s = traj.mode(mode)
        half = s[len(s) // 2:]
        n_cross = len(_crossings(traj.times[len(s) // 2:], half, float(np.mean(half))))
        if n_cross >= 4:
            raise NotSteady(f"oscillation detected ({n_cross} crossings in the tail); use detect_cycle")
        raise NotSteady(f"not settled: ||dv/dt|| = {res:.3e} >= {tol:.1e}")
    return SteadyState(mode, fin[:, mode - 1].copy(), fin, res, traj.config)


@dataclass(frozen=True)
class CycleDiagnostics:
    period: float
    amplitude: float
    amplitude_v2: float
    periods: np.ndarray
    drift: float
    converged: bool
    transient: float
    n_cycles: int
    mean_level: float


def _peak(t: np.ndarray, s: np.ndarray, lo: int, hi: int, sign: float) -> float:
    """Parabolic-interpolated extremum of ``sign * s`` on samples ``lo..hi``."""
    seg = sign * s[lo:hi + 1]
    i = int(np.argmax(seg)) + lo
    if 0 < i < len(s) - 1:
        y0, y1, y2 = sign * s[i - 1], sign * s[i], sign * s[i + 1]
        den = y0 - 2 * y1 + y2
        if den != 0:
            off = 0.5 * (y0 - y2) / den
            return sign * (y1 - 0.25 * (y0 - y2) * off)
    return s[i]


def detect_cycle(traj: Trajectory, mode: int = 1, transient: float | None = None,
                 min_cycles: int = 10, drift_tol: float = 1e-2) -> CycleDiagnostics:
    """Period and amplitude of a sustained oscillation of one mode.

    The first ``max(0.2 t_max, 50 / sigma)`` time units are dropped, where
    ``sigma`` is the mode's linear frequency (``transient`` overrides). The
    period comes from interpolated upward crossings of the mean level and
    the amplitude from interpolated extrema, both averaged over the last 5
    cycles.
    """
    t = traj.times
    s1 = traj.mode(mode, 0)
    s2 = traj.mode(mode, 1)
    if transient is None:
        sysm = traj.system
        A = sysm.A[mode - 1]
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        sigma = math.sqrt(det) if det > 0 else 1.0
        transient = max(0.2 * t[-1], 50.0 / sigma)
    keep = t >= transient
    tw, w1, w2 = t[keep], s1[keep], s2[keep]
    if tw.size < 8:
        raise NotCyclic("no samples after the transient")
    level = float(np.mean(w1))
    cr = _crossings(tw, w1, level)
    if cr.size < min_cycles + 1:
        raise NotCyclic(f"only {max(cr.size - 1, 0)} oscillations after the transient (need {min_cycles})")
    periods = np.diff(cr)
    last = periods[-5:]
    mean_p = float(np.mean(last))
    drift = float((last.max() - last.min()) / mean_p)
    amps1, amps2 = [], []
    edges = np.searchsorted(tw, cr[-6:])
    for lo, hi in zip(edges[:-1], edges[1:]):
        for sig, out in ((w1, amps1), (w2, amps2)):
            mx = _peak(tw, sig, lo, hi, 1.0)
            mn = _peak(tw, sig, lo, hi, -1.0)
            out.append(0.5 * (mx - mn))
    first_amp = 0.5 * (w1[: max(edges[0], 2)].max() - w1[: max(edges[0], 2)].min())
    amp = float(np.mean(amps1))
    if amp < 1e-12 or (first_amp > 0 and amp < 0.5 * first_amp and amps1[-1] < amps1[0] * (1 - 1e-3)):
        raise NotCyclic("oscillation is decaying")
    if drift > drift_tol:
        raise NotCyclic(f"period drifting: spread {drift:.2e} over the last 5 cycles")
    return CycleDiagnostics(mean_p, amp, float(np.mean(amps2)), last, drift, drift <= 1e-3,
                            float(transient), int(periods.size), level)


# ---------------------------------------------------------------------------
# probes


@dataclass(frozen=True)
class GrowthMeasurement:
    beta_plus: complex
    beta_minus: complex
    residual: float

    @property
    def growth(self) -> float:
        return self.beta_plus.real

    @property
    def frequency(self) -> float:
        return abs(self.beta_plus.imag)


def linear_growth_probe(p: BrusselatorParams, dom: DomainSpec, k: int, lam: float, eps: float = 1e-8,
                        n_samples: int = 8, substeps: int = 4, contamination_tol: float = 1e-6) -> GrowthMeasurement:
    """Fit both eigenvalues of mode ``k`` from a tiny seeded simulation.

    Snapshots of the mode's coefficient pair are fitted by a one-step linear
    map ``X1 = Phi X0``; the eigenvalues of ``Phi`` give ``exp(beta dt)``.
    """
    pl = p.with_lambda(lam)
    A = mode_matrices(pl, np.array([((k if dom.bc is BC.DIRICHLET else k - 1) * np.pi / dom.L) ** 2]))[0]
    scale = float(np.linalg.norm(A))
    h = 0.5 / max(scale, 1e-12)
    N = max(2 * k + 2, 4)
    cfg = SimConfig(pl, dom, N=N, dt=h / substeps, t_max=h * (n_samples - 1) * (1 + 1e-12),
                    initial=InitialCondition.mode(k, eps, -0.7), sample_dt=h)
    tr = integrate(cfg)
    X = np.stack([tr.mode(k, 0), tr.mode(k, 1)])[:, :n_samples]
    X0, X1 = X[:, :-1], X[:, 1:]
    Phi = X1 @ np.linalg.pinv(X0)
    resid = float(np.linalg.norm(X1 - Phi @ X0) / np.linalg.norm(X1))
    if resid > contamination_tol:
        raise ContaminationError(f"fit residual {resid:.2e}; reduce eps")
    mu = np.linalg.eigvals(Phi)
    beta = np.log(mu.astype(complex)) / h
    order = np.argsort(-beta.real)
    return GrowthMeasurement(complex(beta[order[0]]), complex(beta[order[1]]), resid)


@dataclass(frozen=True)
class HysteresisBracket:
    lo: float
    hi: float
    lambdas: np.ndarray
    down_norms: np.ndarray
    up_norms: np.ndarray


def state_norm(state: np.ndarray, bc: BC) -> float:
    """RMS size of a ``(2, N)`` coefficient array (relative to the domain length)."""
    w = np.full(state.shape[1], 0.5)
    if bc is BC.NEUMANN:
        w[0] = 1.0
    return float(np.sqrt(np.sum(w * state**2)))


def probe_hysteresis(p: BrusselatorParams, dom: DomainSpec, lambda_window: tuple[float, float],
                     n_lambda: int = 6, mode: int | None = None, seed_amplitude: float = 0.5,
                     seeds: Sequence[InitialCondition] | None = None, t_settle: float = 300.0,
                     N: int = 128, dt: float = 0.02, small: float = 1e-6,
                     large_threshold: float = 1e-2, subspace: tuple[int, int] | None = None) -> HysteresisBracket | None:
    """Bracket a window of coexisting small and large attractors.

    Seeds of both signs on the target mode are integrated at the top of the
    window; the largest surviving state is continued downward in ``lam``.
    At every ``lam`` a small perturbation of the homogeneous state is also
    integrated. The bracket spans the ``lam`` values where the continued
    state stays large while the small one decays. These seeds are a
    heuristic: nothing guarantees they land in the far basin.
    """
    lo, hi = lambda_window
    if not hi > lo or n_lambda < 2:
        raise ValidationError({"lambda_window": f"need lo < hi and n_lambda >= 2, got {lambda_window}, {n_lambda}"})
    if mode is None:
        from .criticality import regime
        mode = regime(p, dom).k0_set[0]
    lams = np.linspace(hi, lo, n_lambda)
    if seeds is None:
        seeds = [InitialCondition.mode(mode, s * seed_amplitude, 0.0) for s in (1.0, -1.0)]

    def run(lam: float, ic: InitialCondition) -> np.ndarray:
        cfg = SimConfig(p.with_lambda(lam), dom, N=N, dt=dt, t_max=t_settle, initial=ic,
                        sample_dt=t_settle / 10, subspace=subspace)
        try:
            return integrate(cfg).final
        except BlowUpError:
            return np.full((2, N), np.inf)

    finals = [run(lams[0], ic) for ic in seeds]
    finite = [f for f in finals if np.isfinite(f).all()]
    if not finite:
        return None
    state = max(finite, key=lambda f: state_norm(f, dom.bc))
    down = [state_norm(state, dom.bc)]
    for lam in lams[1:]:
        state = run(lam, InitialCondition.from_state(state))
        down.append(state_norm(state, dom.bc) if np.isfinite(state).all() else np.inf)
        if not np.isfinite(state).all():
            break
    down = np.array(down + [np.nan] * (len(lams) - len(down)))
    up = np.array([state_norm(run(lam, InitialCondition.mode(mode, small, 0.0)), dom.bc) for lam in lams])
    both = (down > large_threshold) & np.isfinite(down) & (up < 10 * small)
    if not both.any():
        return None
    sel = lams[both]
    return HysteresisBracket(float(sel.min()), float(sel.max()), lams, down, up)
