"""End-to-end analysis: regime, transition type, coefficients and expansions.

:func:`analyze` condenses the analytic modules into an :class:`AnalysisReport`
made of plain values, so it serializes to JSON and parses back to an equal
object. Floats are written in shortest round-trip form, which makes the
output byte-stable for a given input.
"""

from __future__ import annotations

import dataclasses
import json
import math
import typing
from dataclasses import dataclass, field
from typing import Any

from .criticality import Regime, critical_lengths, regime
from .errors import BrusselatorError, NoCriticalScale, ValidationError
from .hopf_transition import DEFAULT_K, Delta0, classify_hopf, periodic_expansion
from .model import BC, BrusselatorParams, DomainSpec
from .steady_transition import SteadyKind, classify_steady

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class InputsEcho:
    mu1: float
    mu2: float
    alpha: float
    lengths: tuple[float, ...]
    bc: str
    kinetics: str = "translated"


@dataclass(frozen=True)
class CriticalSummary:
    lambda0: float
    lambda1: float
    lambda_c: float
    k0_set: tuple[int, ...]
    regime: str
    sigma0_sq: float
    rho1: float
    rho_k0: float


@dataclass(frozen=True)
class LengthsSummary:
    case: str
    k0: int
    values: tuple[float, ...]
    real_first: tuple[float, float]
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class TransitionSummary:
    """``kind`` is Pitchfork, Mixed or Hopf; ``type`` is I, II, III or None."""

    kind: str
    type: str | None
    b1: float | None
    b1_variants: dict[str, float] = field(default_factory=dict)
    cube: float | None = None


@dataclass(frozen=True)
class ExpansionSummary:
    """Leading-order amplitude law.

    Steady: ``y = constant * beta`` (linear) or ``y**2 = constant * beta``
    (sqrt) along ``xi``. Hopf: ``constant`` is the normalized radius and
    ``amp_v1``/``amp_v2`` the component amplitudes, each per unit of
    ``sqrt(|lam - lam1|)`` on ``side``.
    """

    law: str
    side: str
    constant: float | None
    xi: tuple[float, ...] = ()
    xi_adj: tuple[float, ...] = ()
    sigma0: float | None = None
    theta: float | None = None
    amp_v1: float | None = None
    amp_v2: float | None = None
    printed: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class AnalysisReport:
    inputs: InputsEcho
    critical: CriticalSummary
    lengths: LengthsSummary | None
    transition: TransitionSummary | None
    expansion: ExpansionSummary | None
    warnings: tuple[str, ...] = ()
    status: str = "ok"  # ok | degenerate | inconclusive
    schema: int = SCHEMA_VERSION

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(to_plain(self), indent=indent, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return _decode(cls, json.loads(text))


# ---------------------------------------------------------------------------
# serialization


def to_plain(obj: Any) -> Any:
    """Dataclasses, tuples and floats as JSON-ready values (non-finite floats become strings)."""
    if dataclasses.is_dataclass(obj):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, float) or hasattr(obj, "__float__"):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _decode(tp: Any, data: Any) -> Any:
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if data is None:
        return None
    if origin is typing.Union or (origin is not None and str(origin) == "<class 'types.UnionType'>"):
        inner = [a for a in args if a is not type(None)]
        return _decode(inner[0], data)
    if dataclasses.is_dataclass(tp):
        hints = typing.get_type_hints(tp)
        return tp(**{k: _decode(hints[k], v) for k, v in data.items()})
    if origin is tuple:
        elem = args[0] if args else Any
        return tuple(_decode(elem, v) for v in data)
    if origin is dict:
        return {k: _decode(args[1], v) for k, v in data.items()}
    if tp is float:
        return float(data)
    return data


def _f(x) -> float:
    return float(x)


# ---------------------------------------------------------------------------
# pipeline


def analyze(p: BrusselatorParams, dom: DomainSpec, K: int = DEFAULT_K, K_psi: int = 512,
            delta0: Delta0 | str = Delta0.SIGMA0_SQ, kinetics: str = "translated") -> AnalysisReport:
    """Regime, classification, cubic coefficient and amplitude law for ``(p, dom)``."""
    inputs = InputsEcho(_f(p.mu1), _f(p.mu2), _f(p.alpha), tuple(_f(L) for L in dom.lengths),
                        dom.bc.value, kinetics)
    cn = regime(p, dom)
    crit = CriticalSummary(_f(cn.lambda0), _f(cn.lambda1), _f(min(cn.lambda0, cn.lambda1)),
                           tuple(int(k) for k in cn.k0_set), cn.regime.value, _f(cn.sigma0_sq),
                           _f(cn.rho1), _f(cn.rho_k0))
    warnings: list[str] = []
    lengths = None
    if dom.is_interval:
        try:
            wavenumber = cn.k0_set[0] - (1 if dom.bc is BC.NEUMANN else 0)
            cl = critical_lengths(p, dom.bc, max(wavenumber, 1))
            lengths = LengthsSummary(cl.case.value, int(cl.k0), tuple(_f(v) for v in cl.values),
                                     (_f(cl.real_first[0]), _f(cl.real_first[1])), tuple(cl.notes))
        except (NoCriticalScale, ValidationError) as err:
            warnings.append(f"critical lengths: {err}")
    if cn.regime is Regime.DEGENERATE:
        warnings.append("lambda0 == lambda1: real and oscillatory modes cross together")
        return AnalysisReport(inputs, crit, lengths, None, None, tuple(warnings), "degenerate")
    if cn.regime is Regime.REAL_FIRST and len(cn.k0_set) > 1:
        warnings.append(f"two critical modes {cn.k0_set}: the single-mode reduction does not apply")
        return AnalysisReport(inputs, crit, lengths, None, None, tuple(warnings), "degenerate")

    try:
        if cn.regime is Regime.REAL_FIRST:
            trans, exp, w = _steady(p, dom, K_psi)
        else:
            trans, exp, w = _hopf(p, dom, K, delta0)
    except BrusselatorError as err:
        warnings.append(f"{type(err).__name__}: {err}")
        return AnalysisReport(inputs, crit, lengths, None, None, tuple(warnings), "degenerate")
    warnings.extend(w)
    status = "ok" if trans.type is not None else "inconclusive"
    return AnalysisReport(inputs, crit, lengths, trans, exp, tuple(warnings), status)


def _steady(p, dom, K_psi):
    rep = classify_steady(p, dom, K_psi)
    ex = rep.expansion
    warnings: list[str] = []
    if rep.kind is SteadyKind.MIXED:
        trans = TransitionSummary(rep.kind.value, rep.type, None, {}, _f(rep.cube.value))
        side = "both"
    else:
        b = rep.b1
        variants = {"psi": _f(b.value)}
        if b.closed_form is not None:
            variants["closed_form"] = _f(b.closed_form)
        variants.update({f"printed_{k}": _f(v) for k, v in b.printed_variants.items()})
        warnings.extend(b.warnings)
        if b.inconclusive:
            warnings.append("b1 is within roundoff of zero; sign undecided")
        trans = TransitionSummary(rep.kind.value, rep.type, _f(b.value), variants, _f(rep.cube.value))
        side = "above" if b.value < 0 else "below"
    exp = ExpansionSummary(ex.law, side, _f(ex.constant), tuple(_f(v) for v in ex.xi), tuple(_f(v) for v in ex.xi_adj))
    return trans, exp, warnings


def _hopf(p, dom, K, delta0):
    rep = classify_hopf(p, dom, K, delta0)
    variants = dict(rep.series.variants) if rep.series is not None else {"closed_form": rep.b1}
    trans = TransitionSummary("Hopf", rep.type, _f(rep.b1), {k: _f(v) for k, v in variants.items()})
    warnings = list(rep.warnings)
    exp = None
    if rep.b1 != 0:
        side = "above" if rep.b1 < 0 else "below"
        lam = rep.lambda1 + (1.0 if rep.b1 < 0 else -1.0)  # unit offset gives the sqrt-law coefficients
        orbit = periodic_expansion(p, dom, rep.b1, lam)
        exp = ExpansionSummary("sqrt", side, _f(orbit.radius), sigma0=_f(orbit.sigma0), theta=_f(orbit.theta),
                               amp_v1=_f(orbit.amp_v1), amp_v2=_f(orbit.amp_v2),
                               printed={k: _f(v) for k, v in orbit.printed.items()})
    return trans, exp, warnings
