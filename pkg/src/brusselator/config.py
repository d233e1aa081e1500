"""Run configuration: an INI-style file plus ``section.key=value`` overrides.

Grammar (``#`` and ``;`` start comments, keys are case-insensitive)::

    [params]        mu1, mu2, alpha, lambda | lambda_offset
    [domain]        bc = dirichlet|neumann, L = 4.0  (or lengths = 1.0, 2.0)
    [analyze]       K, K_psi, delta0 = sigma0_sq|sigma0
    [sweep]         axis = L|alpha|mu1|mu2, start, stop, num, spacing = linear|log
    [simulate]      N, dt, t_max, scheme, sample_dt, initial, mode, amplitude,
                    ratio, noise, seed, subspace = step,offset, detect, blowup
    [verify]        suite, samples
    [output]        out, format = json|csv

``lambda_offset`` places the control parameter relative to the first
critical value, which is convenient for simulation presets. Every problem
found is reported at once, each with its source line.
"""

from __future__ import annotations

import ast
import configparser
import math
import os
import re
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable

from .errors import ValidationError
from .model import BrusselatorParams, DomainSpec

AXES = ("L", "alpha", "mu1", "mu2")
FORMATS = ("json", "csv")
DETECT = ("auto", "steady", "cycle", "none")


class ConfigError(ValidationError):
    """Validation failure whose field names are ``section.key``."""


@dataclass(frozen=True)
class AnalyzeSettings:
    K: int = 512
    K_psi: int = 512
    delta0: str = "sigma0_sq"


@dataclass(frozen=True)
class SweepSettings:
    axis: str = "L"
    start: float = 1.0
    stop: float = 2.0
    num: int = 11
    spacing: str = "linear"

    def values(self) -> list[float]:
        if self.num == 1:
            return [self.start]
        if self.spacing == "log":
            a, b = math.log(self.start), math.log(self.stop)
            return [math.exp(a + (b - a) * i / (self.num - 1)) for i in range(self.num)]
        return [self.start + (self.stop - self.start) * i / (self.num - 1) for i in range(self.num)]


@dataclass(frozen=True)
class SimulateSettings:
    N: int = 64
    dt: float = 0.01
    t_max: float = 200.0
    scheme: str = "etdrk4"
    sample_dt: float | None = 0.1
    initial: str = "mode"
    mode: int = 1
    amplitude: float = 1e-3
    ratio: float = 1.0
    noise: float = 0.0
    seed: int | None = None
    subspace: tuple[int, int] | None = None
    detect: str = "auto"
    blowup: float = 1e6


@dataclass(frozen=True)
class VerifySettings:
    suite: str = "all"
    samples: int = 200


@dataclass(frozen=True)
class OutputSettings:
    out: str | None = None
    format: str = "json"


@dataclass(frozen=True)
class RunConfig:
    params: BrusselatorParams
    domain: DomainSpec
    lambda_offset: float | None = None
    analyze: AnalyzeSettings = field(default_factory=AnalyzeSettings)
    sweep: SweepSettings | None = None
    simulate: SimulateSettings = field(default_factory=SimulateSettings)
    verify: VerifySettings = field(default_factory=VerifySettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    source: str | None = None

    def resolved_params(self) -> BrusselatorParams:
        """Parameters with ``lambda_offset`` (if any) turned into an absolute value."""
        if self.lambda_offset is None:
            return self.params
        from .criticality import regime

        lam = regime(self.params, self.domain).lambda_c + self.lambda_offset
        if lam < 0:
            raise ConfigError({"params.lambda_offset": f"gives negative lambda {lam:.6g}"})
        return self.params.with_lambda(lam)

    def with_seed(self, seed: int | None) -> "RunConfig":
        if seed is None:
            return self
        return replace(self, simulate=replace(self.simulate, seed=seed))


# ---------------------------------------------------------------------------
# parsing helpers


def _to_float(s: str) -> float:
    x = float(s)
    if not math.isfinite(x):
        raise ValueError("must be finite")
    return x


def _to_int(s: str) -> int:
    x = float(s)
    if x != int(x):
        raise ValueError("must be an integer")
    return int(x)


def _choice(options: Iterable[str], fold: bool = True) -> Callable[[str], str]:
    opts = tuple(options)

    def conv(s: str) -> str:
        for o in opts:
            if (s.lower() == o.lower()) if fold else s == o:
                return o
        raise ValueError(f"expected one of {', '.join(opts)}")

    return conv


def _optional(conv: Callable[[str], Any]) -> Callable[[str], Any]:
    def wrapped(s: str):
        return None if s.strip().lower() in ("", "none") else conv(s)

    return wrapped


def _pair(s: str) -> tuple[int, int]:
    parts = [p for p in re.split(r"[,\s]+", s.strip()) if p]
    if len(parts) != 2:
        raise ValueError("expected 'step, offset'")
    return _to_int(parts[0]), _to_int(parts[1])


def _floats(s: str) -> tuple[float, ...]:
    parts = [p for p in re.split(r"[,\s]+", s.strip()) if p]
    if not parts:
        raise ValueError("empty list")
    return tuple(_to_float(p) for p in parts)


SCHEMA: dict[str, dict[str, Callable[[str], Any]]] = {
    "params": {"mu1": _to_float, "mu2": _to_float, "alpha": _to_float, "lambda": _to_float,
               "lambda_offset": _to_float},
    "domain": {"bc": _choice(("dirichlet", "neumann")), "l": _to_float, "lengths": _floats},
    "analyze": {"k": _to_int, "k_psi": _to_int, "delta0": _choice(("sigma0_sq", "sigma0"))},
    "sweep": {"axis": _choice(AXES), "start": _to_float, "stop": _to_float, "num": _to_int,
              "spacing": _choice(("linear", "log"))},
    "simulate": {"n": _to_int, "dt": _to_float, "t_max": _to_float, "scheme": _choice(("etdrk4", "lie", "strang")),
                 "sample_dt": _optional(_to_float), "initial": _choice(("zero", "homogeneous", "mode", "noise")),
                 "mode": _to_int, "amplitude": _to_float, "ratio": _to_float, "noise": _to_float,
                 "seed": _optional(_to_int), "subspace": _optional(_pair), "detect": _choice(DETECT),
                 "blowup": _to_float},
    "verify": {"suite": str, "samples": _to_int},
    "output": {"out": _optional(str), "format": _choice(FORMATS)},
}

_SIM_FIELDS = {"n": "N"}


def _line_index(text: str) -> dict[tuple[str, str], int]:
    index: dict[tuple[str, str], int] = {}
    section = None
    for no, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip().lower()
            index.setdefault((section, ""), no)
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", s)
        if m and section is not None:
            index[(section, m.group(1).strip().lower())] = no
    return index


def parse_override(item: str) -> tuple[str, str, str]:
    """``"section.key=value"`` -> ``(section, key, value)``."""
    m = re.fullmatch(r"\s*([A-Za-z_]\w*)\.([A-Za-z_]\w*)\s*=(.*)", item)
    if not m:
        raise ConfigError({"--set": f"expected section.key=value, got {item!r}"})
    return m.group(1).lower(), m.group(2).lower(), m.group(3).strip()


def load_config(path: str | os.PathLike | None = None, overrides: Iterable[str] = (),
                text: str | None = None, require_model: bool = True) -> RunConfig:
    """Parse ``path`` (or ``text``), apply overrides and validate everything.

    Raises :class:`ConfigError` listing every offending ``section.key`` with
    the line it came from.
    """
    problems: dict[str, str] = {}
    if text is None and path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise ConfigError({"config": f"cannot read {path}: {err.strerror}"}) from None
    text = text or ""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        cp.read_string(text, source=str(path or "<config>"))
    except configparser.MissingSectionHeaderError as err:
        raise ConfigError({"config": f"line {err.lineno}: expected a [section] header before "
                                     f"{err.line.strip()!r}"}) from None
    except configparser.ParsingError as err:
        raise ConfigError({"config": "; ".join(f"line {no}: cannot parse {ast.literal_eval(line).strip()!r}"
                                               for no, line in err.errors)}) from None
    except configparser.Error as err:
        line = getattr(err, "lineno", None)
        where = f"line {line}: " if line else ""
        msg = re.sub(r"^While reading from .*?\]: ", "", str(err).splitlines()[0])
        raise ConfigError({"config": where + msg}) from None
    lines = _line_index(text)

    raw: dict[str, dict[str, tuple[str, str]]] = {}
    for sec in cp.sections():
        s = sec.lower()
        if s not in SCHEMA:
            problems[s] = f"line {lines.get((s, ''), '?')}: unknown section; known: {', '.join(SCHEMA)}"
            continue
        for key, value in cp.items(sec):
            raw.setdefault(s, {})[key] = (value, f"line {lines.get((s, key), '?')}")
    for item in overrides:
        try:
            s, key, value = parse_override(item)
        except ConfigError as err:
            problems.update(err.fields)
            continue
        raw.setdefault(s, {})[key] = (value, "--set")

    values: dict[str, dict[str, Any]] = {}
    for s, entries in raw.items():
        if s not in SCHEMA:
            problems[s] = f"--set: unknown section; known: {', '.join(SCHEMA)}"
            continue
        for key, (value, where) in entries.items():
            conv = SCHEMA[s].get(key)
            if conv is None:
                problems[f"{s}.{key}"] = f"{where}: unknown key; known: {', '.join(SCHEMA[s])}"
                continue
            try:
                values.setdefault(s, {})[key] = conv(value)
            except ValueError as err:
                problems[f"{s}.{key}"] = f"{where}: {err} (got {value!r})"

    def where(s: str, key: str) -> str:
        return raw.get(s, {}).get(key, ("", f"line {lines.get((s, ''), '?')}"))[1]

    pv = values.get("params", {})
    dv = values.get("domain", {})
    params = domain = None
    if require_model:
        for key in ("mu1", "mu2", "alpha"):
            if key not in pv and f"params.{key}" not in problems:
                problems[f"params.{key}"] = "required"
        if "bc" not in dv and "domain.bc" not in problems:
            problems["domain.bc"] = "required"
        if "l" not in dv and "lengths" not in dv and "domain.l" not in problems and "domain.lengths" not in problems:
            problems["domain.L"] = "required (or domain.lengths)"
    for key in ("mu1", "mu2", "alpha", "lambda"):
        if key in pv and not (pv[key] > 0 or (key == "lambda" and pv[key] == 0)):
            problems[f"params.{key}"] = f"{where('params', key)}: must be {'>=' if key == 'lambda' else '>'} 0"
    if "lambda" in pv and "lambda_offset" in pv:
        problems["params.lambda_offset"] = f"{where('params', 'lambda_offset')}: conflicts with params.lambda"
    if all(k in pv for k in ("mu1", "mu2", "alpha")) and not any(k.startswith("params.") for k in problems):
        try:
            params = BrusselatorParams(pv["mu1"], pv["mu2"], pv["alpha"], pv.get("lambda", 0.0))
        except ValidationError as err:
            for k, v in err.fields.items():
                problems[f"params.{k}"] = f"{where('params', k)}: {v}"
    if "bc" in dv and ("l" in dv or "lengths" in dv):
        if "l" in dv and "lengths" in dv:
            problems["domain.lengths"] = f"{where('domain', 'lengths')}: give L or lengths, not both"
        else:
            try:
                domain = DomainSpec(dv.get("lengths", (dv.get("l"),)), dv["bc"])
            except ValidationError as err:
                for k, v in err.fields.items():
                    key = "l" if "l" in dv else "lengths"
                    problems[f"domain.{k}"] = f"{where('domain', key)}: {v}"

    analyze = AnalyzeSettings(**{{"k": "K", "k_psi": "K_psi"}.get(k, k): v
                                 for k, v in values.get("analyze", {}).items()})
    if analyze.K < 4:
        problems["analyze.K"] = f"{where('analyze', 'k')}: must be >= 4"
    if analyze.K_psi < 4:
        problems["analyze.K_psi"] = f"{where('analyze', 'k_psi')}: must be >= 4"

    sweep = None
    if "sweep" in values or "sweep" in raw:
        sweep = SweepSettings(**values.get("sweep", {}))
        w = where("sweep", "num")
        if sweep.num < 1:
            problems["sweep.num"] = f"{w}: need a positive number of points, got {sweep.num}"
        if sweep.stop < sweep.start or (sweep.num > 1 and sweep.stop == sweep.start):
            problems["sweep.stop"] = f"{where('sweep', 'stop')}: empty range [{sweep.start}, {sweep.stop}]"
        if sweep.start <= 0:
            problems["sweep.start"] = f"{where('sweep', 'start')}: {sweep.axis} must stay positive"

    sim = SimulateSettings(**{_SIM_FIELDS.get(k, k): v for k, v in values.get("simulate", {}).items()})
    for key, ok, msg in (("n", sim.N >= 2, "need N >= 2"), ("dt", sim.dt > 0, "must be > 0"),
                         ("t_max", sim.t_max > sim.dt, "must exceed dt"),
                         ("mode", 1 <= sim.mode <= sim.N, f"must lie in 1..N={sim.N}"),
                         ("noise", sim.noise >= 0, "must be >= 0"), ("blowup", sim.blowup > 0, "must be > 0")):
        if not ok:
            problems[f"simulate.{_SIM_FIELDS.get(key, key)}"] = f"{where('simulate', key)}: {msg}"

    verify = VerifySettings(**values.get("verify", {}))
    if verify.samples < 1:
        problems["verify.samples"] = f"{where('verify', 'samples')}: must be >= 1"

    output = OutputSettings(**values.get("output", {}))
    if output.out:
        parent = os.path.dirname(os.path.abspath(output.out))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            problems["output.out"] = f"{where('output', 'out')}: directory {parent} is not writable"

    if problems:
        raise ConfigError(problems)
    if not require_model and (params is None or domain is None):
        params = params or BrusselatorParams(1.0, 1.0, 1.0)
        domain = domain or DomainSpec.interval(1.0, "neumann")
    return RunConfig(params, domain, pv.get("lambda_offset"), analyze, sweep, sim, verify, output,
                     str(path) if path is not None else None)
