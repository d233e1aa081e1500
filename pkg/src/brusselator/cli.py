"""Command-line entry point: ``brusselator analyze|sweep|simulate|verify``.

Exit codes: 0 success, 1 usage or validation error, 2 degenerate or
inconclusive result (the report is still written), 3 numerical blow-up.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Any, Sequence

from .analysis import analyze, to_plain
from .config import AXES, RunConfig, load_config
from .errors import BlowUpError, BrusselatorError, NotCyclic, NotSteady, ValidationError
from .model import BrusselatorParams, DomainSpec
from .oracle import write_jsonl
from .simulate import InitialCondition, SimConfig, detect_cycle, detect_steady, integrate
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INVALID, EXIT_SCIENCE, EXIT_BLOWUP = 0, 1, 2, 3
SWEEP_COLUMNS = ("lambda0", "lambda1", "regime", "b1", "type", "error")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        rows: list[tuple[str, Any]] = []
        for k, v in obj.items():
            rows.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return rows
    if isinstance(obj, list):
        return [(prefix, json.dumps(obj))]
    return [(prefix, "" if obj is None else obj)]


def _csv(rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(cfg: RunConfig) -> int:
    a = cfg.analyze
    report = analyze(cfg.params, cfg.domain, K=a.K, K_psi=a.K_psi, delta0=a.delta0)
    if cfg.output.format == "csv":
        text = _csv([("field", "value")] + _flatten(to_plain(report)))
    else:
        text = report.to_json() + "\n"
    _emit(text, cfg.output.out)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK if report.status == "ok" else EXIT_SCIENCE


def _sweep_point(args: tuple[BrusselatorParams, DomainSpec, str, float, int, int]) -> dict[str, Any]:
    p, dom, axis, value, K, K_psi = args
    row: dict[str, Any] = {axis: value}
    try:
        if axis == "L":
            dom = DomainSpec.interval(value, dom.bc) if dom.is_interval else DomainSpec.box(
                (value,) + dom.lengths[1:], dom.bc)
        else:
            p = replace(p, **{axis: value})
            p = BrusselatorParams(p.mu1, p.mu2, p.alpha, p.lam)  # revalidate
        r = analyze(p, dom, K=K, K_psi=K_psi)
        row.update(lambda0=r.critical.lambda0, lambda1=r.critical.lambda1, regime=r.critical.regime,
                   b1=r.transition.b1 if r.transition else None,
                   type=r.transition.type if r.transition else None,
                   error="; ".join(r.warnings) if r.status != "ok" else "")
    except BrusselatorError as err:
        row.update(lambda0=None, lambda1=None, regime=None, b1=None, type=None, error=f"{type(err).__name__}: {err}")
    return row


def sweep_rows(cfg: RunConfig, jobs: int = 1) -> list[dict[str, Any]]:
    """One row per grid point in grid order, whatever ``jobs`` is."""
    sw = cfg.sweep
    if sw is None:
        raise ValidationError({"sweep": "missing [sweep] section (axis, start, stop, num)"})
    tasks = [(cfg.params, cfg.domain, sw.axis, v, cfg.analyze.K, cfg.analyze.K_psi) for v in sw.values()]
    if jobs <= 1 or len(tasks) < 2:
        return [_sweep_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def cmd_sweep(cfg: RunConfig, jobs: int) -> int:
    rows = sweep_rows(cfg, jobs)
    axis = cfg.sweep.axis
    if cfg.output.format == "json":
        text = json.dumps(to_plain(rows), indent=2) + "\n"
    else:
        text = _csv([(axis,) + SWEEP_COLUMNS] + [[_cell(r[c]) for c in (axis,) + SWEEP_COLUMNS] for r in rows])
    _emit(text, cfg.output.out)
    return EXIT_OK


def _cell(v: Any) -> Any:
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else v


def _sim_config(cfg: RunConfig) -> SimConfig:
    s = cfg.simulate
    p = cfg.resolved_params()
    kw = {"amplitude": s.amplitude, "ratio": s.ratio, "k": s.mode, "seed": s.seed}
    ic = InitialCondition.preset(s.initial, **kw)
    if s.noise and s.initial != "noise":
        ic = replace(ic, noise=s.noise, seed=s.seed)
    try:
        return SimConfig(p, cfg.domain, N=s.N, dt=s.dt, t_max=s.t_max, initial=ic, scheme=s.scheme,
                         sample_dt=s.sample_dt, subspace=s.subspace, blowup=s.blowup, target_mode=s.mode)
    except ValidationError as err:
        names = {"target_mode": "mode"}
        raise ValidationError({f"simulate.{names.get(k, k)}": v for k, v in err.fields.items()}) from None


def diagnose(traj, mode: int, detect: str = "auto") -> dict[str, Any]:
    """Steady or cycle summary of a trajectory as plain values."""
    reasons = []
    if detect in ("auto", "steady"):
        try:
            st = detect_steady(traj, mode)
            return {"kind": "steady", "mode": st.mode, "amplitude": st.amplitude,
                    "coefficient": [float(c) for c in st.coefficient], "residual": st.residual}
        except NotSteady as err:
            reasons.append(str(err))
    if detect in ("auto", "cycle"):
        try:
            cy = detect_cycle(traj, mode)
            return {"kind": "cycle", "mode": mode, "period": cy.period, "amplitude": cy.amplitude,
                    "amplitude_v2": cy.amplitude_v2, "drift": cy.drift, "n_cycles": cy.n_cycles,
                    "converged": bool(cy.converged), "mean_level": cy.mean_level}
        except NotCyclic as err:
            reasons.append(str(err))
    return {"kind": "none", "reason": "; ".join(reasons)}


def cmd_simulate(cfg: RunConfig) -> int:
    sc = _sim_config(cfg)
    out = cfg.output.out or "trajectory.csv"
    diag_path = os.path.splitext(out)[0] + ".diagnostics.json"
    info: dict[str, Any] = {"lambda": sc.params.lam, "N": sc.N, "dt": sc.dt, "t_max": sc.t_max,
                            "scheme": sc.scheme, "trajectory": out}
    code = EXIT_OK
    try:
        traj = integrate(sc)
        info["diagnostics"] = diagnose(traj, cfg.simulate.mode, cfg.simulate.detect) \
            if cfg.simulate.detect != "none" else {"kind": "none", "reason": "detection disabled"}
        if info["diagnostics"]["kind"] == "none" and cfg.simulate.detect != "none":
            code = EXIT_SCIENCE
    except BlowUpError as err:
        traj = err.trajectory
        info["diagnostics"] = {"kind": "blowup", "t": err.t, "reason": str(err)}
        code = EXIT_BLOWUP
    if traj is not None:
        traj.to_csv(out)
    text = json.dumps(to_plain(info), indent=2) + "\n"
    with open(diag_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    sys.stdout.write(text)
    return code


def cmd_verify(cfg: RunConfig, suite: str | None, jobs: int, seed: int | None) -> int:
    name = suite or cfg.verify.suite
    if name not in SUITES:
        print(f"error: unknown suite {name!r}; known suites: {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_INVALID
    reports = run_suite(name, jobs=jobs, seed=seed or 0, samples=cfg.verify.samples)
    if cfg.output.format == "csv":
        fields = ("quantity", "analytic", "oracle", "rel", "tol", "passed", "detail")
        text = _csv([fields] + [[_cell(getattr(r, f)) for f in fields] for r in reports])
        _emit(text, cfg.output.out)
    else:
        buf = io.StringIO()
        write_jsonl(reports, buf)
        _emit(buf.getvalue(), cfg.output.out)
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed", file=sys.stderr)
    for r in failed:
        print(f"FAILED {r.quantity}: rel={r.rel:.3g} tol={r.tol:.3g} {r.detail}", file=sys.stderr)
    return EXIT_INVALID if failed else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [params], [domain], ... sections")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override one config value (repeatable)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    common.add_argument("--seed", type=int, help="seed for randomized checks and noisy initial data")

    parser = argparse.ArgumentParser(prog="brusselator", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="regime, transition type and amplitude laws")
    sw = sub.add_parser("sweep", parents=[common], help="tabulate the analysis along one parameter")
    sw.add_argument("--axis", choices=AXES)
    sw.add_argument("--start", type=float)
    sw.add_argument("--stop", type=float)
    sw.add_argument("--num", type=int)
    sub.add_parser("simulate", parents=[common], help="Galerkin run with steady/cycle diagnostics")
    v = sub.add_parser("verify", parents=[common], help="oracle checks; nonzero exit on any failure")
    v.add_argument("--suite", help=f"one of {', '.join(SUITES)}")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.out is not None:
        overrides.append(f"output.out={args.out}")
    if args.format is not None:
        overrides.append(f"output.format={args.format}")
    if args.command == "sweep":
        overrides += [f"sweep.{k}={getattr(args, k)}" for k in ("axis", "start", "stop", "num")
                      if getattr(args, k) is not None]
        if args.format is None:
            overrides.append("output.format=csv")
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        cfg = load_config(args.config, overrides, require_model=args.command != "verify")
        cfg = cfg.with_seed(args.seed)
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.jobs)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        return cmd_verify(cfg, args.suite, args.jobs, args.seed)
    except ValidationError as err:
        print("error: invalid configuration", file=sys.stderr)
        for k, v in err.fields.items():
            print(f"  {k}: {v}", file=sys.stderr)
        return EXIT_INVALID
    except BrusselatorError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_SCIENCE


if __name__ == "__main__":
    sys.exit(main())
