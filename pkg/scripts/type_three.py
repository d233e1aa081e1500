"""Mixed (Type-III) transition on a Dirichlet interval.

Compares the simulated steady state with the transcritical prediction
``y = C beta`` as lambda approaches lambda0 from above, then brackets the
hysteresis window below lambda0.
"""

import argparse

from brusselator.errors import BlowUpError, NotSteady
from brusselator.model import BrusselatorParams, DomainSpec
from brusselator.simulate import InitialCondition, SimConfig, detect_steady, integrate, probe_hysteresis
from brusselator.steady_transition import branch_expansion


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--offsets", type=float, nargs="+", default=[0.04, 0.02, 0.01])
    ap.add_argument("--t-max", type=float, default=1500.0, help="minimum run length")
    ap.add_argument("--skip-hysteresis", action="store_true")
    args = ap.parse_args()

    p = BrusselatorParams(2e-3, 4e-3, 3.0)
    dom = DomainSpec.interval(4.0, "dirichlet")
    ex = branch_expansion(p, dom)
    k = ex.mode.k
    print(f"critical mode {k}, lambda0 = {ex.lambda0:.10f}, C = {ex.C:.6f}")
    print(f"{'offset':>8} {'y':>11} {'C*beta':>11} {'ratio':>8}")
    for off in args.offsets:
        lam = ex.lambda0 + off
        t_max = max(args.t_max, 30.0 / ex.beta(lam))  # relaxation slows down near lambda0
        cfg = SimConfig(p.with_lambda(lam), dom, N=128, dt=0.02, t_max=t_max, subspace=(2, 1),
                        target_mode=k, sample_dt=1.0, initial=InitialCondition({k: -1e-3}, {k: 1e-3}))
        try:
            y = detect_steady(integrate(cfg), k).projection(ex.xi, ex.xi_adj)
        except (BlowUpError, NotSteady) as err:
            print(f"{off:8.4f} {type(err).__name__}: {err}")
            continue
        pred = ex.amplitude(lam)
        print(f"{off:8.4f} {y:11.7f} {pred:11.7f} {y / pred:8.4f}")

    if not args.skip_hysteresis:
        br = probe_hysteresis(p, dom, (ex.lambda0 - 0.4, ex.lambda0 + 0.02), n_lambda=8, N=96, subspace=(2, 1))
        print("no bistable window found" if br is None else f"bistable window [{br.lo:.6f}, {br.hi:.6f}]")


if __name__ == "__main__":
    main()
