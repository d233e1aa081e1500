"""Neumann pitchfork: b1 along every path and the branch amplitude versus simulation."""

import argparse

from brusselator.model import BrusselatorParams, DomainSpec
from brusselator.simulate import InitialCondition, SimConfig, detect_steady, integrate
from brusselator.steady_transition import b1_steady, branch_expansion


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=3.0)
    ap.add_argument("--L", type=float, default=4.0)
    ap.add_argument("--offsets", type=float, nargs="+", default=[0.01, 0.02, 0.05, 0.1])
    ap.add_argument("--t-max", type=float, default=1500.0)
    args = ap.parse_args()

    p = BrusselatorParams(2e-3, 4e-3, args.alpha)
    dom = DomainSpec.interval(args.L, "neumann")
    b = b1_steady(p, dom)
    rows = {"psi reduction": b.value, "closed form": b.closed_form}
    rows.update({f"printed {name}": v for name, v in b.printed_variants.items()})
    for label, v in rows.items():
        print(f"b1 {label:<18}{v:.12g}")

    ex = branch_expansion(p, dom, b1=b.value)
    k = ex.mode.k
    print(f"\ncritical mode {k}, lambda0 = {ex.lambda0:.10f}")
    print(f"{'offset':>8} {'y(+)':>11} {'y(-)':>11} {'predicted':>11} {'rel':>9}")
    for off in args.offsets:
        ys = []
        for s in (1, -1):
            cfg = SimConfig(p.with_lambda(ex.lambda0 + off), dom, N=128, dt=0.02, t_max=args.t_max,
                            subspace=(k - 1, 0), target_mode=k, sample_dt=1.0,
                            initial=InitialCondition({k: s * 1e-3}, {k: -s * 0.7e-3}))
            ys.append(detect_steady(integrate(cfg), k).projection(ex.xi, ex.xi_adj))
        pred = ex.amplitude(ex.lambda0 + off)
        print(f"{off:8.3f} {ys[0]:11.7f} {ys[1]:11.7f} {pred:11.7f} {abs(abs(ys[0]) - pred) / pred:9.2e}")


if __name__ == "__main__":
    main()
