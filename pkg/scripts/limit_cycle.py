"""Homogeneous limit cycle on a Neumann interval past the Hopf threshold.

Prints the measured period and amplitude next to the normal-form
prediction, then the amplitude ratio along a continuation in lambda.
"""

import argparse
import math

from brusselator.hopf_transition import periodic_expansion
from brusselator.model import BrusselatorParams, DomainSpec
from brusselator.simulate import InitialCondition, SimConfig, detect_cycle, integrate


def run(p, dom, lam, t_max, initial, dt):
    cfg = SimConfig(p.with_lambda(lam), dom, N=4, dt=dt, t_max=t_max, sample_dt=0.02, initial=initial)
    tr = integrate(cfg)
    return tr, detect_cycle(tr, 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--lams", type=float, nargs="+", default=[5.1, 5.04, 5.01])
    ap.add_argument("--t-max", type=float, default=1500.0)
    ap.add_argument("--dt", type=float, default=0.02)
    args = ap.parse_args()

    p = BrusselatorParams(2e-3, 4e-3, args.alpha)
    dom = DomainSpec.interval(math.pi, "neumann")
    state = None
    print(f"{'lambda':>8} {'period':>10} {'amp_v1':>10} {'predicted':>10} {'printed':>10}")
    for lam in args.lams:
        ic = InitialCondition.preset("homogeneous", amplitude=0.01) if state is None \
            else InitialCondition.from_state(state)
        tr, cy = run(p, dom, lam, args.t_max, ic, args.dt)
        orb = periodic_expansion(p, dom, lam=lam)
        print(f"{lam:8.4f} {cy.period:10.6f} {cy.amplitude:10.6f} {orb.amp_v1:10.6f} {orb.printed['amp_v1']:10.6f}")
        state = tr.final


if __name__ == "__main__":
    main()
