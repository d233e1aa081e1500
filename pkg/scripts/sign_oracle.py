"""Sub/supercritical verdicts from simulation next to the analytic b1 sign."""

import math
import time

from brusselator.analysis import analyze
from brusselator.model import BrusselatorParams, DomainSpec
from brusselator.oracle import sign_of_b1_via_simulation

CASES = {
    "neumann hopf": (BrusselatorParams(1.0, 1.0, 2.0), DomainSpec.interval(math.pi, "neumann")),
    "dirichlet hopf": (BrusselatorParams(2e-3, 4e-3, 2.0), DomainSpec.interval(4.0, "dirichlet")),
    "neumann pitchfork": (BrusselatorParams(2e-3, 4e-3, 3.0), DomainSpec.interval(4.0, "neumann")),
    "dirichlet jump": (BrusselatorParams(2e-3, 4e-3, 3.0), DomainSpec.interval(3.9, "dirichlet")),
}


def main():
    print(f"{'case':<18} {'b1':>12} {'type':>5} {'verdict':>13} {'eps':>9} {'sec':>6}")
    for name, (p, dom) in CASES.items():
        r = analyze(p, dom)
        t0 = time.perf_counter()
        v = sign_of_b1_via_simulation(p, dom)
        dt = time.perf_counter() - t0
        print(f"{name:<18} {r.transition.b1:12.5g} {r.transition.type:>5} {v.verdict.value:>13} "
              f"{v.eps:9.3g} {dt:6.1f}")


if __name__ == "__main__":
    main()
