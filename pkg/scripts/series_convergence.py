"""Partial sums of the Hopf coefficient series and the Galerkin normal form."""

import argparse

from brusselator.hopf_transition import b1_hopf_series
from brusselator.model import BrusselatorParams, DomainSpec
from brusselator.oracle import hopf_b1_galerkin


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--L", type=float, default=4.0)
    ap.add_argument("--galerkin", type=int, nargs="*", default=[8, 16, 32, 48])
    args = ap.parse_args()

    p = BrusselatorParams(2e-3, 4e-3, args.alpha)
    dom = DomainSpec.interval(args.L, "dirichlet")
    ref = b1_hopf_series(p, dom, 2048)
    print(f"{'K':>6} {'b1':>22} {'|b1 - b1_2048|':>15} {'tail bound':>11}")
    for K in (16, 32, 64, 128, 256, 512, 1024):
        s = b1_hopf_series(p, dom, K)
        print(f"{K:6d} {s.value:22.15g} {abs(s.value - ref.value):15.3e} {s.terms.tail_bound:11.3e}")
    print("\nvariants:")
    for name, v in ref.variants.items():
        print(f"  {name:<18} {v:.12g}")
    print("\nGalerkin center-manifold coefficient:")
    for N in args.galerkin:
        g = hopf_b1_galerkin(p, dom, N=N)
        print(f"  N={N:3d} {g:.12g}  rel {abs(g - ref.value) / abs(ref.value):.2e}")


if __name__ == "__main__":
    main()
