"""Step-size convergence of the stepped two-way scheme for both pass orderings.

Prints the error in Delta(t) against the Riccati solution and the departure
from the symmetric form as tau halves.
"""

import argparse

from cvlink.protocols import ChannelParams, delta_closed_form, riccati_coeffs, run_symmetric


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--epsilon", type=float, default=0.4)
    ap.add_argument("--r", type=float, default=3.0)
    ap.add_argument("--t", type=float, default=1.0)
    args = ap.parse_args()
    p = ChannelParams(args.epsilon, args.r, 1.0, 1e-3, args.t)
    ref = delta_closed_form(riccati_coeffs(p), args.t)
    print(f"{'ordering':>12} {'tau':>8} {'|dDelta|':>11} {'|v_x - v_p|':>12} {'|c_x + c_p|':>12}")
    for ordering in ("palindromic", "sequential"):
        for tau in (8e-4, 4e-4, 2e-4, 1e-4):
            s = run_symmetric(p.replace(tau=tau), times=(args.t,), ordering=ordering).final
            print(f"{ordering:>12} {tau:8.1e} {abs(s.delta - ref):11.3e} {abs(s.v_x1 - s.v_p1):12.3e} {abs(s.c_x + s.c_p):12.3e}")


if __name__ == "__main__":
    main()
