"""Best negativity over r in [0.1, 10] against loss, for every scheme.

One-way probing, two-way probing (N = eps) and a distributed EPR source at
r = 10 go into a single CSV, one block per scheme.
"""

import argparse

import numpy as np

from cvlink.sweep import emit_csv, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="negativity_envelope.csv")
    ap.add_argument("--n", type=int, default=50)
    args = ap.parse_args()
    eps = np.linspace(0.01, 0.99, args.n)
    r_grid = np.geomspace(0.1, 10, 50)
    recs = []
    for scheme in ("asymmetric", "symmetric", "epr"):
        recs += sweep(scheme, eps, r_grid, envelope=True)
    with open(args.out, "w", newline="") as fh:
        emit_csv(recs, fh)
    print(f"{'eps':>6} {'one-way':>9} {'two-way':>9} {'EPR':>9}")
    by = {s: [r for r in recs if r.scheme == s] for s in ("asymmetric", "symmetric", "epr")}
    for i in range(0, args.n, max(1, args.n // 10)):
        print(f"{eps[i]:6.3f} " + " ".join(f"{by[s][i].N:9.4f}" for s in by))


if __name__ == "__main__":
    main()
