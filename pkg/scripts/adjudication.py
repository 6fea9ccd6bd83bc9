"""Compare the closed-form one-way growth rate and fidelity formulas with the simulated channel."""

import itertools

from cvlink.teleport import adjudicate


def main():
    grid = list(itertools.product((0.1, 0.3, 0.5, 0.7, 0.9), (0.2, 0.5, 1.0, 2.0, 10.0)))
    alpha, pref = adjudicate(grid)
    print(f"{'eps':>5} {'r':>5} {'tau':>7} {'alpha_sim':>11} {'formula':>11} {'variant':>11}  verdict")
    for a in alpha:
        print(f"{a.epsilon:5.2f} {a.r:5.1f} {a.tau:7.0e} {a.alpha_sim:11.6f} {a.alpha_formula:11.6f} {a.alpha_sign_variant:11.6f}  {a.verdict}")
    print()
    print(f"{'eps':>5} {'r':>5} {'tau':>7} {'F_sim':>10} {'c=1':>10} {'c=2':>10}  verdict")
    for p in pref:
        print(f"{p.epsilon:5.2f} {p.r:5.1f} {p.tau:7.0e} {p.F_sim:10.6f} {p.F_prefactor_1:10.6f} {p.F_prefactor_2:10.6f}  {p.verdict}")
    print()
    print("alpha verdicts:", sorted({a.verdict for a in alpha}))
    print("prefactor verdicts:", sorted({p.verdict for p in pref}))


if __name__ == "__main__":
    main()
