#!/usr/bin/env python3
"""Sweep the edge-addition experiment across price families and player counts.

Prints one row per (family, n): simulated severity ratio, the closed-form
prediction, and their gap.
"""

import argparse

from routegame.braess import build_priced_braess, edge_addition_experiment, rho_formula
from routegame.pricing import PriceSpec, eval_u


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    # 3^n profiles in the post-shortcut network; n=12 already tops the cap
    parser.add_argument("--n", type=int, nargs="+", default=[2, 4, 6, 10])
    parser.add_argument("--beta", type=float, default=1.0)
    parser.add_argument("--c1", type=float, default=0.5)
    parser.add_argument("--c2", type=float, default=0.5)
    args = parser.parse_args()

    specs = [
        PriceSpec("identity"),
        PriceSpec("sin"),
        PriceSpec("log1p"),
        PriceSpec("saturating", {"beta": args.beta}),
    ]
    print(f"{'family':<12}{'n':>4}{'u(1/n)':>12}{'rho_sim':>12}{'rho_formula':>14}{'gap':>12}")
    for spec in specs:
        for n in args.n:
            report = edge_addition_experiment(*build_priced_braess(n, spec, args.c1, args.c2))
            u = eval_u(spec, 1.0 / n)
            predicted = rho_formula(u, args.c1, args.c2)
            print(
                f"{spec.fn:<12}{n:>4}{u:>12.6f}{report.rho:>12.6f}"
                f"{predicted:>14.6f}{abs(report.rho - predicted):>12.2e}"
            )


if __name__ == "__main__":
    main()
