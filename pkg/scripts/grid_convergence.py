"""Leapfrog vs transform for a Gaussian bump under mesh refinement."""

import argparse

from dskg.verify import compare_on_grid, gaussian_bump_problem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mass", type=float, default=0.5)
    ap.add_argument("--t-max", type=float, default=1.0)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()

    prev = None
    print(f"{'n_x':>6}{'dx':>10}{'linf':>14}{'ratio':>8}")
    for level in range(args.levels):
        n_x = 400 * 2**level + 1
        prob = gaussian_bump_problem(n_x)
        gap = compare_on_grid(prob, args.mass, args.t_max).linf
        ratio = "" if prev is None else f"{prev / gap:8.3f}"
        print(f"{n_x:6d}{prob.dx:10.5f}{gap:14.4e}{ratio}")
        prev = gap


if __name__ == "__main__":
    main()
