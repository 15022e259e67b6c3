#!/usr/bin/env python3
"""Ideal case vs the xor-wrapped bad case for REACH, side by side with BFS."""
import argparse

from ddreach.models import gen_counter, wrap_bad_case
from ddreach.reach import RunOptions, run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=10)
    args = ap.parse_args(argv)

    print(f"{'n':>3} {'model':<10} {'bfs iters':>10} {'reach iters':>12} "
          f"{'reach calls':>12} {'reach images':>13}")
    for n in range(args.n_min, args.n_max + 1):
        for label, system in (("ideal", gen_counter(n)), ("bad", wrap_bad_case(gen_counter(n)))):
            b = run("bfs", system).stats
            r = run("reach-bdd", system).stats
            print(f"{n:>3} {label:<10} {b.top_loop_iterations:>10} {r.top_loop_iterations:>12} "
                  f"{r.reach_calls:>12} {r.image_calls:>13}")


if __name__ == "__main__":
    main()
