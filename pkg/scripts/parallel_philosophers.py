#!/usr/bin/env python3
"""Worker-count sweep for the fork-join REACH on dining philosophers.

Python threads share the interpreter lock, so wall time is not expected to
drop with more workers; the point is that the result root is the same.
"""
import argparse

from ddreach.models import gen_philosophers
from ddreach.reach import RunOptions, run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=8)
    ap.add_argument("--workers", default="1,2,4,8")
    args = ap.parse_args(argv)

    system = gen_philosophers(args.k)
    base = run("reach-bdd", system)
    print(f"reach-bdd      root={base.states.root} states={base.stats.final_sat_count} "
          f"ms={base.stats.wall_time_ms:.1f}")
    for w in map(int, args.workers.split(",")):
        res = run("reach-bdd-par", system, RunOptions(workers=w))
        same = "same" if res.states.root == base.states.root else "DIFFERENT"
        print(f"par workers={w:<2} root={res.states.root} ({same}) "
              f"ms={res.stats.wall_time_ms:.1f}")


if __name__ == "__main__":
    main()
