#!/usr/bin/env python3
"""Average relative bandwidth against the REACH/saturation run-time ratio.

Runs both algorithms on philosophers instances and on random partitioned
systems, then prints one row per model. A rank correlation is printed at the
end; expect it to be noisy at this scale.
"""
import argparse
import random
import statistics

from ddreach.models import avg_relative_bandwidth, dependency_matrix, gen_philosophers, gen_random
from ddreach.reach import RunOptions, run


def timed(alg, system, repeats):
    best = None
    for _ in range(repeats):
        st = run(alg, system, RunOptions(timeout=120)).stats
        best = st.wall_time_ms if best is None else min(best, st.wall_time_ms)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random", type=int, default=30, help="number of random systems")
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)

    models = [(f"philosophers-{k}", gen_philosophers(k)) for k in range(2, 9)]
    for i in range(args.random):
        models.append((f"random-{i}", gen_random(rng, args.n, 2, n_parts=rng.randint(3, 12),
                                                  max_support=rng.randint(2, 6))))

    bws, ratios = [], []
    print(f"{'model':<18} {'k':>3} {'bandwidth':>10} {'reach ms':>10} {'sat ms':>10} {'ratio':>7}")
    for name, system in models:
        bw = avg_relative_bandwidth(dependency_matrix(system.partials))
        t_reach = timed("reach-bdd", system, args.repeats)
        t_sat = timed("saturation", system, args.repeats)
        ratio = t_reach / t_sat
        bws.append(float(bw))
        ratios.append(ratio)
        print(f"{name:<18} {len(system.partials):>3} {float(bw):>10.3f} {t_reach:>10.2f} "
              f"{t_sat:>10.2f} {ratio:>7.2f}")
    rank = lambda xs: [sorted(xs).index(x) for x in xs]  # noqa: E731
    print(f"spearman(bandwidth, reach/sat) = {statistics.correlation(rank(bws), rank(ratios)):.3f}")


if __name__ == "__main__":
    main()
