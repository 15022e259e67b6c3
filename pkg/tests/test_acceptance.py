"""Acceptance criteria, one function each.

Run with ``pytest tests/test_acceptance.py`` (a summary line per criterion is
printed at the end of the session) or directly as ``python tests/test_acceptance.py``.
"""
import functools
import random
import statistics
import sys
import time
from fractions import Fraction

import pytest

from ddreach.bdd import extend_relation, image, merge_partials, union
from ddreach.diagrams import StateSet, cubes_node, iter_states
from ddreach.models import (
    avg_relative_bandwidth, binary_encode, dependency_matrix, explicit_oracle, gen_counter,
    gen_philosophers, gen_random, wrap_bad_case,
)
from ddreach.reach import RunOptions, bfs, reach_bdd, run
from ddreach.store import ONE, ZERO, Store

from conftest import PermutedReach, random_table, shannon

RESULTS: dict[int, tuple[bool, str]] = {}
SEED = 20231016
N_RANDOM = 210
ALGS = [("bfs", 1), ("reach-bdd", 1), ("reach-bdd-par", 1), ("reach-bdd-par", 2),
        ("reach-bdd-par", 4), ("reach-mdd", 1), ("saturation", 1)]


def report(num: int, ok: bool, detail: str) -> bool:
    RESULTS[num] = (ok, detail)
    print(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


@functools.cache
def criterion1_systems():
    rng = random.Random(SEED)
    systems = []
    for i in range(N_RANDOM):
        m = (2, 3, 4)[i % 3]
        n = rng.randint(1, 8)
        systems.append((f"random-{i}-m{m}", gen_random(rng, n, m)))
    systems += [(f"philosophers-{k}", gen_philosophers(k)) for k in (2, 3)]
    systems += [(f"counter-{n}", gen_counter(n)) for n in range(1, 11)]
    return systems


@functools.cache
def criterion1_runs():
    """Every algorithm on every criterion-1 system: (name, alg, workers, result, oracle)."""
    out = []
    for name, system in criterion1_systems():
        oracle = explicit_oracle(system)
        for alg, workers in ALGS:
            res = run(alg, system, RunOptions(workers=workers, timeout=60, model=name))
            out.append((name, alg, workers, res, oracle))
    return out


def criterion_1():
    started = time.perf_counter()
    runs = criterion1_runs()
    elapsed = time.perf_counter() - started
    bad = [(name, alg, w) for name, alg, w, res, oracle in runs if res.state_list() != oracle]
    n_sys = len(criterion1_systems())
    ok = not bad and elapsed < 120 and N_RANDOM >= 200
    return report(1, ok, f"{n_sys} systems x {len(ALGS)} runs, {len(bad)} mismatches, "
                         f"{elapsed:.1f}s (limit 120s)" + (f"; first {bad[0]}" if bad else ""))


def criterion_2():
    started = time.perf_counter()
    sizes = [4, 8, 16, 32, 64]
    calls = []
    for n in sizes:
        c = gen_counter(n)
        _, stats = reach_bdd(c.init, c.monolithic)
        calls.append(stats.reach_calls)
    slope, intercept = statistics.linear_regression(sizes, calls)
    resid = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(sizes, calls)) ** 0.5
    rel = resid / sum(y * y for y in calls) ** 0.5
    ratio = calls[-1] / calls[-2]
    elapsed = time.perf_counter() - started
    ok = rel < 0.05 and ratio <= 2.2 and elapsed < 10
    return report(2, ok, f"reach_calls={calls}, relative residual {rel:.2e}, "
                         f"64/32 ratio {ratio:.3f}, {elapsed:.2f}s")


def criterion_3():
    started = time.perf_counter()
    off = []
    for n in range(4, 15):
        c = gen_counter(n)
        _, stats = bfs(c.init, c.monolithic)
        if abs(stats.top_loop_iterations - 2**n) > 1:
            off.append((n, stats.top_loop_iterations))
    elapsed = time.perf_counter() - started
    ok = not off and elapsed < 30
    return report(3, ok, f"n=4..14 bfs iterations vs 2^n, {len(off)} off {off[:3]}, "
                         f"{elapsed:.1f}s (limit 30s)")


def criterion_4():
    pairs = []
    for n in range(4, 11):
        bad = wrap_bad_case(gen_counter(n))
        _, sb = bfs(bad.init, bad.monolithic)
        bad.store.clear_cache()
        _, sr = reach_bdd(bad.init, bad.monolithic)
        pairs.append((n, sb.top_loop_iterations, sr.top_loop_iterations))
    off = [p for p in pairs if abs(p[1] - p[2]) > 1]
    return report(4, not off, "(n, bfs, reach-bdd) iterations " + " ".join(
        f"({n},{b},{r})" for n, b, r in pairs))


def reachable_prefixes(system, rel, rng, count):
    """Random prefixes of the reachable states in breadth-first discovery order."""
    store, n = system.store, system.n
    layers = []
    seen = set()
    cur = system.init
    while True:
        fresh = sorted(set(iter_states(store, cur.root, n)) - seen)
        if not fresh:
            break
        layers.extend(fresh)
        seen.update(fresh)
        cur = union(cur, image(cur, rel))
    for _ in range(count):
        size = rng.randint(1, len(layers))
        yield StateSet(store, cubes_node(store, layers[:size]), n)


def criterion_5():
    rng = random.Random(SEED)
    checked = mismatched = 0
    for k in range(2, 6):
        ph = gen_philosophers(k)
        merged = merge_partials(ph.partials, ph.n)
        extended = [extend_relation(p, ph.n) for p in ph.partials]
        for S in reachable_prefixes(ph, merged, rng, 20):
            whole = image(S, merged)
            parts = StateSet(ph.store, ZERO, ph.n)
            for ext in extended:
                parts = union(parts, image(S, ext))
            checked += 1
            if whole.root != parts.root or not ph.store.check_quasi(whole.root, ph.n):
                mismatched += 1
    return report(5, mismatched == 0 and checked == 80,
                  f"{checked} prefix sets over k=2..5, {mismatched} NodeRef mismatches")


def criterion_6():
    ph = gen_philosophers(6)
    roots, counts = set(), set()
    for workers in (1, 2, 4, 8):
        for _ in range(5):
            res = run("reach-bdd-par", ph, RunOptions(workers=workers))
            roots.add(res.states.root)
            counts.add(res.stats.final_sat_count)
    ok = len(roots) == 1 and len(counts) == 1
    return report(6, ok, f"philosophers k=6, workers 1/2/4/8 x5: {len(roots)} distinct roots, "
                         f"sat counts {sorted(counts)}")


def criterion_7():
    diffs = []
    by_key = {(name, alg, w): res for name, alg, w, res, _ in criterion1_runs()}
    compared = 0
    for name, system in criterion1_systems():
        if system.m != 2:
            continue
        compared += 1
        a = by_key[(name, "reach-mdd", 1)].states.sat_count()
        b = by_key[(name, "reach-bdd", 1)].states.sat_count()
        if a != b:
            diffs.append(name)
    return report(7, not diffs, f"{compared} binary systems, {len(diffs)} sat-count differences")


def criterion_8():
    rng = random.Random(SEED)
    pairs = differ = 0
    for i in range(10_000):
        m = (2, 3)[i % 2]
        levels = rng.randint(1, 5 if m == 2 else 3)
        store = Store(levels, m=m)
        table = random_table(rng, m, levels, rng.random())
        a = shannon(store, table, levels)
        b = shannon(store, table, levels, high_first=True)
        pairs += 1
        differ += a != b
    quasi_bad = 0
    outputs = 0
    for _, _, _, res, _ in criterion1_runs():
        outputs += 1
        st = res.states
        quasi_bad += not st.store.check_quasi(st.root, st.n)
    ok = pairs >= 10_000 and differ == 0 and quasi_bad == 0
    return report(8, ok, f"{pairs} construction-order pairs, {differ} differ; "
                         f"{outputs} algorithm outputs, {quasi_bad} fail the level check")


def criterion_9():
    disagree = 0
    for name, system in criterion1_systems():
        if system.m != 2:
            system, _ = binary_encode(system)
        rel = system.merged()
        a, _ = reach_bdd(system.init, rel)
        b, _ = reach_bdd(system.init, rel, engine=PermutedReach)
        disagree += a.root != b.root
    return report(9, disagree == 0, f"{len(criterion1_systems())} systems, "
                                    f"{disagree} disagreements with the permuted loop")


def brute_force_relative_bandwidth(supports):
    order = sorted(range(len(supports)), key=lambda i: min(supports[i]))
    spans = []
    for i in order:
        shared = [col for col, j in enumerate(order) if supports[i] & supports[j]]
        spans.append(shared[-1] - shared[0])
    return Fraction(sum(spans), len(order) ** 2)


def criterion_10():
    supports = [{3, 4}, {2, 3}, {1, 2}]
    value = avg_relative_bandwidth(dependency_matrix(supports))
    brute = brute_force_relative_bandwidth(supports)
    single = avg_relative_bandwidth(dependency_matrix([{1, 2}]))
    ok = value == Fraction(4, 9) == brute and single == 0
    return report(10, ok, f"example {value} (brute force {brute}), k=1 gives {single}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    failures = sum(not c() for c in CRITERIA)
    sys.exit(1 if failures else 0)
