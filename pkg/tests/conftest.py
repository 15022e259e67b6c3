import itertools
import sys
import random

import pytest

from ddreach.diagrams import cube_node, union_any
from ddreach.store import ONE, ZERO, Store

SMALL_SET = {(0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 1, 0)}


def all_points(m, levels):
    return list(itertools.product(range(m), repeat=levels))


def shannon(store, table, levels, top=0, prefix=(), high_first=False):
    """Quasi diagram of a truth table by recursive Shannon expansion."""
    if top == levels:
        return ONE if table[prefix] else ZERO
    order = range(store.m - 1, -1, -1) if high_first else range(store.m)
    kids = {}
    for a in order:
        kids[a] = shannon(store, table, levels, top + 1, prefix + (a,), high_first)
    return store.make_node(top, [kids[a] for a in range(store.m)])


def from_minterms(store, points):
    node = ZERO
    for p in points:
        node = union_any(store, node, cube_node(store, p))
    return node


def random_table(rng, m, levels, density=0.4):
    return {p: rng.random() < density for p in all_points(m, levels)}


def accepted(store, v, levels):
    return {p for p in all_points(store.m, levels) if store.eval(v, p)}


def three_drawings(store):
    """The three drawings: (a) unmerged, (b) quasi-reduced, (c) fully reduced."""
    mk = store.make_node
    not_x3 = mk(2, [ONE, ZERO])
    not_x3_copy = mk(2, [ONE, ZERO])
    hi = mk(1, [ZERO, not_x3])  # f|1 = x2 & ~x3
    a = mk(0, [mk(1, [not_x3_copy, ONE]), hi]) if store.mode == "full" else None
    b = mk(0, [mk(1, [not_x3, mk(2, [ONE, ONE])]), hi])
    c = mk(0, [mk(1, [not_x3, ONE]), hi]) if store.mode == "full" else None
    return a, b, c


@pytest.fixture
def rng():
    return random.Random(20231016)


from ddreach.reach import ReachBdd  # noqa: E402


class PermutedReach(ReachBdd):
    """Loop body reordered: reach00, img01, img10, reach11."""

    tag = "reach_bdd_permuted"

    def body(self, s0, s1, quads, depth):
        r00, r01, r10, r11 = quads
        s0 = self.reach(s0, r00, depth)
        s1 = self.union(s1, self.image(s0, r01))
        s0 = self.union(s0, self.image(s1, r10))
        s1 = self.reach(s1, r11, depth)
        return s0, s1


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
