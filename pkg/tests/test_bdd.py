import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddreach.bdd import (
    extend_relation, image, intersect, merge_partials, quadrants, union,
)
from ddreach.diagrams import DimensionError, Relation, StateSet, cube_node, cubes_node
from ddreach.models import gen_counter, gen_philosophers
from ddreach.store import ONE, ZERO, Store

from conftest import SMALL_SET, accepted, all_points, three_drawings, random_table, shannon


def interleave(s, t):
    return tuple(v for pair in zip(s, t) for v in pair)


def random_set(store, rng, n, density=0.4):
    return StateSet(store, shannon(store, random_table(rng, store.m, n, density), n), n)


def random_relation(store, rng, n, density=0.15):
    full = tuple(range(1, n + 1))
    return Relation(store, shannon(store, random_table(rng, store.m, 2 * n, density), 2 * n), n, full)


def image_oracle(store, S, R):
    """Pairwise enumeration: t is a successor iff some s in S has R(s, t)."""
    n = S.n
    pts = all_points(store.m, n)
    src = [s for s in pts if store.eval(S.root, s)]
    return {t for t in pts if any(store.eval(R.root, interleave(s, t)) for s in src)}


def set_of(points, store, n):
    return StateSet(store, cubes_node(store, points), n)


def test_union_small_set():
    s = Store(3)
    _, drawn, _ = three_drawings(s)
    a = set_of([(0, 0, 0), (0, 1, 0), (0, 1, 1)], s, 3)
    b = set_of([(1, 1, 0)], s, 3)
    assert union(a, b).root == drawn


def test_union_identity_and_intersect_basics(rng):
    s = Store(4)
    a = random_set(s, rng, 4)
    empty = StateSet(s, ZERO, 4)
    assert union(a, empty) == a
    assert intersect(a, a) == a
    assert intersect(a, empty) == empty


def test_dimension_mismatch():
    s = Store(4)
    with pytest.raises(DimensionError):
        union(StateSet(s, ZERO, 3), StateSet(s, ZERO, 4))
    with pytest.raises(DimensionError):
        union(StateSet(s, ZERO, 3), StateSet(Store(4), ZERO, 3))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 8))
def test_union_intersect_match_enumeration(seed, n):
    rng = random.Random(seed)
    s = Store(n)
    a, b = random_set(s, rng, n), random_set(s, rng, n)
    ea, eb = accepted(s, a.root, n), accepted(s, b.root, n)
    u, i = union(a, b), intersect(a, b)
    assert accepted(s, u.root, n) == ea | eb
    assert accepted(s, i.root, n) == ea & eb
    assert s.check_quasi(u.root, n) and s.check_quasi(i.root, n)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 6))
def test_union_algebra_at_handle_level(seed, n):
    rng = random.Random(seed)
    s = Store(n)
    a, b, c = (random_set(s, rng, n) for _ in range(3))
    assert union(a, b) == union(b, a)
    assert union(union(a, b), c) == union(a, union(b, c))
    assert union(a, a) == a


def test_image_counter_single_step():
    sys3 = gen_counter(3)
    s = sys3.store
    S = set_of([(0, 1, 1)], s, 3)
    out = image(S, sys3.monolithic)
    assert out.root == cube_node(s, (1, 0, 0))
    assert image(StateSet(s, ZERO, 3), sys3.monolithic).root == ZERO


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 5))
def test_image_matches_pairwise_oracle(seed, n):
    rng = random.Random(seed)
    s = Store(n)
    S, R = random_set(s, rng, n), random_relation(s, rng, n)
    out = image(S, R)
    assert accepted(s, out.root, n) == image_oracle(s, S, R)
    assert s.check_quasi(out.root, n)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 6))
def test_image_distributes_over_union(seed, n):
    rng = random.Random(seed)
    s = Store(n)
    A, B, R = random_set(s, rng, n), random_set(s, rng, n), random_relation(s, rng, n, 0.05)
    assert image(union(A, B), R) == union(image(A, R), image(B, R))


def test_counter_quadrants():
    sys3 = gen_counter(3)
    s = sys3.store
    r00, r01, r10, r11 = quadrants(s, sys3.monolithic.root)
    assert r00 == r11
    assert r10 == ZERO
    # R|00 as a relation over the two low bits: 00->01, 01->10, 10->11
    pairs = {(a, b) for a in all_points(2, 2) for b in all_points(2, 2)
             if s.eval(r00, (0, 0) + interleave(a, b))}
    assert pairs == {((0, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (1, 1))}
    pairs01 = {(a, b) for a in all_points(2, 2) for b in all_points(2, 2)
               if s.eval(r01, (0, 0) + interleave(a, b))}
    assert pairs01 == {((1, 1), (0, 0))}


def test_extend_full_support_is_unchanged():
    c = gen_counter(3)
    assert extend_relation(c.monolithic, 3) is c.monolithic


def test_extend_philosopher_pick_up_left():
    ph = gen_philosophers(2)
    s = ph.store
    r11 = ph.partials[0]
    assert r11.support == (1, 2)
    ext = extend_relation(r11, 6)
    assert ext.support == tuple(range(1, 7))
    for src in all_points(2, 6):
        for dst in all_points(2, 6):
            inside = s.eval(r11.root, interleave(src[:2], dst[:2]))
            same_rest = src[2:] == dst[2:]
            assert s.eval(ext.root, interleave(src, dst)) == int(bool(inside) and same_rest)


def test_extend_support_exceeds_n():
    ph = gen_philosophers(2)
    last = ph.partials[-1]
    with pytest.raises(DimensionError):
        extend_relation(last, 3)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 6), size=st.integers(1, 3))
def test_extend_sat_count_scales(seed, n, size):
    rng = random.Random(seed)
    size = min(size, n)
    s = Store(n)
    sup = tuple(sorted(rng.sample(range(1, n + 1), size)))
    root = shannon(s, random_table(rng, 2, 2 * size, 0.3), 2 * size)
    part = Relation(s, root, n, sup)
    ext = extend_relation(part, n)
    assert ext.sat_count() == part.sat_count() * 2 ** (n - size)
    assert s.check_quasi(ext.root, 2 * n)


def test_merge_single_full_support_is_itself():
    c = gen_counter(4)
    assert merge_partials([c.monolithic], 4).root == c.monolithic.root
    with pytest.raises(ValueError):
        merge_partials([], 4)


def test_merge_philosophers_image_identity(rng):
    ph = gen_philosophers(2)
    s = ph.store
    merged = merge_partials(ph.partials, 6)
    for _ in range(10):
        S = random_set(s, rng, 6, 0.2)
        each = StateSet(s, ZERO, 6)
        for p in ph.partials:
            each = union(each, image(S, extend_relation(p, 6)))
        assert image(S, merged) == each


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(2, 6))
def test_merged_image_equals_union_of_partial_images(seed, n):
    rng = random.Random(seed)
    s = Store(n)
    parts = []
    for _ in range(rng.randint(1, 4)):
        size = rng.randint(1, min(3, n))
        sup = tuple(sorted(rng.sample(range(1, n + 1), size)))
        parts.append(Relation(s, shannon(s, random_table(rng, 2, 2 * size, 0.3), 2 * size), n, sup))
    S = random_set(s, rng, n)
    merged = merge_partials(parts, n)
    expected = set()
    for p in parts:
        expected |= image_oracle(s, S, extend_relation(p, n))
    assert accepted(s, image(S, merged).root, n) == expected
