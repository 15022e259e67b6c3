"""Set algebra and image computation on binary quasi-reduced diagrams.

The ``*_node`` functions are the recursive kernels and work on raw node ids;
the remaining functions wrap them with dimension checks on
:class:`StateSet` / :class:`Relation` handles.
"""
from __future__ import annotations

from .diagrams import DimensionError, Relation, StateSet, check_same, extend_node
from .store import ONE, ZERO, Store

UNION = "bdd_union"
INTERSECT = "bdd_intersect"
IMAGE = "bdd_image"

_NONE = (ZERO, ZERO)


def _require_binary(store: Store) -> None:
    if store.m != 2:
        raise DimensionError(f"binary operation on a store with m={store.m}")


def union_node(store: Store, a: int, b: int) -> int:
    if a == ZERO or a == b:
        return b
    if b == ZERO:
        return a
    if a == ONE or b == ONE:
        return ONE
    if a > b:
        a, b = b, a
    key = (UNION, a, b)
    cache = store.cache
    res = cache.get(key)
    if res is not None:
        return res
    kids = store.kids
    a0, a1 = kids[a]
    b0, b1 = kids[b]
    res = store._make(store.levels[a], (union_node(store, a0, b0), union_node(store, a1, b1)))
    cache.put(key, res)
    return res


def intersect_node(store: Store, a: int, b: int) -> int:
    if a == ZERO or b == ZERO:
        return ZERO
    if a == b or b == ONE:
        return a
    if a == ONE:
        return b
    if a > b:
        a, b = b, a
    key = (INTERSECT, a, b)
    cache = store.cache
    res = cache.get(key)
    if res is not None:
        return res
    kids = store.kids
    a0, a1 = kids[a]
    b0, b1 = kids[b]
    res = store._make(store.levels[a],
                      (intersect_node(store, a0, b0), intersect_node(store, a1, b1)))
    cache.put(key, res)
    return res


def image_node(store: Store, s: int, r: int) -> int:
    """Successors of ``s`` (set level l) under ``r`` (relation level 2l).

    One pass over the interleaved levels: for each source value the relation's
    x' child picks the target branch, so conjunction, quantification of x and
    the x' -> x renaming happen together.
    """
    if s == ZERO or r == ZERO:
        return ZERO
    if s == ONE:
        return ONE
    key = (IMAGE, s, r)
    cache = store.cache
    res = cache.get(key)
    if res is not None:
        return res
    kids = store.kids
    s0, s1 = kids[s]
    r0, r1 = kids[r]
    r00, r01 = kids[r0] if r0 != ZERO else _NONE
    r10, r11 = kids[r1] if r1 != ZERO else _NONE
    lo = union_node(store, image_node(store, s0, r00), image_node(store, s1, r10))
    hi = union_node(store, image_node(store, s0, r01), image_node(store, s1, r11))
    res = store._make(store.levels[s], (lo, hi))
    cache.put(key, res)
    return res


def quadrants(store: Store, r: int) -> tuple[int, int, int, int]:
    """``(R|00, R|01, R|10, R|11)`` of a relation node at an even level."""
    kids = store.kids
    r0, r1 = kids[r]
    r00, r01 = kids[r0] if r0 != ZERO else _NONE
    r10, r11 = kids[r1] if r1 != ZERO else _NONE
    return r00, r01, r10, r11


def union(a: StateSet, b: StateSet) -> StateSet:
    check_same(a, b)
    _require_binary(a.store)
    return StateSet(a.store, union_node(a.store, a.root, b.root), a.n)


def intersect(a: StateSet, b: StateSet) -> StateSet:
    check_same(a, b)
    _require_binary(a.store)
    return StateSet(a.store, intersect_node(a.store, a.root, b.root), a.n)


def image(s: StateSet, r: Relation) -> StateSet:
    check_same(s, r)
    _require_binary(s.store)
    if not r.full:
        r = extend_relation(r, r.n)
    return StateSet(s.store, image_node(s.store, s.root, r.root), s.n)


def relation_union(a: Relation, b: Relation) -> Relation:
    check_same(a, b)
    if a.support != b.support:
        raise DimensionError("relation union needs identical supports")
    return Relation(a.store, union_node(a.store, a.root, b.root), a.n, a.support)


def extend_relation(ri: Relation, n: int) -> Relation:
    if ri.support and ri.support[-1] > n:
        raise DimensionError(f"support {ri.support} exceeds n={n}")
    if ri.full and ri.n == n:
        return ri
    root = extend_node(ri.store, ri.root, ri.support, n)
    return Relation(ri.store, root, n, tuple(range(1, n + 1)), name=ri.name)


def merge_partials(parts, n: int) -> Relation:
    parts = list(parts)
    if not parts:
        raise ValueError("cannot merge an empty list of relations")
    store = parts[0].store
    _require_binary(store)
    root = ZERO
    for p in parts:
        if p.store is not store:
            raise DimensionError("partials belong to different stores")
        root = union_node(store, root, extend_relation(p, n).root)
    return Relation(store, root, n, tuple(range(1, n + 1)), name="merged")
