"""Transition systems, model generators, the explicit-state oracle and locality.

Variables are numbered ``1..n`` (support sets use these indices); state
tuples and diagram levels are 0-based.
"""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import bdd, mdd
from .diagrams import (
    DimensionError, Relation, StateSet, cube_node, cubes_node, iter_cubes, iter_states,
    shift_node,
)
from .store import ONE, ZERO, Store

ORACLE_MAX_BITS = 20


class StateSpaceTooLarge(ValueError):
    pass


@dataclass
class TransitionSystem:
    store: Store
    n: int
    m: int
    init: StateSet
    partials: list[Relation] = field(default_factory=list)
    monolithic: Relation | None = None
    names: list[str] | None = None

    def __post_init__(self):
        if self.init.n != self.n or self.init.store is not self.store:
            raise DimensionError("initial set does not match the system")
        for rel in self.relations():
            if rel.n != self.n or rel.store is not self.store:
                raise DimensionError(f"relation {rel.name!r} does not match the system")

    def relations(self) -> list[Relation]:
        if self.partials:
            return list(self.partials)
        return [self.monolithic] if self.monolithic is not None else []

    def merged(self) -> Relation:
        """The monolithic relation, merging the partials if there is none yet."""
        if self.monolithic is not None:
            return self.monolithic
        merge = bdd.merge_partials if self.m == 2 else mdd.mdd_merge_partials
        if not self.partials:
            return Relation(self.store, ZERO, self.n, tuple(range(1, self.n + 1)), name="empty")
        return merge(self.partials, self.n)


def _set(store: Store, cubes, n: int) -> StateSet:
    return StateSet(store, cubes_node(store, cubes), n)


def _rel(store: Store, cubes, n: int, support, name: str) -> Relation:
    return Relation(store, cubes_node(store, cubes), n, tuple(support), name=name)


def counter_relation(store: Store, n: int) -> int:
    """``s -> s+1`` on n-bit numbers (x_1 most significant), no wraparound."""
    inc, wrap = ZERO, ONE
    for g in reversed(range(n)):
        # inc: suffix from x_g increments without overflow
        # wrap: suffix is all ones in the source and all zeros in the target
        keep0 = store._make(2 * g + 1, (inc, wrap))
        keep1 = store._make(2 * g + 1, (ZERO, inc))
        new_inc = store._make(2 * g, (keep0, keep1))
        new_wrap = store._make(2 * g, (ZERO, store._make(2 * g + 1, (wrap, ZERO))))
        inc, wrap = new_inc, new_wrap
    return inc


def gen_counter(n: int) -> TransitionSystem:
    if n < 1:
        raise ValueError(f"counter needs n >= 1, got {n}")
    store = Store(n)
    full = tuple(range(1, n + 1))
    rel = Relation(store, counter_relation(store, n), n, full, name="inc")
    init = StateSet(store, cube_node(store, (0,) * n), n)
    names = [f"b{i}" for i in range(1, n + 1)]
    return TransitionSystem(store, n, 2, init, [rel], rel, names)


def right_fork(i: int, k: int) -> int:
    return i % k + 1


def gen_philosophers(k: int) -> TransitionSystem:
    """Dining philosophers with variables ``(a_1, l_1, r_1, ..., a_k, l_k, r_k)``.

    ``a_i``: fork i is on the table; ``l_i``/``r_i``: philosopher i holds its
    left/right fork. Philosopher i's left fork is i, its right fork is its
    neighbour's, ``i mod k + 1``. Picking up and putting down flip a fork bit
    and a hand bit together, guarded so a fork is never both on the table and
    in a hand.
    """
    if k < 2:
        raise ValueError(f"philosophers needs k >= 2, got {k}")
    n = 3 * k
    store = Store(n)
    a = lambda i: 3 * (i - 1) + 1  # noqa: E731
    left = lambda i: 3 * (i - 1) + 2  # noqa: E731
    right = lambda i: 3 * (i - 1) + 3  # noqa: E731

    def swap_rel(fork_var: int, hand_var: int, name: str) -> Relation:
        # (fork, fork', hand, hand') in ascending variable order
        take = {fork_var: (1, 0), hand_var: (0, 1)}
        drop = {fork_var: (0, 1), hand_var: (1, 0)}
        sup = sorted((fork_var, hand_var))
        cubes = [tuple(v for var in sup for v in t[var]) for t in (take, drop)]
        return _rel(store, cubes, n, sup, name)

    parts = []
    for i in range(1, k + 1):
        j = right_fork(i, k)
        parts.append(swap_rel(a(i), left(i), f"R{i}_1"))
        parts.append(swap_rel(a(j), right(i), f"R{i}_2"))
        parts.append(_rel(store, [(1, 1, 1, 1)], n, (left(i), right(i)), f"R{i}_3"))
    init = _set(store, [(1, 0, 0) * k], n)
    names = [f"{v}{i}" for i in range(1, k + 1) for v in "alr"]
    return TransitionSystem(store, n, 2, init, parts, None, names)


def wrap_bad_case(system: TransitionSystem) -> TransitionSystem:
    """Prefix a fresh variable that every transition must flip.

    The relation becomes ``(x0 xor x0') & R``; its diagonal blocks on the new
    top variable are empty, so REACH can only make progress through images.
    """
    if system.monolithic is None:
        raise ValueError("wrap_bad_case needs a monolithic relation")
    n, m = system.n + 1, system.m
    store = Store(n, m)
    inner = shift_node(system.store, system.monolithic.root, store, 2)
    flips = []
    for i in range(m):
        flips.append(store._make(1, tuple(ZERO if j == i else inner for j in range(m))))
    root = store._make(0, tuple(flips))
    init_inner = shift_node(system.store, system.init.root, store, 1)
    init = StateSet(store, store._make(0, (init_inner,) + (ZERO,) * (m - 1)), n)
    rel = Relation(store, root, n, tuple(range(1, n + 1)), name="bad_case")
    names = ["x0"] + list(system.names or [f"v{i}" for i in range(1, n)])
    return TransitionSystem(store, n, m, init, [rel], rel, names)


def gen_random(rng: random.Random, n: int, m: int = 2, n_parts: int | None = None,
               max_support: int = 3, max_cubes: int = 3, dont_care: float = 0.5,
               init_cubes: int = 2) -> TransitionSystem:
    """Random cube-list system; partials get supports of 1..max_support variables."""
    store = Store(n, m)

    def tok():
        return None if rng.random() < dont_care else rng.randrange(m)

    init = _set(store, [tuple(rng.randrange(m) for _ in range(n))
                        for _ in range(rng.randint(1, init_cubes))], n)
    if n_parts is None:
        n_parts = rng.randint(1, max(1, n))
    parts = []
    for p in range(n_parts):
        size = rng.randint(1, min(max_support, n))
        sup = sorted(rng.sample(range(1, n + 1), size))
        cubes = [tuple(tok() for _ in range(2 * size)) for _ in range(rng.randint(1, max_cubes))]
        parts.append(_rel(store, cubes, n, sup, f"P{p}"))
    return TransitionSystem(store, n, m, init, parts, None, None)


# explicit-state oracle

def _successors(store: Store, rel: Relation, state) -> list[tuple[int, ...]]:
    """Targets of ``state`` under ``rel`` by walking the relation diagram."""
    sup = [v - 1 for v in rel.support]
    kids, m = store.kids, store.m
    out = []
    chosen: list[int] = []

    def walk(u: int, p: int):
        if u == ZERO:
            return
        if p == len(sup):
            if u == ONE:
                out.append(tuple(chosen))
            return
        src = kids[u][state[sup[p]]]
        if src == ZERO:
            return
        for t in range(m):
            chosen.append(t)
            walk(kids[src][t], p + 1)
            chosen.pop()

    walk(rel.root, 0)
    result = []
    for targets in out:
        nxt = list(state)
        point = []
        for var, t in zip(sup, targets):
            nxt[var] = t
            point.extend((state[var], t))
        # independent confirmation by a single path evaluation
        assert store.eval(rel.root, point) == 1
        result.append(tuple(nxt))
    return result


def explicit_oracle(system: TransitionSystem) -> list[tuple[int, ...]]:
    bits = system.n * math.log2(system.m)
    if bits > ORACLE_MAX_BITS:
        raise StateSpaceTooLarge(f"{bits:.1f} state bits exceed {ORACLE_MAX_BITS}")
    store = system.store
    rels = system.relations()
    seen = set(iter_states(store, system.init.root, system.n))
    frontier = deque(sorted(seen))
    while frontier:
        s = frontier.popleft()
        for rel in rels:
            for t in _successors(store, rel, s):
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
    return sorted(seen)


def fork_conservation(state, k: int) -> bool:
    """Every fork is either on the table or in exactly one adjacent hand."""
    for f in range(1, k + 1):
        avail = state[3 * (f - 1)]
        held_left = state[3 * (f - 1) + 1]
        owner = (f - 2) % k + 1  # philosopher whose right fork is f
        held_right = state[3 * (owner - 1) + 2]
        if avail + held_left + held_right != 1:
            return False
    return True


# binary re-encoding of m-ary systems

@dataclass(frozen=True)
class BinaryEncoding:
    """Each m-ary variable becomes ``width`` bits, most significant first."""

    n: int
    m: int

    @property
    def width(self) -> int:
        return max(1, (self.m - 1).bit_length())

    def encode_state(self, values) -> tuple[int, ...]:
        w = self.width
        return tuple((v >> (w - 1 - b)) & 1 for v in values for b in range(w))

    def decode_state(self, bits) -> tuple[int, ...]:
        w = self.width
        out = []
        for i in range(0, len(bits), w):
            v = 0
            for b in bits[i:i + w]:
                v = 2 * v + b
            out.append(v)
        return tuple(out)

    def value_patterns(self, tok) -> list[tuple]:
        """Bit cubes covering one token; ``None`` covers exactly 0..m-1."""
        w = self.width
        if tok is not None:
            return [tuple((tok >> (w - 1 - b)) & 1 for b in range(w))]
        pats = []
        start = 0
        # split [0, m) into aligned power-of-two blocks
        while start < self.m:
            size = 1
            while start % (2 * size) == 0 and start + 2 * size <= self.m and 2 * size <= 1 << w:
                size *= 2
            free = size.bit_length() - 1
            fixed = tuple((start >> (w - 1 - b)) & 1 for b in range(w - free))
            pats.append(fixed + (None,) * free)
            start += size
        return pats


def binary_encode(system: TransitionSystem) -> tuple[TransitionSystem, BinaryEncoding]:
    enc = BinaryEncoding(system.n, system.m)
    w = enc.width
    nb = system.n * w
    store = Store(nb)

    def set_cubes(cube):
        for combo in product(*(enc.value_patterns(t) for t in cube)):
            yield tuple(b for pat in combo for b in pat)

    def rel_cubes(cube):
        pairs = [(cube[i], cube[i + 1]) for i in range(0, len(cube), 2)]
        choices = [list(product(enc.value_patterns(s), enc.value_patterns(t))) for s, t in pairs]
        for combo in product(*choices):
            bits = []
            for src, dst in combo:
                for b in range(w):
                    bits.extend((src[b], dst[b]))
            yield tuple(bits)

    src = system.store
    init_c = [c for cube in iter_cubes(src, system.init.root, system.n) for c in set_cubes(cube)]
    init = StateSet(store, cubes_node(store, init_c), nb)

    def convert(rel: Relation) -> Relation:
        cubes = [c for cube in iter_cubes(src, rel.root, rel.levels) for c in rel_cubes(cube)]
        sup = tuple(w * (v - 1) + b + 1 for v in rel.support for b in range(w))
        return Relation(store, cubes_node(store, cubes), nb, sup, name=rel.name)

    parts = [convert(p) for p in system.partials]
    mono = None
    if system.monolithic is not None:
        mono = convert(system.monolithic)
        if len(system.partials) == 1 and system.partials[0] is system.monolithic:
            parts = [mono]
    return TransitionSystem(store, nb, 2, init, parts, mono), enc


# locality

@dataclass(frozen=True)
class DependencyMatrix:
    entries: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.entries)


def _support_of(p) -> tuple[int, ...]:
    return tuple(p.support) if isinstance(p, Relation) else tuple(sorted(p))


def dependency_matrix(partials) -> DependencyMatrix:
    """Shared-variable incidence between partials sorted by first support variable."""
    sups = [_support_of(p) for p in partials]
    order = sorted(range(len(sups)), key=lambda i: (sups[i][0] if sups[i] else 0, sups[i]))
    ordered = [set(sups[i]) for i in order]
    rows = tuple(tuple(1 if a & b else 0 for b in ordered) for a in ordered)
    return DependencyMatrix(rows, tuple(order))


def avg_relative_bandwidth(matrix: DependencyMatrix) -> Fraction:
    k = matrix.k
    if k == 0:
        return Fraction(0)
    total = 0
    for row in matrix.entries:
        nz = [j for j, x in enumerate(row) if x]
        if nz:
            total += nz[-1] - nz[0]
    return Fraction(total, k) / k
