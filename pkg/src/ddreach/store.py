"""Hash-consed node storage for quasi-reduced decision diagrams.

A single :class:`Store` holds the nodes of every diagram in a run: state
sets live on levels ``0 .. n-1`` and transition relations on the interleaved
levels ``0 .. 2n-1`` (level ``2i`` is ``x_i``, level ``2i+1`` is ``x_i'``).
Nodes are plain integers. ``ZERO`` and ``ONE`` are the two terminals.

The working discipline is *quasi* reduction: isomorphic nodes are merged but
redundant nodes (all children equal) are kept, so every path to ``ONE``
visits every level. The empty function is always ``ZERO``, at any level.
"""
from __future__ import annotations

import os
import threading
from dataclasses import dataclass

ZERO = 0
ONE = 1

DEFAULT_CACHE_BITS = 20
MAX_DOMAIN = 16

QUASI = "quasi"
FULL = "full"


class StructureError(ValueError):
    """A node would violate the level discipline of the store."""


class UsageError(ValueError):
    """An operation was applied to an argument it does not accept."""


@dataclass(frozen=True)
class StoreConfig:
    n: int
    m: int = 2
    mode: str = QUASI
    cache_bits: int | None = None
    max_domain: int = MAX_DOMAIN

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one state variable, got n={self.n}")
        if not 2 <= self.m <= self.max_domain:
            raise ValueError(f"domain size m={self.m} outside [2, {self.max_domain}]")
        if self.mode not in (QUASI, FULL):
            raise ValueError(f"unknown reduction mode {self.mode!r}")

    @property
    def L(self) -> int:
        return 2 * self.n


def _cache_bits_from_env(default: int) -> int:
    raw = os.environ.get("DDREACH_CACHE_BITS")
    if not raw:
        return default
    bits = int(raw)
    if not 4 <= bits <= 30:
        raise ValueError(f"DDREACH_CACHE_BITS={bits} outside [4, 30]")
    return bits


class OpCache:
    """Fixed-capacity, lossy, overwrite-on-collision memo table.

    Keys are tuples ``(tag, *operands)``. A lookup either returns the value
    stored for exactly that key or ``None``.
    """

    def __init__(self, bits: int = DEFAULT_CACHE_BITS):
        self.bits = bits
        self._mask = (1 << bits) - 1
        # sparse slot table: memory grows with use, never past 2**bits entries
        self._slots: dict[int, tuple] = {}

    @property
    def capacity(self) -> int:
        return 1 << self.bits

    def __len__(self) -> int:
        return len(self._slots)

    def get(self, key):
        entry = self._slots.get(hash(key) & self._mask)
        if entry is not None and entry[0] == key:
            return entry[1]
        return None

    def put(self, key, value) -> None:
        self._slots[hash(key) & self._mask] = (key, value)

    def clear(self) -> None:
        self._slots.clear()


class Store:
    """Unique table, node arrays and the shared operation cache."""

    def __init__(self, n: int, m: int = 2, mode: str = QUASI,
                 cache_bits: int | None = None, max_domain: int = MAX_DOMAIN):
        self.config = StoreConfig(n, m, mode, cache_bits, max_domain)
        self.m = m
        self.L = self.config.L
        self.mode = mode
        bits = cache_bits if cache_bits is not None else _cache_bits_from_env(DEFAULT_CACHE_BITS)
        self.cache = OpCache(bits)
        # node id -> level / children; terminals have level L (below everything)
        self.levels: list[int] = [self.L, self.L]
        self.kids: list[tuple] = [(), ()]
        self._unique: dict = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.levels)

    def __repr__(self) -> str:
        return f"Store(n={self.config.n}, m={self.m}, mode={self.mode!r}, nodes={len(self)})"

    # construction

    def make_node(self, level: int, children) -> int:
        children = tuple(children)
        if len(children) != self.m:
            raise StructureError(f"expected {self.m} children, got {len(children)}")
        if not 0 <= level < self.L:
            raise StructureError(f"level {level} outside [0, {self.L})")
        levels = self.levels
        for c in children:
            if c > ONE:
                if c >= len(levels):
                    raise StructureError(f"unknown child node {c}")
                cl = levels[c]
                if self.mode == QUASI and cl != level + 1:
                    raise StructureError(
                        f"child {c} at level {cl} under a node at level {level}")
                if self.mode == FULL and cl <= level:
                    raise StructureError(
                        f"child {c} at level {cl} not below level {level}")
        return self._make(level, children)

    def _make(self, level: int, children: tuple) -> int:
        """Unchecked hash-consing; callers guarantee the level discipline."""
        first = children[0]
        if (first == ZERO or self.mode == FULL) and children.count(first) == len(children):
            return first
        key = (level, children)
        node = self._unique.get(key)
        if node is not None:
            return node
        with self._lock:
            node = self._unique.get(key)
            if node is None:
                node = len(self.levels)
                self.levels.append(level)
                self.kids.append(children)
                self._unique[key] = node
        return node

    def _make_full(self, level: int, children: tuple) -> int:
        first = children[0]
        if children.count(first) == len(children):
            return first
        return self._make(level, children)

    # queries

    @staticmethod
    def is_terminal(v: int) -> bool:
        return v <= ONE

    def level(self, v: int) -> int:
        if v <= ONE:
            raise UsageError("terminals carry no level")
        return self.levels[v]

    def children(self, v: int) -> tuple:
        if v <= ONE:
            raise UsageError("terminals have no children")
        return self.kids[v]

    def child(self, v: int, a: int) -> int:
        if v <= ONE:
            raise UsageError("child() of a terminal")
        if not 0 <= a < self.m:
            raise UsageError(f"edge label {a} outside [0, {self.m})")
        return self.kids[v][a]

    def eval(self, v: int, assignment) -> int:
        levels, kids = self.levels, self.kids
        while v > ONE:
            v = kids[v][assignment[levels[v]]]
        return v

    def sat_count(self, v: int, levels: int, top: int = 0) -> int:
        """Exact number of assignments to levels ``top .. levels-1`` accepted by ``v``."""
        m, lv, kids = self.m, self.levels, self.kids
        memo: dict[int, int] = {}

        def below(u: int) -> int:
            # count over levels level(u) .. levels-1
            if u <= ONE:
                return u
            got = memo.get(u)
            if got is None:
                here = lv[u]
                got = 0
                for c in kids[u]:
                    if c != ZERO:
                        cl = levels if c == ONE else lv[c]
                        got += m ** (cl - here - 1) * below(c)
                memo[u] = got
            return got

        if v == ZERO:
            return 0
        start = levels if v == ONE else lv[v]
        return m ** (start - top) * below(v)

    def node_count(self, v: int) -> int:
        seen = {v}
        stack = [v]
        kids = self.kids
        while stack:
            u = stack.pop()
            for c in kids[u]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return len(seen)

    def check_quasi(self, v: int, levels: int, top: int = 0) -> bool:
        """True iff every path from ``v`` to ONE visits ``top .. levels-1`` once each."""
        lv, kids = self.levels, self.kids
        if v == ONE:
            return top == levels
        if v == ZERO:
            return True
        if lv[v] != top:
            return False
        ok: set[int] = set()
        stack = [v]
        while stack:
            u = stack.pop()
            if u in ok:
                continue
            ok.add(u)
            for c in kids[u]:
                if c == ZERO:
                    continue
                if c == ONE:
                    if lv[u] != levels - 1:
                        return False
                elif lv[c] != lv[u] + 1:
                    return False
                else:
                    stack.append(c)
        return True

    # operation cache

    def cache_get(self, tag, operands):
        return self.cache.get((tag, *operands))

    def cache_put(self, tag, operands, result) -> None:
        self.cache.put((tag, *operands), result)

    def clear_cache(self) -> None:
        self.cache.clear()

    # conversion between the two canonical forms

    def to_full_reduced(self, v: int) -> int:
        kids, lv = self.kids, self.levels
        memo: dict[int, int] = {}

        def go(u: int) -> int:
            if u <= ONE:
                return u
            got = memo.get(u)
            if got is None:
                got = self._make_full(lv[u], tuple(go(c) for c in kids[u]))
                memo[u] = got
            return got

        return go(v)

    def to_quasi(self, v: int, levels: int, top: int = 0) -> int:
        """Re-insert the redundant nodes of ``v`` so paths cover ``top .. levels-1``."""
        kids, lv, m = self.kids, self.levels, self.m
        memo: dict[tuple[int, int], int] = {}

        def go(u: int, at: int) -> int:
            # u's function viewed from level `at`
            if u == ZERO:
                return ZERO
            got = memo.get((u, at))
            if got is not None:
                return got
            ul = levels if u == ONE else lv[u]
            if ul < at:
                raise StructureError(f"node {u} at level {ul} above expected level {at}")
            if ul > at:
                below = go(u, at + 1)
                got = self._make(at, (below,) * m)
            elif u == ONE:
                got = ONE
            else:
                got = self._make(at, tuple(go(c, at + 1) for c in kids[u]))
            memo[(u, at)] = got
            return got

        return go(v, top)

    # text dump

    def dump(self, v: int, levels: int) -> str:
        lines = [f"dd {levels} {self.m}"]
        order: list[int] = []
        seen = {ZERO, ONE}
        stack = [(v, False)]
        while stack:
            u, expanded = stack.pop()
            if expanded:
                order.append(u)
                continue
            if u in seen:
                continue
            seen.add(u)
            stack.append((u, True))
            for c in reversed(self.kids[u]):
                if c not in seen:
                    stack.append((c, False))
        for u in order:
            lines.append(" ".join(map(str, (u, self.levels[u], *self.kids[u]))))
        lines.append(f"root {v}")
        return "\n".join(lines) + "\n"

    def load_dump(self, text: str) -> int:
        """Rebuild a dumped diagram in this store and return its root."""
        ids = {0: ZERO, 1: ONE}
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "dd" or int(head[2]) != self.m:
            raise ValueError(f"bad dump header {lines[0]!r}")
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "root":
                return ids[int(parts[1])]
            nid, level, *children = map(int, parts)
            ids[nid] = self.make_node(level, [ids[c] for c in children])
        raise ValueError("dump has no root line")
