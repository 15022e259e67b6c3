"""State sets and transition relations as handles into a :class:`Store`."""
from __future__ import annotations

from dataclasses import dataclass, field

from .store import ONE, ZERO, Store


class DimensionError(ValueError):
    """Operands disagree on variable count or live in different stores."""


@dataclass(frozen=True)
class StateSet:
    """A subset of ``D^n`` encoded as a quasi diagram over levels ``0 .. n-1``."""

    store: Store = field(repr=False)
    root: int
    n: int

    def __len__(self) -> int:
        return self.sat_count()

    def sat_count(self) -> int:
        return self.store.sat_count(self.root, self.n)

    def is_empty(self) -> bool:
        return self.root == ZERO


@dataclass(frozen=True)
class Relation:
    """A transition relation restricted to its support variables.

    ``support`` holds ascending 1-based variable indices. The diagram covers
    the ``2 * len(support)`` interleaved levels of those variables only, so a
    full-support relation is a diagram over ``2n`` levels.
    """

    store: Store = field(repr=False)
    root: int
    n: int
    support: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        sup = tuple(self.support)
        object.__setattr__(self, "support", sup)
        if list(sup) != sorted(set(sup)):
            raise DimensionError(f"support {sup} is not strictly ascending")
        if sup and (sup[0] < 1 or sup[-1] > self.n):
            raise DimensionError(f"support {sup} exceeds variables 1..{self.n}")

    @property
    def levels(self) -> int:
        return 2 * len(self.support)

    @property
    def full(self) -> bool:
        return len(self.support) == self.n

    @property
    def top(self) -> int:
        """0-based index of the first support variable."""
        return self.support[0] - 1

    def sat_count(self) -> int:
        return self.store.sat_count(self.root, self.levels)


def check_same(*items) -> None:
    first = items[0]
    for other in items[1:]:
        if other.store is not first.store:
            raise DimensionError("operands belong to different stores")
        if other.n != first.n:
            raise DimensionError(f"variable count mismatch: {first.n} vs {other.n}")


def full_set(store: Store, levels: int, top: int = 0) -> int:
    node = ONE
    for lvl in range(levels - 1, top - 1, -1):
        node = store._make(lvl, (node,) * store.m)
    return node


def cube_node(store: Store, tokens, top: int = 0) -> int:
    """Diagram for one cube; a token is a value or ``None`` for "any value"."""
    m = store.m
    node = ONE
    for offset in range(len(tokens) - 1, -1, -1):
        tok = tokens[offset]
        if tok is None:
            kids = (node,) * m
        else:
            if not 0 <= tok < m:
                raise ValueError(f"value {tok} outside domain [0, {m})")
            kids = tuple(node if a == tok else ZERO for a in range(m))
        node = store._make(top + offset, kids)
    return node


def union_any(store: Store, a: int, b: int) -> int:
    """m-ary union used for building diagrams from cube lists."""
    if a == ZERO or a == b:
        return b
    if b == ZERO:
        return a
    if a == ONE or b == ONE:
        return ONE
    if a > b:
        a, b = b, a
    key = ("build_union", a, b)
    got = store.cache.get(key)
    if got is not None:
        return got
    ka, kb = store.kids[a], store.kids[b]
    res = store._make(store.levels[a], tuple(union_any(store, x, y) for x, y in zip(ka, kb)))
    store.cache.put(key, res)
    return res


def cubes_node(store: Store, cubes, top: int = 0) -> int:
    node = ZERO
    for cube in cubes:
        node = union_any(store, node, cube_node(store, cube, top))
    return node


def iter_cubes(store: Store, v: int, levels: int, top: int = 0):
    """Disjoint cube cover of ``v``; ``None`` marks a redundant (don't-care) level."""
    if v == ZERO:
        return
    kids, lv, m = store.kids, store.levels, store.m
    prefix: list = []

    def walk(u: int, at: int):
        if at == levels:
            if u == ONE:
                yield tuple(prefix)
            return
        if u == ONE or lv[u] != at:
            # skipped level (full-reduced input)
            prefix.append(None)
            yield from walk(u, at + 1)
            prefix.pop()
            return
        ch = kids[u]
        if ch.count(ch[0]) == m:
            prefix.append(None)
            yield from walk(ch[0], at + 1)
            prefix.pop()
            return
        for a, c in enumerate(ch):
            if c != ZERO:
                prefix.append(a)
                yield from walk(c, at + 1)
                prefix.pop()

    yield from walk(v, top)


def iter_states(store: Store, v: int, levels: int, top: int = 0):
    """All accepted assignments of ``v`` in lexicographic order."""
    m = store.m
    for cube in iter_cubes(store, v, levels, top):
        yield from _expand(cube, m)


def _expand(cube, m):
    out = [()]
    for tok in cube:
        vals = range(m) if tok is None else (tok,)
        out = [s + (a,) for s in out for a in vals]
    return out


def extend_node(store: Store, root: int, support, n: int) -> int:
    """Full-support version of a partial relation diagram.

    Every variable outside ``support`` gets the identity constraint
    ``x == x'``; support variables keep the partial's structure.
    """
    m = store.m
    sup = set(support)
    memo: dict[tuple[int, int], int] = {}
    identity_cache: dict[tuple[int, int], int] = {}

    def ident(var: int, below: int) -> int:
        got = identity_cache.get((var, below))
        if got is None:
            primed = [store._make(2 * var + 1, tuple(below if b == a else ZERO for b in range(m)))
                      for a in range(m)]
            got = store._make(2 * var, tuple(primed))
            identity_cache[(var, below)] = got
        return got

    def go(u: int, var: int) -> int:
        if u == ZERO:
            return ZERO
        if var == n:
            return u
        got = memo.get((u, var))
        if got is not None:
            return got
        if var + 1 in sup:
            src = []
            for a in range(m):
                ua = store.kids[u][a]
                if ua == ZERO:
                    src.append(ZERO)
                else:
                    src.append(store._make(
                        2 * var + 1, tuple(go(t, var + 1) for t in store.kids[ua])))
            got = store._make(2 * var, tuple(src))
        else:
            got = ident(var, go(u, var + 1))
        memo[(u, var)] = got
        return got

    return go(root, 0)


def shift_node(src: Store, v: int, dst: Store, offset: int) -> int:
    """Copy a diagram into ``dst`` with every level moved down by ``offset``."""
    memo: dict[int, int] = {}

    def go(u: int) -> int:
        if u <= ONE:
            return u
        got = memo.get(u)
        if got is None:
            got = dst._make(src.levels[u] + offset, tuple(go(c) for c in src.kids[u]))
            memo[u] = got
        return got

    return go(v)
