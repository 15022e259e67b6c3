"""Reachability fixpoints over decision diagrams.

Every algorithm returns the least set containing ``S`` that is closed under
``R`` (written ``S.R*``) together with a :class:`RunStats` record:

* :func:`bfs` -- ``S <- S | Image(S, R)`` until nothing changes.
* :func:`reach_bdd` -- the recursive REACH operation on binary diagrams. It
  splits ``S`` on its top variable and ``R`` into the four blocks
  ``R|00, R|01, R|10, R|11``; the diagonal blocks are handled by recursive
  calls, the off-diagonal ones by image steps, until both halves stop growing.
* :func:`reach_bdd_par` -- the same operation with the loop reordered so the
  two recursive calls, the two images and the two unions run as fork-join pairs.
* :func:`reach_mdd` -- the m-ary generalisation over all ``m*m`` blocks.
* :func:`saturate` -- bottom-up saturation over a partitioned relation, used
  as a baseline.
"""
from __future__ import annotations

import csv
import io
import itertools
import threading
import time
from dataclasses import asdict, dataclass, field, fields

from . import bdd, mdd
from .diagrams import DimensionError, Relation, StateSet, check_same
from .forkjoin import ForkJoinPool
from .store import ONE, ZERO, Store, UsageError

CSV_COLUMNS = (
    "model", "alg", "workers", "n", "m", "reach_calls", "image_calls", "union_calls",
    "top_loop_iterations", "peak_node_count", "wall_time_ms", "final_sat_count",
)
ALGORITHMS = ("bfs", "reach-bdd", "reach-bdd-par", "reach-mdd", "saturation")


class ReachTimeout(RuntimeError):
    """The cooperative deadline passed inside a fixpoint loop."""


@dataclass
class RunStats:
    model: str = ""
    alg: str = ""
    workers: int = 1
    n: int = 0
    m: int = 2
    reach_calls: int = 0
    image_calls: int = 0
    union_calls: int = 0
    top_loop_iterations: int = 0
    peak_node_count: int = 0
    wall_time_ms: float = 0.0
    final_sat_count: str = "0"
    # not part of the CSV schema
    cache_hits: int = field(default=0, repr=False)

    def row(self) -> dict:
        d = asdict(self)
        d["wall_time_ms"] = f"{self.wall_time_ms:.3f}"
        return {k: d[k] for k in CSV_COLUMNS}

    def csv_line(self, header: bool = False) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if header:
            w.writeheader()
        w.writerow(self.row())
        return buf.getvalue()


assert tuple(f.name for f in fields(RunStats))[: len(CSV_COLUMNS)] == CSV_COLUMNS


def _kernels(store: Store):
    if store.m == 2:
        return bdd.union_node, bdd.image_node
    return mdd.mdd_union_node, mdd.mdd_image_node


class _Engine:
    """Shared plumbing: counters, deadline checks, counted union/image."""

    def __init__(self, store: Store, stats: RunStats, deadline: float | None = None):
        self.store = store
        self.stats = stats
        self.deadline = deadline
        self._union_k, self._image_k = _kernels(store)

    def tick(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ReachTimeout("deadline exceeded")

    def bump(self, name: str, by: int = 1) -> None:
        setattr(self.stats, name, getattr(self.stats, name) + by)

    def union(self, a: int, b: int) -> int:
        self.bump("union_calls")
        return self._union_k(self.store, a, b)

    def image(self, s: int, r: int) -> int:
        self.bump("image_calls")
        return self._image_k(self.store, s, r)


class BfsEngine(_Engine):
    def __call__(self, s: int, r: int) -> int:
        while True:
            self.bump("top_loop_iterations")
            self.tick()
            nxt = self.union(s, self.image(s, r))
            if nxt == s:
                return s
            s = nxt


class ReachBdd(_Engine):
    """Recursive REACH on binary quasi-reduced diagrams.

    Results are memoised in the store's operation cache under ``tag``; only
    cache misses on non-terminal arguments count as ``reach_calls``.
    """

    tag = "reach_bdd"

    def __init__(self, store: Store, stats: RunStats, deadline: float | None = None):
        if store.m != 2:
            raise DimensionError(f"{type(self).__name__} needs a binary store, got m={store.m}")
        super().__init__(store, stats, deadline)

    def __call__(self, s: int, r: int) -> int:
        return self.reach(s, r, 0)

    def reach(self, s: int, r: int, depth: int) -> int:
        if s == ZERO:
            return ZERO
        if r == ZERO:
            return s
        if s == ONE or r == ONE:
            return ONE
        store = self.store
        key = (self.tag, s, r)
        res = store.cache.get(key)
        if res is not None:
            self.bump("cache_hits")
            return res
        self.bump("reach_calls")
        quads = bdd.quadrants(store, r)
        s0, s1 = store.kids[s]
        while True:
            if depth == 0:
                self.bump("top_loop_iterations")
            self.tick()
            n0, n1 = self.body(s0, s1, quads, depth + 1)
            if n0 == s0 and n1 == s1:
                break
            s0, s1 = n0, n1
        res = store._make(store.levels[s], (s0, s1))
        store.cache.put(key, res)
        return res

    def body(self, s0: int, s1: int, quads, depth: int) -> tuple[int, int]:
        r00, r01, r10, r11 = quads
        s0 = self.reach(s0, r00, depth)
        s1 = self.union(s1, self.image(s0, r01))
        s1 = self.reach(s1, r11, depth)
        s0 = self.union(s0, self.image(s1, r10))
        return s0, s1


class ReachBddPar(ReachBdd):
    """REACH with fork-join parallelism inside the loop body."""

    tag = "reach_bdd_par"

    def __init__(self, store: Store, stats: RunStats, pool: ForkJoinPool,
                 deadline: float | None = None):
        super().__init__(store, stats, deadline)
        self.pool = pool
        self._stats_lock = threading.Lock()

    def bump(self, name: str, by: int = 1) -> None:
        with self._stats_lock:
            setattr(self.stats, name, getattr(self.stats, name) + by)

    def body(self, s0: int, s1: int, quads, depth: int) -> tuple[int, int]:
        r00, r01, r10, r11 = quads
        pool = self.pool
        task = pool.spawn(self.reach, s0, r00, depth)
        s1 = self.reach(s1, r11, depth)
        s0 = pool.sync(task)
        task = pool.spawn(self.image, s1, r10)
        t1 = self.image(s0, r01)
        t0 = pool.sync(task)
        task = pool.spawn(self.union, s0, t0)
        s1 = self.union(s1, t1)
        s0 = pool.sync(task)
        return s0, s1


class ReachMdd(_Engine):
    """REACH over m-ary diagrams; blocks ``R|ij`` visited in lexicographic order."""

    tag = "reach_mdd"

    def __init__(self, store: Store, stats: RunStats, deadline: float | None = None):
        super().__init__(store, stats, deadline)
        self._union_k, self._image_k = mdd.mdd_union_node, mdd.mdd_image_node

    def __call__(self, s: int, r: int) -> int:
        return self.reach(s, r, 0)

    def reach(self, s: int, r: int, depth: int) -> int:
        if s == ZERO:
            return ZERO
        if r == ZERO:
            return s
        if s == ONE or r == ONE:
            return ONE
        store = self.store
        key = (self.tag, s, r)
        res = store.cache.get(key)
        if res is not None:
            self.bump("cache_hits")
            return res
        self.bump("reach_calls")
        m = store.m
        rows = mdd.split(store, r)
        parts = list(store.kids[s])
        while True:
            if depth == 0:
                self.bump("top_loop_iterations")
            self.tick()
            before = tuple(parts)
            for i in range(m):
                row = rows[i]
                for j in range(m):
                    if i == j:
                        parts[i] = self.reach(parts[i], row[i], depth + 1)
                    else:
                        parts[j] = self.union(parts[j], self.image(parts[i], row[j]))
            if tuple(parts) == before:
                break
        res = store._make(store.levels[s], tuple(parts))
        store.cache.put(key, res)
        return res


@dataclass
class PartitionedSystem:
    """Extended partial relations paired with their top set level.

    Entries are ordered so top levels never increase along the list.
    """

    entries: list[tuple[Relation, int]]

    def __post_init__(self):
        tops = [top for _, top in self.entries]
        if any(a < b for a, b in zip(tops, tops[1:])):
            raise UsageError(f"partials not sorted by descending top level: {tops}")
        for rel, top in self.entries:
            if not rel.full:
                raise UsageError("partitioned entries must be extended to full support")
            if not 0 <= top < rel.n:
                raise UsageError(f"top level {top} outside [0, {rel.n})")

    @classmethod
    def from_partials(cls, parts, n: int) -> "PartitionedSystem":
        entries = []
        for p in parts:
            if not p.support:
                raise UsageError(f"partial {p.name!r} has empty support")
            ext = bdd.extend_relation(p, n) if p.store.m == 2 else mdd.mdd_extend_relation(p, n)
            entries.append((ext, p.top))
        entries.sort(key=lambda e: -e[1])
        return cls(entries)


_instances = itertools.count()


class Saturation(_Engine):
    """Bottom-up saturation.

    A node at level ``l`` is saturated once its children are saturated and it
    is closed under every partial whose top level is ``l``. Image results below
    the firing level are saturated as they are built, and unions of saturated
    nodes stay saturated, so firing at ``l`` is a local fixpoint loop.
    """

    def __init__(self, store: Store, stats: RunStats, system: PartitionedSystem,
                 deadline: float | None = None):
        super().__init__(store, stats, deadline)
        # results depend on the partition, so cache keys carry a per-instance token
        self.tag = ("saturate", next(_instances))
        self._relprod_tag = ("sat_relprod", self.tag[1])
        by_level: dict[int, list[int]] = {}
        for rel, top in system.entries:
            node = rel.root
            # the extended relation is the identity above its top variable
            for _ in range(top):
                if node <= ONE:
                    break
                node = store.kids[store.kids[node][0]][0]
            by_level.setdefault(top, []).append(node)
        self.by_level = by_level
        self.root_level = 0

    def __call__(self, s: int) -> int:
        return self.saturate(s)

    def saturate(self, v: int) -> int:
        if v <= ONE:
            return v
        store = self.store
        key = (self.tag, v)
        res = store.cache.get(key)
        if res is not None:
            return res
        lvl = store.levels[v]
        w = store._make(lvl, tuple(self.saturate(c) for c in store.kids[v]))
        res = self.fire(w, lvl)
        store.cache.put(key, res)
        return res

    def fire(self, w: int, lvl: int) -> int:
        rels = self.by_level.get(lvl)
        if not rels:
            return w
        while True:
            if lvl == self.root_level:
                self.bump("top_loop_iterations")
            self.tick()
            old = w
            for r in rels:
                self.bump("image_calls")
                self.bump("union_calls")
                w = self._union_k(self.store, w, self.step(w, r))
            if w == old:
                return w

    def step(self, v: int, r: int) -> int:
        """Image of ``v`` under ``r`` at ``v``'s level, with saturated children."""
        store = self.store
        m = store.m
        rows = mdd.split(store, r)
        out = [ZERO] * m
        for i, vi in enumerate(store.kids[v]):
            if vi == ZERO:
                continue
            row = rows[i]
            for j in range(m):
                if row[j] != ZERO:
                    out[j] = self._union_k(store, out[j], self.relprod(vi, row[j]))
        return store._make(store.levels[v], tuple(out))

    def relprod(self, v: int, r: int) -> int:
        if v == ZERO or r == ZERO:
            return ZERO
        if v == ONE:
            return ONE
        store = self.store
        key = (self._relprod_tag, v, r)
        res = store.cache.get(key)
        if res is not None:
            return res
        self.bump("reach_calls")
        res = self.fire(self.step(v, r), store.levels[v])
        store.cache.put(key, res)
        return res


def _finish(stats: RunStats, result: StateSet, started: float) -> None:
    stats.wall_time_ms = (time.perf_counter() - started) * 1e3
    stats.peak_node_count = len(result.store)
    stats.final_sat_count = str(result.sat_count())
    stats.n = result.n
    stats.m = result.store.m


def _deadline(timeout: float | None) -> float | None:
    return None if timeout is None else time.monotonic() + timeout


def bfs(s: StateSet, r: Relation, timeout: float | None = None) -> tuple[StateSet, RunStats]:
    check_same(s, r)
    if not r.full:
        raise DimensionError("bfs needs a full-support relation")
    stats = RunStats(alg="bfs")
    started = time.perf_counter()
    root = BfsEngine(s.store, stats, _deadline(timeout))(s.root, r.root)
    out = StateSet(s.store, root, s.n)
    _finish(stats, out, started)
    return out, stats


def reach_bdd(s: StateSet, r: Relation, timeout: float | None = None,
              engine=ReachBdd) -> tuple[StateSet, RunStats]:
    check_same(s, r)
    if not r.full:
        raise DimensionError("reach_bdd needs a full-support relation")
    stats = RunStats(alg="reach-bdd")
    started = time.perf_counter()
    root = engine(s.store, stats, _deadline(timeout))(s.root, r.root)
    out = StateSet(s.store, root, s.n)
    _finish(stats, out, started)
    return out, stats


def reach_bdd_par(s: StateSet, r: Relation, workers: int,
                  timeout: float | None = None) -> tuple[StateSet, RunStats]:
    check_same(s, r)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if not r.full:
        raise DimensionError("reach_bdd_par needs a full-support relation")
    stats = RunStats(alg="reach-bdd-par", workers=workers)
    started = time.perf_counter()
    with ForkJoinPool(workers) as pool:
        root = ReachBddPar(s.store, stats, pool, _deadline(timeout))(s.root, r.root)
    out = StateSet(s.store, root, s.n)
    _finish(stats, out, started)
    return out, stats


def reach_mdd(s: StateSet, r: Relation, timeout: float | None = None) -> tuple[StateSet, RunStats]:
    check_same(s, r)
    if not r.full:
        raise DimensionError("reach_mdd needs a full-support relation")
    stats = RunStats(alg="reach-mdd")
    started = time.perf_counter()
    root = ReachMdd(s.store, stats, _deadline(timeout))(s.root, r.root)
    out = StateSet(s.store, root, s.n)
    _finish(stats, out, started)
    return out, stats


def saturate(s: StateSet, system: PartitionedSystem,
             timeout: float | None = None) -> tuple[StateSet, RunStats]:
    for rel, _ in system.entries:
        check_same(s, rel)
    stats = RunStats(alg="saturation")
    started = time.perf_counter()
    root = Saturation(s.store, stats, system, _deadline(timeout))(s.root)
    out = StateSet(s.store, root, s.n)
    _finish(stats, out, started)
    return out, stats


@dataclass
class RunOptions:
    workers: int = 1
    timeout: float | None = 600.0
    model: str = ""
    clear_cache: bool = True


@dataclass
class RunResult:
    states: StateSet
    stats: RunStats
    encoding: object = None

    def state_list(self) -> list[tuple[int, ...]]:
        """Reachable states in ascending order, decoded if the run re-encoded."""
        from .diagrams import iter_states

        got = iter_states(self.states.store, self.states.root, self.states.n)
        if self.encoding is not None:
            got = (self.encoding.decode_state(b) for b in got)
        return sorted(got)


def run(alg: str, system, options: RunOptions | None = None) -> RunResult:
    """Dispatch one algorithm on a :class:`~ddreach.models.TransitionSystem`.

    Relation preparation (merging partials, binary re-encoding of m-ary systems
    for the binary algorithms) is part of the measured wall time.
    """
    from .models import binary_encode

    opts = options or RunOptions()
    if alg not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {alg!r}; choose from {', '.join(ALGORITHMS)}")
    if opts.workers < 1:
        raise UsageError(f"workers must be >= 1, got {opts.workers}")
    started = time.perf_counter()
    encoding = None
    if alg in ("reach-bdd", "reach-bdd-par") and system.m != 2:
        system, encoding = binary_encode(system)
    if opts.clear_cache:
        system.store.clear_cache()

    if alg == "saturation":
        parts = system.partials or [system.monolithic]
        out, stats = saturate(system.init, PartitionedSystem.from_partials(parts, system.n),
                              opts.timeout)
    else:
        rel = system.merged()
        if alg == "bfs":
            out, stats = bfs(system.init, rel, opts.timeout)
        elif alg == "reach-bdd":
            out, stats = reach_bdd(system.init, rel, opts.timeout)
        elif alg == "reach-bdd-par":
            out, stats = reach_bdd_par(system.init, rel, opts.workers, opts.timeout)
        else:
            out, stats = reach_mdd(system.init, rel, opts.timeout)

    stats.wall_time_ms = (time.perf_counter() - started) * 1e3
    stats.model = opts.model
    stats.alg = alg
    stats.workers = opts.workers if alg == "reach-bdd-par" else 1
    if encoding is not None:
        stats.n, stats.m = encoding.n, encoding.m
    return RunResult(out, stats, encoding)
