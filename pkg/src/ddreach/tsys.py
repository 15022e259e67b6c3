"""Reader and writer for the line-oriented ``.tsys`` model format.

::

    tsys 1
    vars <n> domain <m>
    names <name_1> ... <name_n>          # optional
    init
    <n tokens per line, each 0..m-1 or '-'>
    end
    rel <name> support <i_1> ... <i_s>   # 1-based, ascending
    <2s tokens per line: a_i1 a'_i1 ... a_is a'_is>
    end

A file holding exactly one ``rel`` block with full support is monolithic.
"""
from __future__ import annotations

from .diagrams import Relation, StateSet, cubes_node, iter_cubes
from .models import TransitionSystem
from .store import Store


class TsysError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _tokens(parts, m: int, lineno: int):
    out = []
    for p in parts:
        if p == "-":
            out.append(None)
            continue
        try:
            v = int(p)
        except ValueError:
            raise TsysError(lineno, f"bad token {p!r}") from None
        if not 0 <= v < m:
            raise TsysError(lineno, f"value {v} outside domain 0..{m - 1}")
        out.append(v)
    return tuple(out)


def parse_tsys(text: str, store: Store | None = None) -> TransitionSystem:
    lines = [(i, ln.split("#", 1)[0].split()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, parts) for i, parts in lines if parts]
    if not lines:
        raise TsysError(0, "empty input")
    it = iter(lines)

    lineno, head = next(it)
    if head != ["tsys", "1"]:
        raise TsysError(lineno, "expected header 'tsys 1'")
    lineno, decl = next(it, (lineno, []))
    if len(decl) != 4 or decl[0] != "vars" or decl[2] != "domain":
        raise TsysError(lineno, "expected 'vars <n> domain <m>'")
    try:
        n, m = int(decl[1]), int(decl[3])
    except ValueError:
        raise TsysError(lineno, "non-integer variable count or domain") from None
    if n < 1 or m < 2:
        raise TsysError(lineno, f"invalid sizes n={n}, m={m}")
    if store is None:
        store = Store(n, m)
    elif store.m != m or store.config.n != n:
        raise TsysError(lineno, "target store does not match the declared sizes")

    names = None
    init = None
    rels: list[Relation] = []

    def block(width: int, start: int):
        cubes = []
        for ln, parts in it:
            if parts == ["end"]:
                return cubes
            if len(parts) != width:
                raise TsysError(ln, f"expected {width} tokens, got {len(parts)}")
            cubes.append(_tokens(parts, m, ln))
        raise TsysError(start, "block not closed by 'end'")

    for lineno, parts in it:
        kw = parts[0]
        if kw == "names":
            if len(parts) != n + 1:
                raise TsysError(lineno, f"expected {n} names")
            names = parts[1:]
        elif kw == "init":
            if init is not None:
                raise TsysError(lineno, "duplicate init block")
            init = StateSet(store, cubes_node(store, block(n, lineno)), n)
        elif kw == "rel":
            if len(parts) < 4 or parts[2] != "support":
                raise TsysError(lineno, "expected 'rel <name> support <i_1> ...'")
            try:
                sup = tuple(int(p) for p in parts[3:])
            except ValueError:
                raise TsysError(lineno, "non-integer support index") from None
            if any(not 1 <= v <= n for v in sup):
                raise TsysError(lineno, f"support indices must lie in 1..{n}")
            if list(sup) != sorted(set(sup)):
                raise TsysError(lineno, "support must be strictly ascending")
            cubes = block(2 * len(sup), lineno)
            rels.append(Relation(store, cubes_node(store, cubes), n, sup, name=parts[1]))
        else:
            raise TsysError(lineno, f"unexpected keyword {kw!r}")

    if init is None:
        raise TsysError(lines[-1][0], "missing init block")
    mono = rels[0] if len(rels) == 1 and rels[0].full else None
    return TransitionSystem(store, n, m, init, rels, mono, names)


def _fmt(cube) -> str:
    return " ".join("-" if t is None else str(t) for t in cube)


def write_tsys(system: TransitionSystem) -> str:
    store = system.store
    out = ["tsys 1", f"vars {system.n} domain {system.m}"]
    if system.names:
        out.append("names " + " ".join(system.names))
    out.append("init")
    out.extend(_fmt(c) for c in iter_cubes(store, system.init.root, system.n))
    out.append("end")
    for idx, rel in enumerate(system.relations()):
        name = rel.name or f"R{idx + 1}"
        out.append(f"rel {name} support " + " ".join(map(str, rel.support)))
        out.extend(_fmt(c) for c in iter_cubes(store, rel.root, rel.levels))
        out.append("end")
    return "\n".join(out) + "\n"
