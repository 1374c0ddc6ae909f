"""
V-paths, closed orbits and the chain recurrent set of a combinatorial field.

The index-``p`` successor graph has an edge ``s -> s2`` whenever
``V(s) = t`` and ``s2`` is a facet of ``t`` other than ``s``.  Every V-path
of index ``p`` is a walk in that graph, and closed orbits are its
elementary cycles up to rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from .cell_complex import CellComplex, ComplexError
from .vector_field import VectorField

DEFAULT_CYCLE_BUDGET = 10**6


class CycleBudgetExceeded(RuntimeError):
    pass


class NonterminatingPathFamily(RuntimeError):
    """A counted path family runs through a cycle, so it is infinite."""


class UnsupportedForCW(ComplexError):
    pass


def successors(v: VectorField, p: int) -> dict[str, list[str]]:
    """Adjacency lists of the index-``p`` successor graph, canonical order."""
    cx = v.complex
    out: dict[str, list[str]] = {}
    for s in cx.cells_of_dim(p):
        t = v.head(s)
        if t is None or cx.dim(t) != p + 1:
            out[s] = []
        else:
            out[s] = cx.sorted(f for f in cx.faces(t) if f != s)
    return out


def successor_graph(v: VectorField, p: int) -> nx.DiGraph:
    g = nx.DiGraph()
    adj = successors(v, p)
    g.add_nodes_from(adj)
    for s, nxt in adj.items():
        g.add_edges_from((s, s2) for s2 in nxt)
    return g


@dataclass(frozen=True)
class VPath:
    index: int
    cells: tuple[str, ...]  # s0, t0, s1, ..., s_r

    @property
    def length(self) -> int:
        return (len(self.cells) - 1) // 2

    @property
    def sigmas(self) -> tuple[str, ...]:
        return self.cells[::2]

    @property
    def taus(self) -> tuple[str, ...]:
        return self.cells[1::2]

    @property
    def closed(self) -> bool:
        return self.length > 0 and self.cells[0] == self.cells[-1]


def is_v_path(v: VectorField, path: VPath) -> bool:
    """Check the defining clauses of a V-path."""
    cx = v.complex
    sig, tau = path.sigmas, path.taus
    if any(cx.dim(s) != path.index for s in sig):
        return False
    for i, t in enumerate(tau):
        if v.head(sig[i]) != t or sig[i + 1] == sig[i] or sig[i + 1] not in cx.faces(t):
            return False
    return True


@dataclass(frozen=True)
class ClosedOrbit:
    """Rotation class of a closed V-path, stored from its smallest cell.

    ``sigmas[i]`` is matched with ``taus[i]`` and ``sigmas[i + 1]`` is a
    facet of ``taus[i]`` (indices mod ``length``).
    """

    index: int
    sigmas: tuple[str, ...]
    taus: tuple[str, ...]
    twisted: bool | None = None
    name: str = ""

    @property
    def length(self) -> int:
        return len(self.sigmas)

    @property
    def cells(self) -> tuple[str, ...]:
        return self.sigmas + self.taus

    def as_path(self) -> VPath:
        seq: list[str] = []
        for s, t in zip(self.sigmas, self.taus):
            seq += [s, t]
        seq.append(self.sigmas[0])
        return VPath(self.index, tuple(seq))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "index": self.index,
            "sigmas": list(self.sigmas),
            "taus": list(self.taus),
            "twisted": self.twisted,
        }


def vertex_round_trip(cx: CellComplex, sigmas: Iterable[str]) -> dict[int, int]:
    """Where each vertex of the first cell ends up after one trip round.

    Each step exchanges one facet of ``t`` for another, which moves the
    dropped vertex onto the added one and fixes the shared vertices.
    """
    sig = list(sigmas)
    start = cx.vertices(sig[0])
    pos = {x: x for x in start}
    for a, b in zip(sig, sig[1:] + sig[:1]):
        va, vb = set(cx.vertices(a)), set(cx.vertices(b))
        (dropped,) = va - vb
        (added,) = vb - va
        pos = {x: (added if y == dropped else y) for x, y in pos.items()}
    return pos


def is_twisted(cx: CellComplex, o: ClosedOrbit) -> bool:
    if cx.mode != "simplicial":
        raise UnsupportedForCW("twisted detection needs vertex labels (simplicial mode)")
    return any(x != y for x, y in vertex_round_trip(cx, o.sigmas).items())


def _canonical_rotation(cx: CellComplex, cycle: list[str]) -> list[str]:
    i = min(range(len(cycle)), key=lambda j: cx.position(cycle[j]))
    return cycle[i:] + cycle[:i]


def closed_orbits(v: VectorField, cycle_budget: int = DEFAULT_CYCLE_BUDGET) -> list[ClosedOrbit]:
    """All closed orbits, ordered by index and then by representative."""
    cx = v.complex
    found: list[tuple[int, list[str]]] = []
    n = 0
    for p in range(cx.max_dim):
        for cyc in nx.simple_cycles(successor_graph(v, p)):
            n += 1
            if n > cycle_budget:
                raise CycleBudgetExceeded(f"more than {cycle_budget} elementary cycles")
            found.append((p, _canonical_rotation(cx, cyc)))
    found.sort(key=lambda pc: (pc[0], [cx.position(c) for c in pc[1]]))
    orbits: list[ClosedOrbit] = []
    names: dict[str, int] = {}
    for p, sig in found:
        taus = tuple(v.head(s) for s in sig)
        base = f"O{p}[{sig[0]}]"
        names[base] = names.get(base, 0) + 1
        name = base if names[base] == 1 else f"{base}#{names[base]}"
        o = ClosedOrbit(p, tuple(sig), taus, name=name)
        twisted = is_twisted(cx, o) if cx.mode == "simplicial" else None
        orbits.append(ClosedOrbit(p, tuple(sig), taus, twisted, name))
    return orbits


def find_orbit(orbits: Iterable[ClosedOrbit], ref: str) -> ClosedOrbit:
    """Look an orbit up by name or by any of its cells."""
    orbits = list(orbits)
    for o in orbits:
        if o.name == ref:
            return o
    for o in orbits:
        if ref in o.cells:
            return o
    raise KeyError(f"no closed orbit matches {ref!r}")


class _UnionFind:
    def __init__(self, items: Iterable[str] = ()):
        self.parent: dict[str, str] = {x: x for x in items}

    def add(self, x: str) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> list[list[str]]:
        out: dict[str, list[str]] = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


@dataclass
class RecurrenceReport:
    rest: dict[int, list[str]]
    orbits: list[ClosedOrbit]
    basic_sets: list[list[str]]
    twisted: list[str] = field(default_factory=list)

    @property
    def cells(self) -> set[str]:
        return {c for b in self.basic_sets for c in b}

    def to_dict(self) -> dict:
        return {
            "rest": {str(k): v for k, v in sorted(self.rest.items())},
            "orbits": [o.to_dict() for o in self.orbits],
            "basic_sets": self.basic_sets,
            "twisted": self.twisted,
        }


def chain_recurrent_set(v: VectorField, cycle_budget: int = DEFAULT_CYCLE_BUDGET) -> RecurrenceReport:
    cx = v.complex
    orbits = closed_orbits(v, cycle_budget)
    rest = {k: [c for c in cx.cells_of_dim(k) if v.is_rest(c)] for k in range(cx.max_dim + 1)}
    uf = _UnionFind(c for cells in rest.values() for c in cells)
    for o in orbits:
        for c in o.cells:
            uf.add(c)
        for c in o.cells[1:]:
            uf.union(o.cells[0], c)
    basic = [cx.sorted(g) for g in uf.groups()]
    basic.sort(key=lambda g: cx.position(g[0]))
    twisted = [o.name for o in orbits if o.twisted]
    return RecurrenceReport(rest, orbits, basic, twisted)


@dataclass
class PathFamily:
    """Walks of one index from ``sources`` to ``targets``.

    Targets absorb: a walk stops at the first target it meets, so a source
    that is itself a target contributes only its length-0 path.
    """

    index: int
    sources: list[str]
    targets: list[str]
    reachable_sources: list[str]
    nondegenerate_sources: list[str]
    cells: list[str]
    taus: list[str]
    counts: dict[tuple[str, str], int] | None = None

    @property
    def nonempty(self) -> bool:
        return bool(self.nondegenerate_sources)

    def total(self, target: str | None = None) -> int:
        if self.counts is None:
            raise ValueError("path counts were not requested")
        return sum(n for (s, t), n in self.counts.items() if target is None or t == target)


def v_paths_between(
    v: VectorField,
    sources: Iterable[str],
    targets: Iterable[str],
    q: int,
    count: bool = False,
    adj: dict[str, list[str]] | None = None,
) -> PathFamily:
    """Reachability (and optionally exact path counts) between ``q``-cells.

    The cells on walks are found as ``reachable ∩ co-reachable``, which
    terminates even through recurrent regions.  With ``count=True`` the raw
    number of walks per ``(source, target)`` is returned; that requires the
    relevant subgraph to be acyclic.
    """
    cx = v.complex
    sources = cx.sorted(set(sources))
    tset = set(targets)
    for c in list(sources) + list(tset):
        if cx.dim(c) != q:
            raise ComplexError(f"cell {c!r} is not a {q}-cell")
    if adj is None:
        adj = successors(v, q)

    reach = set(sources)
    stack = [s for s in sources if s not in tset]
    while stack:
        s = stack.pop()
        for s2 in adj[s]:
            if s2 not in reach:
                reach.add(s2)
                if s2 not in tset:
                    stack.append(s2)

    pred: dict[str, list[str]] = {}
    for s, nxt in adj.items():
        if s in tset:
            continue
        for s2 in nxt:
            pred.setdefault(s2, []).append(s)
    coreach = set(tset)
    stack = list(tset)
    while stack:
        s = stack.pop()
        for u in pred.get(s, ()):
            if u not in coreach:
                coreach.add(u)
                stack.append(u)

    on_walk = reach & coreach
    reachable_sources = [s for s in sources if s in coreach]
    nondeg = [s for s in reachable_sources if s not in tset]
    taus = cx.sorted({v.head(s) for s in on_walk if s not in tset})

    counts = None
    if count:
        memo: dict[str, dict[str, int]] = {}
        active: set[str] = set()

        def walk(s: str) -> dict[str, int]:
            if s in memo:
                return memo[s]
            if s in tset:
                memo[s] = {s: 1}
                return memo[s]
            if s in active:
                raise NonterminatingPathFamily(f"cycle through {s!r} on a counted path family")
            active.add(s)
            acc: dict[str, int] = {}
            for s2 in adj[s]:
                if s2 in coreach:
                    for t, n in walk(s2).items():
                        acc[t] = acc.get(t, 0) + n
            active.discard(s)
            memo[s] = acc
            return acc

        counts = {}
        for s in reachable_sources:
            for t, n in walk(s).items():
                counts[(s, t)] = n

    return PathFamily(
        index=q,
        sources=sources,
        targets=cx.sorted(tset),
        reachable_sources=reachable_sources,
        nondegenerate_sources=nondeg,
        cells=cx.sorted(on_walk),
        taus=taus,
        counts=counts,
    )
