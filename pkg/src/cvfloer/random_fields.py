"""
Random simplicial complexes and random valid vector fields for property tests.
"""

from __future__ import annotations

import random

from .cell_complex import CellComplex, from_simplices, simplicial_cells
from .vector_field import VectorField


def random_complex(rng: random.Random, max_cells: int = 30, max_vertices: int = 7, max_size: int = 4) -> CellComplex:
    """Union of random simplices with at most ``max_size`` vertices each."""
    n = rng.randint(3, max_vertices)
    simplices: list[tuple[int, ...]] = []
    for _ in range(rng.randint(1, 12)):
        size = rng.randint(2, max_size)
        s = tuple(sorted(rng.sample(range(n), min(size, n))))
        if len(simplicial_cells(simplices + [s])) > max_cells:
            continue
        simplices.append(s)
    if not simplices:
        simplices = [(0, 1)]
    return from_simplices(simplices)


def hasse_edges(cx: CellComplex) -> list[tuple[str, str]]:
    return [(f, c) for c in cx for f in cx.sorted(cx.faces(c))]


def random_field(rng: random.Random, cx: CellComplex, density: float = 0.8) -> VectorField:
    """Greedy random matching on the Hasse diagram.

    Edges are visited in random order and accepted when both ends are still
    free, so the result always satisfies the matching clauses.
    """
    edges = hasse_edges(cx)
    rng.shuffle(edges)
    used: set[str] = set()
    pairs: dict[str, str] = {}
    for a, b in edges:
        if a in used or b in used or rng.random() > density:
            continue
        pairs[a] = b
        used |= {a, b}
    return VectorField(cx, pairs)


def planted_cycle_field(rng: random.Random, cx: CellComplex, density: float = 0.8) -> VectorField:
    """Random matching that first lays one closed path, when one exists.

    A closed walk ``s0 -> t0 -> s1 -> ...`` in the bipartite graph of
    ``p``-cells and ``(p+1)``-cells is searched by random DFS; its pairs are
    fixed before the remaining edges are matched greedily.
    """
    dims = [p for p in range(cx.max_dim) if cx.cells_of_dim(p + 1)]
    pairs: dict[str, str] = {}
    used: set[str] = set()
    if dims:
        p = rng.choice(dims)
        cyc = _random_closed_path(rng, cx, p)
        if cyc:
            for s, t in cyc:
                pairs[s] = t
                used |= {s, t}
    edges = hasse_edges(cx)
    rng.shuffle(edges)
    for a, b in edges:
        if a in used or b in used or rng.random() > density:
            continue
        pairs[a] = b
        used |= {a, b}
    return VectorField(cx, pairs)


def planted_pair_field(rng: random.Random, cx: CellComplex, density: float = 0.8) -> VectorField:
    """Like :func:`planted_cycle_field`, but lays closed paths of index 0 and 1.

    Fields from this generator often carry an index-1 orbit next to an
    index-0 orbit, which exercises the orbit-to-orbit coefficients.
    """
    pairs: dict[str, str] = {}
    used: set[str] = set()
    for p in (0, 1):
        if p < cx.max_dim:
            cyc = _random_closed_path(rng, cx, p, used=used)
            for s, t in cyc or ():
                pairs[s] = t
                used |= {s, t}
    edges = hasse_edges(cx)
    rng.shuffle(edges)
    for a, b in edges:
        if a in used or b in used or rng.random() > density:
            continue
        pairs[a] = b
        used |= {a, b}
    return VectorField(cx, pairs)


def _random_closed_path(
    rng: random.Random, cx: CellComplex, p: int, tries: int = 20, used: set[str] | None = None
):
    used = used or set()
    sigmas = [s for s in cx.cells_of_dim(p) if s not in used]
    if not sigmas:
        return None
    for _ in range(tries):
        s0 = rng.choice(sigmas)
        path: list[tuple[str, str]] = []
        seen_s = {s0}
        seen_t: set[str] = set()
        s = s0
        for _ in range(12):
            ts = [t for t in cx.cofaces(s) if t not in seen_t and t not in used]
            if not ts:
                break
            t = rng.choice(sorted(ts))
            nxt = [f for f in cx.faces(t) if f != s]
            if s0 in nxt and len(path) >= 1:
                path.append((s, t))
                return path
            nxt = [f for f in nxt if f not in seen_s and f not in used]
            if not nxt:
                break
            path.append((s, t))
            seen_t.add(t)
            s = rng.choice(sorted(nxt))
            seen_s.add(s)
    return None
