"""
Floer-type chain complex of a combinatorial vector field over GF(2).

Generators in degree ``k`` are the rest ``k``-cells, one upper generator
for every closed orbit of index ``k - 1`` and one lower generator for every
closed orbit of index ``k``.  Boundary coefficients count equivalence
classes of connecting V-path families mod 2; a direct coincidence of faces
with no connecting path (an *attachment*) contributes 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .cell_complex import CellComplex
from .dynamics import (
    DEFAULT_CYCLE_BUDGET,
    ClosedOrbit,
    PathFamily,
    _UnionFind,
    closed_orbits,
    successors,
    v_paths_between,
)
from .homology_z2 import GF2Matrix, betti_from_boundaries
from .vector_field import FieldError, VectorField, validate_field

REST, LOWER, UPPER = "rest", "lower", "upper"

SVP = "svp-classes"
ATTACHMENT = "attachment"
REST_REST = "rest-rest-count"
ZERO = "zero"

CRITICAL_TO_ORBIT = "critical-to-orbit"
ORBIT_TO_CRITICAL = "orbit-to-critical"
ORBIT_TO_ORBIT = "orbit-to-orbit"
TWISTED = "twisted-orbit"
OVERLAPPING = "overlapping-orbits"
RECURRENT_ROUTE = "recurrent-route"

Source = Union[str, ClosedOrbit]


class EmptyVP(LookupError):
    """No nondegenerate V-path joins the two recurrence elements."""


class RelationUndefined(ValueError):
    """A lower spanned cell is not a face of any upper spanned cell."""


class ExclusionsViolated(RuntimeError):
    def __init__(self, report: "ExclusionReport"):
        kinds = sorted({x.kind for x in report.violations})
        super().__init__(f"field violates exclusion conditions: {', '.join(kinds)}")
        self.report = report


class DSquaredNonzero(AssertionError):
    def __init__(self, k: int, row: str, col: str):
        super().__init__(f"d_{k - 1} d_{k} has a nonzero entry at ({row}, {col})")
        self.degree = k
        self.entry = (row, col)


# -- generators ------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    kind: str
    source: str  # cell id for rest cells, orbit name otherwise
    degree: int

    @property
    def label(self) -> str:
        if self.kind == REST:
            return self.source
        return f"{self.source}^{0 if self.kind == LOWER else 1}"


def floer_generators(v: VectorField, orbits: list[ClosedOrbit]) -> dict[int, list[Generator]]:
    cx = v.complex
    gens: dict[int, list[Generator]] = {}
    for k in range(cx.max_dim + 1):
        row = [Generator(REST, c, k) for c in cx.cells_of_dim(k) if v.is_rest(c)]
        row += [Generator(LOWER, o.name, k) for o in orbits if o.index == k]
        row += [Generator(UPPER, o.name, k) for o in orbits if o.index == k - 1]
        gens[k] = row
    return gens


# -- path families between recurrence elements -----------------------------


def upper_sources(cx: CellComplex, o: ClosedOrbit) -> list[str]:
    """Facets of the orbit's top cells, minus the orbit's own cells."""
    own = set(o.sigmas)
    return cx.sorted({f for t in o.taus for f in cx.faces(t)} - own)


def lower_sources(cx: CellComplex, o: ClosedOrbit) -> list[str]:
    """Facets of the orbit's bottom cells."""
    return cx.sorted({f for s in o.sigmas for f in cx.faces(s)})


def upper_family(v: VectorField, source: Source, target: ClosedOrbit) -> PathFamily:
    cx = v.complex
    if isinstance(source, ClosedOrbit):
        starts = upper_sources(cx, source)
    else:
        starts = cx.sorted(cx.faces(source))
    return v_paths_between(v, starts, target.taus, target.index + 1)


def lower_family(v: VectorField, source: ClosedOrbit, target: ClosedOrbit) -> PathFamily:
    return v_paths_between(v, lower_sources(v.complex, source), target.sigmas, target.index)


def _count_components(cx: CellComplex, members: list[str], chain: Iterable[str], adjacency: str) -> int:
    """Components of ``members`` under lower adjacency chained through ``chain``."""
    nodes = cx.sorted(set(members) | set(chain))
    uf = _UnionFind(nodes)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if cx.lower_adjacent(a, b, adjacency):
                uf.union(a, b)
    return len({uf.find(m) for m in members})


def svp_upper_classes(v: VectorField, source: Source, target: ClosedOrbit, adjacency: str = "codim1") -> int:
    """Number of ∼-classes of the spanned set towards an orbit's top generator.

    Classes are indexed by the starting facets of nondegenerate paths; two
    starts merge when they are lower adjacent, directly or through a chain.
    For an orbit source the chain runs through other starting facets; for a
    rest-cell source it may run through any facet of that cell.
    """
    cx = v.complex
    fam = upper_family(v, source, target)
    if not fam.nonempty:
        raise EmptyVP(f"no V-path from {_name(source)} to {target.name}")
    starts = fam.nondegenerate_sources
    chain = starts if isinstance(source, ClosedOrbit) else cx.faces(source)
    return _count_components(cx, starts, chain, adjacency)


def svp_lower_classes(v: VectorField, source: ClosedOrbit, target: ClosedOrbit, adjacency: str = "codim1") -> int:
    """∼′-class count; equal by construction to :func:`svp_upper_classes`."""
    return svp_upper_classes(v, source, target, adjacency)


def svp_lower_classes_direct(
    v: VectorField, source: ClosedOrbit, target: ClosedOrbit, adjacency: str = "codim1"
) -> int:
    """Independent ∼′ computation on the lower spanned set.

    Lower cells ``q`` on connecting walks are related when they are facets
    of ∼-related upper cells.  The ∼ closure is built from the upper cells
    themselves: cells on walks from one start are related, and so are the
    cells of lower-adjacent starts.  The relation is reflexive only when
    every lower cell lies under some upper spanned cell; otherwise
    :class:`RelationUndefined` is raised.
    """
    cx = v.complex
    low = lower_family(v, source, target)
    if not low.nonempty:
        raise EmptyVP(f"no V-path from {source.name} to {target.name}")
    up = upper_family(v, source, target)
    starts = up.nondegenerate_sources
    adj = successors(v, target.index + 1)
    per_start = {
        s: v_paths_between(v, [s], target.taus, target.index + 1, adj=adj).taus for s in starts
    }
    uf = _UnionFind()
    for s, ws in per_start.items():
        uf.add("s:" + s)
        for w in ws:
            uf.add("w:" + w)
            uf.union("s:" + s, "w:" + w)
    for i, a in enumerate(starts):
        for b in starts[i + 1:]:
            if cx.lower_adjacent(a, b, adjacency):
                uf.union("s:" + a, "s:" + b)
    upper_cells = set(up.taus)
    for q in low.taus:
        above = cx.cofaces(q) & upper_cells
        if not above:
            raise RelationUndefined(f"{q!r} is not a face of any upper spanned cell")
        uf.add("q:" + q)
        for w in above:
            uf.union("q:" + q, "w:" + w)
    return len({uf.find("q:" + q) for q in low.taus})


def svp_orbit_to_rest_classes(
    v: VectorField, source: ClosedOrbit, target: str, adjacency: str = "codim1"
) -> int:
    """Classes of the spanned set from an orbit's bottom cells to a rest cell.

    Spanned cells are related by chains of lower adjacency inside the set,
    except that a common face equal to (or inside) the target never merges.
    """
    cx = v.complex
    fam = v_paths_between(v, lower_sources(cx, source), [target], source.index - 1)
    if not fam.nonempty:
        raise EmptyVP(f"no V-path from {source.name} to {target}")
    blocked = cx.closure(target)
    qs = fam.taus
    uf = _UnionFind(qs)
    for i, a in enumerate(qs):
        for b in qs[i + 1:]:
            if cx.shared_faces(a, b, adjacency) - blocked:
                uf.union(a, b)
    return len({uf.find(q) for q in qs})


def rest_path_count(v: VectorField, source: str, target: str) -> int:
    """Exact number of V-paths from the facets of ``source`` to ``target``."""
    cx = v.complex
    fam = v_paths_between(v, cx.faces(source), [target], cx.dim(target), count=True)
    return fam.total(target)


def rest_to_rest_count(v: VectorField, source: str, target: str) -> int:
    """Morse coefficient between rest cells: path count mod 2."""
    return rest_path_count(v, source, target) % 2


def _orbit_faces_of_dim(cx: CellComplex, o: ClosedOrbit, dim: int) -> set[str]:
    out: set[str] = set()
    for c in o.cells:
        out |= {f for f in cx.closure(c) if cx.dim(f) == dim}
    return out


def coincidence(v: VectorField, a: Source, b: Source) -> set[str]:
    """Cells where the faces of ``a`` meet ``b`` with no path in between."""
    cx = v.complex
    if isinstance(a, ClosedOrbit) and isinstance(b, ClosedOrbit):
        return (set(upper_sources(cx, a)) & set(b.taus)) | (set(lower_sources(cx, a)) & set(b.sigmas))
    if isinstance(b, ClosedOrbit):
        return set(cx.faces(a)) & set(b.taus)
    if isinstance(a, ClosedOrbit):
        return {b} & _orbit_faces_of_dim(cx, a, cx.dim(b))
    return {b} & set(cx.faces(a))


def attachment_type(v: VectorField, a: Source, b: Source) -> str:
    if not coincidence(v, a, b):
        return "none"
    if isinstance(a, ClosedOrbit) and isinstance(b, ClosedOrbit):
        return "orbit-orbit"
    if isinstance(b, ClosedOrbit):
        return "rest-orbit"
    if isinstance(a, ClosedOrbit):
        return "orbit-rest"
    return "none"


def _name(x: Source) -> str:
    return x.name if isinstance(x, ClosedOrbit) else x


# -- exclusions ------------------------------------------------------------


@dataclass(frozen=True)
class ExclusionViolation:
    kind: str
    source: str
    target: str
    cells: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "source": self.source, "target": self.target, "cells": list(self.cells)}


@dataclass
class ExclusionReport:
    violations: list[ExclusionViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {x.kind for x in self.violations}

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [x.to_dict() for x in self.violations]}


DEGENERATE_POLICIES = ("lenient", "upper-strict", "strict")


def check_exclusions(
    v: VectorField,
    orbits: list[ClosedOrbit] | None = None,
    degenerate: str = "upper-strict",
) -> ExclusionReport:
    """Find every configuration that the Floer boundary cannot handle.

    ``degenerate`` says whether a length-0 path (a start cell that already
    is the target) counts as a forbidden connection: never (``lenient``),
    only for connections leaving an orbit's top cells (``upper-strict``),
    or always (``strict``).
    """
    if degenerate not in DEGENERATE_POLICIES:
        raise ValueError(f"unknown policy {degenerate!r}")
    strict_low = degenerate == "strict"
    strict_up = degenerate != "lenient"
    cx = v.complex
    if orbits is None:
        orbits = closed_orbits(v)
    out: list[ExclusionViolation] = []

    def add(kind, a, b, cells):
        out.append(ExclusionViolation(kind, _name(a), _name(b), tuple(cx.sorted(cells))))

    for o in orbits:
        if o.twisted:
            add(TWISTED, o, o, o.sigmas)
    for i, o in enumerate(orbits):
        for o2 in orbits[i + 1:]:
            shared = set(o.cells) & set(o2.cells)
            if shared:
                add(OVERLAPPING, o, o2, shared)

    # walks between two rest cells that pass through an orbit are infinite in number
    orbit_cells = {c for o in orbits for c in o.sigmas}
    for k in range(1, cx.max_dim + 1):
        lows = [c for c in cx.cells_of_dim(k - 1) if v.is_rest(c)]
        if not lows:
            continue
        adj = successors(v, k - 1)
        for p in cx.cells_of_dim(k):
            if v.is_rest(p):
                fam = v_paths_between(v, cx.faces(p), lows, k - 1, adj=adj)
                hit = orbit_cells.intersection(fam.cells)
                if hit:
                    add(RECURRENT_ROUTE, p, ",".join(fam.targets), hit)

    for o in orbits:
        k = o.index + 1
        for p in cx.cells_of_dim(k):
            if v.is_rest(p):
                fam = v_paths_between(v, cx.faces(p), o.sigmas, k - 1)
                hit = fam.reachable_sources if strict_low else fam.nondegenerate_sources
                if hit:
                    add(CRITICAL_TO_ORBIT, p, o, hit)
        ups = upper_sources(cx, o)
        adj = successors(v, k - 1)
        for p in cx.cells_of_dim(k - 1):
            if v.is_rest(p):
                fam = v_paths_between(v, ups, [p], k - 1, adj=adj)
                hit = fam.reachable_sources if strict_up else fam.nondegenerate_sources
                if hit:
                    add(ORBIT_TO_CRITICAL, o, p, hit)
        for o2 in orbits:
            if o2 is not o and o2.index == o.index:
                fam = v_paths_between(v, ups, o2.sigmas, k - 1, adj=adj)
                hit = fam.reachable_sources if strict_up else fam.nondegenerate_sources
                if hit:
                    add(ORBIT_TO_ORBIT, o, o2, hit)
    return ExclusionReport(out)


# -- boundary coefficients -------------------------------------------------


@dataclass(frozen=True)
class AlphaEntry:
    src: str
    dst: str
    value: int
    provenance: str
    classes: int | None = None
    attachment: str | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        d = {"src": self.src, "dst": self.dst, "value": self.value, "provenance": self.provenance}
        if self.classes is not None:
            d["classes"] = self.classes
        if self.attachment is not None:
            d["attachment"] = self.attachment
        if self.note is not None:
            d["note"] = self.note
        return d


def _svp_or_attachment(v, a: Source, b: Source, count, src: str, dst: str) -> AlphaEntry:
    touching = coincidence(v, a, b)
    try:
        n = count()
    except EmptyVP:
        if touching:
            return AlphaEntry(src, dst, 1, ATTACHMENT, attachment=attachment_type(v, a, b))
        return AlphaEntry(src, dst, 0, ZERO)
    note = "coincident faces also present: " + ",".join(v.complex.sorted(touching)) if touching else None
    return AlphaEntry(src, dst, n % 2, SVP, classes=n, note=note)


def orbit_pair_alpha(v: VectorField, o: ClosedOrbit, o2: ClosedOrbit, adjacency: str = "codim1") -> AlphaEntry:
    """Shared coefficient of ``O^1 -> O2^1`` and ``O^0 -> O2^0``.

    The class count is taken on the upper spanned set.  When only the lower
    level carries paths the upper set is empty, so the count is zero; an
    attachment is considered only when neither level has a path.
    """

    def count():
        try:
            return svp_upper_classes(v, o, o2, adjacency)
        except EmptyVP:
            if lower_family(v, o, o2).nonempty:
                return 0
            raise

    return _svp_or_attachment(v, o, o2, count, o.name, o2.name)


def alpha(
    v: VectorField,
    src: Generator,
    dst: Generator,
    orbits: dict[str, ClosedOrbit],
    adjacency: str = "codim1",
    pair_cache: dict | None = None,
) -> AlphaEntry:
    """Boundary coefficient between generators of adjacent degree."""
    if dst.degree != src.degree - 1:
        raise ValueError("alpha is defined between adjacent degrees")
    s, d = src.label, dst.label
    if src.kind == REST and dst.kind == REST:
        n = rest_path_count(v, src.source, dst.source)
        return AlphaEntry(s, d, n % 2, REST_REST if n else ZERO, classes=n)
    if src.kind == REST and dst.kind == UPPER:
        o2 = orbits[dst.source]
        return _svp_or_attachment(
            v, src.source, o2, lambda: svp_upper_classes(v, src.source, o2, adjacency), s, d
        )
    if src.kind == LOWER and dst.kind == REST:
        o = orbits[src.source]
        return _svp_or_attachment(
            v, o, dst.source, lambda: svp_orbit_to_rest_classes(v, o, dst.source, adjacency), s, d
        )
    if (src.kind, dst.kind) in ((UPPER, UPPER), (LOWER, LOWER)):
        key = (src.source, dst.source)
        if pair_cache is not None and key in pair_cache:
            e = pair_cache[key]
        else:
            e = orbit_pair_alpha(v, orbits[src.source], orbits[dst.source], adjacency)
            if pair_cache is not None:
                pair_cache[key] = e
        return AlphaEntry(s, d, e.value, e.provenance, e.classes, e.attachment, e.note)
    # rest -> lower, lower -> upper, upper -> rest, upper -> lower carry no term
    return AlphaEntry(s, d, 0, ZERO)


# -- the complex -------------------------------------------------------------


@dataclass
class FloerComplex:
    generators: dict[int, list[Generator]]
    boundaries: dict[int, GF2Matrix]
    alpha: dict[tuple[str, str], AlphaEntry]
    orbits: list[ClosedOrbit] = field(default_factory=list)

    @property
    def top(self) -> int:
        return max(self.generators, default=-1)

    def dims(self) -> list[int]:
        return [len(self.generators[k]) for k in range(self.top + 1)]

    def labels(self, k: int) -> list[str]:
        return [g.label for g in self.generators.get(k, [])]

    def boundary_of(self, label: str) -> list[str]:
        for k, gens in self.generators.items():
            if label in [g.label for g in gens]:
                if k == 0:
                    return []
                col = self.boundaries[k].column(label)
                return [r for r in self.boundaries[k].row_labels if r in col]
        raise KeyError(label)

    def d_squared_zero(self) -> bool:
        return all(
            not (self.boundaries[k - 1] @ self.boundaries[k]).data.any()
            for k in range(2, self.top + 1)
        )

    def betti(self) -> list[int]:
        return betti_from_boundaries(self.dims(), self.boundaries)

    def to_dict(self) -> dict:
        return {
            "generators": {str(k): self.labels(k) for k in range(self.top + 1)},
            "alpha": [e.to_dict() for e in self.alpha.values() if e.provenance != ZERO],
            "betti": self.betti(),
            "d_squared_ok": self.d_squared_zero(),
        }


def assemble(
    generators: dict[int, list[Generator]], entries: dict[tuple[str, str], AlphaEntry]
) -> dict[int, GF2Matrix]:
    bd: dict[int, GF2Matrix] = {}
    for k in range(1, max(generators, default=0) + 1):
        rows = [g.label for g in generators[k - 1]]
        cols = [g.label for g in generators[k]]
        data = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for j, c in enumerate(cols):
            for i, r in enumerate(rows):
                e = entries.get((c, r))
                if e is not None:
                    data[i, j] = e.value
        bd[k] = GF2Matrix(data, tuple(rows), tuple(cols))
    return bd


def check_d_squared(bd: dict[int, GF2Matrix]) -> None:
    for k in sorted(bd):
        if k - 1 in bd:
            prod = bd[k - 1] @ bd[k]
            nz = np.argwhere(prod.data)
            if nz.size:
                i, j = nz[0]
                raise DSquaredNonzero(k, prod.row_labels[i], prod.col_labels[j])


def build_floer_complex(
    v: VectorField,
    adjacency: str = "codim1",
    cycle_budget: int = DEFAULT_CYCLE_BUDGET,
    enforce_exclusions: bool = True,
    check: bool = True,
) -> FloerComplex:
    report = validate_field(v)
    if not report.valid:
        raise FieldError(f"invalid vector field: {sorted(report.clauses())}")
    orbits = closed_orbits(v, cycle_budget)
    if enforce_exclusions:
        excl = check_exclusions(v, orbits)
        if not excl.ok:
            raise ExclusionsViolated(excl)
    by_name = {o.name: o for o in orbits}
    gens = floer_generators(v, orbits)
    entries: dict[tuple[str, str], AlphaEntry] = {}
    cache: dict = {}
    for k in range(1, max(gens, default=0) + 1):
        for src in gens[k]:
            for dst in gens[k - 1]:
                entries[(src.label, dst.label)] = alpha(v, src, dst, by_name, adjacency, cache)
    bd = assemble(gens, entries)
    if check:
        check_d_squared(bd)
    return FloerComplex(gens, bd, entries, orbits)


def betti_floer(fc: FloerComplex) -> list[int]:
    return fc.betti()
