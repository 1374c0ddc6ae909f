"""
Orbit replacement: turn every closed orbit into two rest cells.

Splitting an orbit at its top cell ``tau[k]`` reverses the arrows between
``sigma[0]`` and ``tau[k]``.  Afterwards ``sigma[0]`` (the orbit's index)
and ``tau[k]`` (index + 1) are unmatched and the orbit no longer closes.
The resulting gradient field carries the classical Morse complex, which the
chain map ``phi`` identifies with the Floer complex of the original field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import DEFAULT_CYCLE_BUDGET, ClosedOrbit, closed_orbits, find_orbit
from .floer import (
    LOWER,
    REST,
    UPPER,
    AlphaEntry,
    FloerComplex,
    Generator,
    assemble,
    build_floer_complex,
    check_d_squared,
    rest_path_count,
)
from .homology_z2 import betti_cellular
from .vector_field import FieldError, VectorField, rest_counts


class NotAnOrbitCell(ValueError):
    pass


class IllegalSplitPosition(ValueError):
    pass


class NotGradient(ValueError):
    pass


class ChainMapMismatch(AssertionError):
    def __init__(self, degree: int, src: str, dst: str):
        super().__init__(f"phi d != d' phi in degree {degree} at ({src} -> {dst})")
        self.degree = degree
        self.pair = (src, dst)


class InequalityViolated(AssertionError):
    pass


@dataclass(frozen=True)
class SurgeryRecord:
    orbit: ClosedOrbit
    position: int
    q_up: str
    q_down: str
    reversed_pairs: tuple[tuple[str, str], ...]

    def to_dict(self) -> dict:
        return {
            "orbit": self.orbit.name,
            "position": self.position,
            "q_up": self.q_up,
            "q_down": self.q_down,
            "reversed_pairs": [list(p) for p in self.reversed_pairs],
        }


def admissible_taus(o: ClosedOrbit) -> list[str]:
    """Top cells where the orbit may be split (every position but the last)."""
    return list(o.taus[:-1])


def replace_orbit(v: VectorField, o: ClosedOrbit, tau: str | None = None) -> tuple[VectorField, SurgeryRecord]:
    if tau is None:
        tau = v.complex.sorted(admissible_taus(o))[0]
    if tau not in o.taus:
        if tau in o.sigmas:
            raise IllegalSplitPosition(f"{tau!r} is a bottom cell of {o.name}; pick a top cell")
        raise NotAnOrbitCell(f"{tau!r} is not a cell of {o.name}")
    k = o.taus.index(tau)
    if k == o.length - 1:
        raise IllegalSplitPosition(f"{tau!r} is the last top cell of {o.name}")
    pairs = dict(v.pairs)
    for s in range(k + 1):
        if pairs.get(o.sigmas[s]) != o.taus[s]:
            raise NotAnOrbitCell(f"{o.name} is not an orbit of this field")
        del pairs[o.sigmas[s]]
    rev = tuple((o.sigmas[s], o.taus[s - 1]) for s in range(1, k + 1))
    pairs.update(rev)
    return v.with_pairs(pairs), SurgeryRecord(o, k, tau, o.sigmas[0], rev)


def replace_all_orbits(
    v: VectorField,
    choices: dict[str, str] | None = None,
    cycle_budget: int = DEFAULT_CYCLE_BUDGET,
) -> tuple[VectorField, list[SurgeryRecord]]:
    """Split orbits in canonical order until the field is gradient.

    ``choices`` maps an orbit name to the top cell to split at.
    """
    choices = choices or {}
    records: list[SurgeryRecord] = []
    cur = v
    limit = len(v.pairs) + 1
    while True:
        orbits = closed_orbits(cur, cycle_budget)
        if not orbits:
            return cur, records
        if len(records) >= limit:
            raise RuntimeError("surgery did not terminate")
        o = orbits[0]
        cur, rec = replace_orbit(cur, o, choices.get(o.name))
        records.append(rec)


def is_gradient(v: VectorField, cycle_budget: int = DEFAULT_CYCLE_BUDGET) -> bool:
    return not closed_orbits(v, cycle_budget)


def morse_boundary(v: VectorField) -> FloerComplex:
    """Classical discrete-Morse complex on the rest cells of a gradient field."""
    if not is_gradient(v):
        raise NotGradient("the Morse complex needs a field without closed orbits")
    cx = v.complex
    gens = {k: [Generator(REST, c, k) for c in cx.cells_of_dim(k) if v.is_rest(c)] for k in range(cx.max_dim + 1)}
    entries: dict[tuple[str, str], AlphaEntry] = {}
    for k in range(1, cx.max_dim + 1):
        for a in gens[k]:
            for b in gens[k - 1]:
                n = rest_path_count(v, a.source, b.source)
                entries[(a.label, b.label)] = AlphaEntry(
                    a.label, b.label, n % 2, "rest-rest-count" if n else "zero", classes=n
                )
    bd = assemble(gens, entries)
    check_d_squared(bd)
    return FloerComplex(gens, bd, entries, [])


def surgery_census(v: VectorField, records: list[SurgeryRecord]) -> dict:
    """Rest counts before and after, plus orbit counts by index."""
    top = v.complex.max_dim
    c = rest_counts(v)
    a = [sum(1 for r in records if r.orbit.index == k) for k in range(top + 1)]
    predicted = [c[k] + a[k] + (a[k - 1] if k else 0) for k in range(top + 1)]
    return {"c": c, "A": a, "predicted": predicted}


def phi_map(fc: FloerComplex, records: list[SurgeryRecord]) -> dict[str, str]:
    """Generator labels of the Floer complex to rest cells of the split field."""
    by_orbit = {r.orbit.name: r for r in records}
    out: dict[str, str] = {}
    for gens in fc.generators.values():
        for g in gens:
            if g.kind == REST:
                out[g.label] = g.source
            elif g.kind == LOWER:
                out[g.label] = by_orbit[g.source].q_down
            else:
                out[g.label] = by_orbit[g.source].q_up
    return out


@dataclass
class ChainMapReport:
    phi: dict[str, str]
    mismatches: list[tuple[int, str, str]] = field(default_factory=list)
    vanishing: list[dict] = field(default_factory=list)
    two_paths: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            not self.mismatches
            and all(x["value"] == 0 for x in self.vanishing)
            and all(n == 2 for n in self.two_paths.values())
        )

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "phi": self.phi,
            "mismatches": [list(m) for m in self.mismatches],
            "vanishing": self.vanishing,
            "two_paths": self.two_paths,
        }


def vanishing_coefficients(v: VectorField, records: list[SurgeryRecord], mc: FloerComplex) -> list[dict]:
    """Morse coefficients of the split field that must vanish for ``phi`` to commute.

    Covers ``q_up -> rest``, ``q_up -> q_down`` of another orbit and
    ``q_down -> q_up``.  Needs no Floer complex, so it also applies to
    fields the Floer construction refuses.
    """
    rest_of_v = {c for c in v.complex if v.is_rest(c)}
    ups = {r.q_up: r for r in records}
    downs = {r.q_down: r for r in records}
    out = []
    for (a, b), e in mc.alpha.items():
        kind = None
        if a in ups and b in rest_of_v:
            kind = "q_up->rest"
        elif a in ups and b in downs and ups[a] is not downs[b]:
            kind = "q_up->other q_down"
        elif a in downs and b in ups:
            kind = "q_down->q_up"
        if kind:
            out.append({"kind": kind, "src": a, "dst": b, "value": e.value})
    return out


def verify_chain_map(
    v: VectorField,
    adjacency: str = "codim1",
    cycle_budget: int = DEFAULT_CYCLE_BUDGET,
    strict: bool = True,
    enforce_exclusions: bool = True,
) -> ChainMapReport:
    """Compare the Floer boundary with the Morse boundary of the split field.

    The split field is obtained by replacing every orbit once at its default
    position; every orbit must be removed by its own surgery for ``phi`` to
    be a bijection.
    """
    fc = build_floer_complex(v, adjacency, cycle_budget, enforce_exclusions=enforce_exclusions)
    v2, records = replace_all_orbits(v, cycle_budget=cycle_budget)
    if {r.orbit.name for r in records} != {o.name for o in fc.orbits} or len(records) != len(fc.orbits):
        raise FieldError("orbits are not removed one surgery each; phi is undefined")
    mc = morse_boundary(v2)
    phi = phi_map(fc, records)
    report = ChainMapReport(phi)
    for k in range(1, fc.top + 1):
        d, d2 = fc.boundaries[k], mc.boundaries[k]
        if sorted(phi[x] for x in d.col_labels) != sorted(d2.col_labels):
            raise FieldError(f"phi is not a bijection in degree {k}")
        for src in d.col_labels:
            lhs = {phi[r] for r in d.column(src)}
            rhs = set(d2.column(phi[src]))
            for dst in sorted(lhs ^ rhs):
                report.mismatches.append((k, src, dst))

    report.vanishing = vanishing_coefficients(v, records, mc)
    for r in records:
        report.two_paths[r.orbit.name] = rest_path_count(v2, r.q_up, r.q_down)
    if strict and report.mismatches:
        raise ChainMapMismatch(*report.mismatches[0])
    return report


@dataclass
class MorseInequalityReport:
    c: list[int]
    A: list[int]
    betti: list[int]
    lhs: list[int]
    rhs: list[int]

    @property
    def slack(self) -> list[int]:
        return [a - b for a, b in zip(self.lhs, self.rhs)]

    @property
    def ok(self) -> bool:
        return all(s >= 0 for s in self.slack)

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "A": self.A,
            "betti": self.betti,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "ok": self.ok,
        }


def _alternating(xs: list[int], k: int) -> int:
    return sum((-1) ** (k - i) * xs[i] for i in range(k + 1))


def morse_inequalities(
    v: VectorField,
    betti: list[int] | None = None,
    cycle_budget: int = DEFAULT_CYCLE_BUDGET,
    strict: bool = True,
) -> MorseInequalityReport:
    """Alternating rest counts plus orbit counts against alternating Betti sums."""
    top = v.complex.max_dim
    if betti is None:
        betti = betti_cellular(v.complex)
    orbits = closed_orbits(v, cycle_budget)
    c = rest_counts(v)
    a = [sum(1 for o in orbits if o.index == k) for k in range(top + 1)]
    lhs = [_alternating(c, k) + a[k] for k in range(top + 1)]
    rhs = [_alternating(betti, k) for k in range(top + 1)]
    rep = MorseInequalityReport(c, a, list(betti), lhs, rhs)
    if strict and not rep.ok:
        bad = [k for k, s in enumerate(rep.slack) if s < 0]
        raise InequalityViolated(f"Morse inequality fails in degrees {bad}")
    return rep


def select_orbit(v: VectorField, ref: str) -> ClosedOrbit:
    try:
        return find_orbit(closed_orbits(v), ref)
    except KeyError as exc:
        raise NotAnOrbitCell(str(exc)) from None
