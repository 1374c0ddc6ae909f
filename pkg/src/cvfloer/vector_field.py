"""
Combinatorial vector fields: partial matchings of cells with cofaces.

A field is parsed without validation; :func:`validate_field` reports every
violated clause at once instead of failing on the first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .cell_complex import CellComplex, FixtureSyntaxError, UnknownCell, _strip, parse_complex


class FieldError(ValueError):
    pass


class DuplicateTail(FieldError):
    """One cell given two heads, so ``V`` is not a map."""

    clause = "duplicate-tail"

    def __init__(self, cell: str, heads: tuple[str, ...], where: str = ""):
        super().__init__(f"{where}cell {cell!r} is already a tail (heads {', '.join(heads)})")
        self.cell = cell
        self.heads = heads


DIMENSION = "dimension"
FACE = "face"
HEAD_NOT_TAIL = "head-not-tail"
SINGLE_PREIMAGE = "single-preimage"


@dataclass(frozen=True)
class Violation:
    clause: str
    cells: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"clause": self.clause, "cells": list(self.cells)}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def clauses(self) -> set[str]:
        return {v.clause for v in self.violations}

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


@dataclass(frozen=True, eq=False)
class VectorField:
    """The map ``V``; ``pairs`` sends each tail to its head."""

    complex: CellComplex
    pairs: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        cx = self.complex
        for a, b in self.pairs.items():
            for c in (a, b):
                if c not in cx:
                    raise UnknownCell(c)
        ordered = {a: self.pairs[a] for a in cx.sorted(self.pairs)}
        object.__setattr__(self, "pairs", ordered)
        pre: dict[str, list[str]] = {}
        for a, b in ordered.items():
            pre.setdefault(b, []).append(a)
        object.__setattr__(self, "_preimages", pre)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.complex is other.complex and dict(self.pairs) == dict(other.pairs)

    def __call__(self, sigma: str) -> str | None:
        return self.pairs.get(sigma)

    def head(self, sigma: str) -> str | None:
        return self.pairs.get(sigma)

    def tail(self, tau: str) -> str | None:
        pre = self._preimages.get(tau)
        return pre[0] if pre else None

    def preimages(self, tau: str) -> list[str]:
        return list(self._preimages.get(tau, ()))

    def is_head(self, c: str) -> bool:
        return c in self._preimages

    def is_tail(self, c: str) -> bool:
        return c in self.pairs

    def is_rest(self, c: str) -> bool:
        return c not in self.pairs and c not in self._preimages

    def classify(self, c: str) -> str:
        if c not in self.complex:
            raise UnknownCell(c)
        if self.is_tail(c):
            return "tail"
        if self.is_head(c):
            return "head"
        return "rest"

    def rest_cells(self) -> list[str]:
        return [c for c in self.complex if self.is_rest(c)]

    def with_pairs(self, pairs: Mapping[str, str]) -> "VectorField":
        return VectorField(self.complex, dict(pairs))

    def to_text(self) -> str:
        lines = [self.complex.to_text().rstrip("\n")]
        lines += [f"match {a} {b}" for a, b in self.pairs.items()]
        return "\n".join(line for line in lines if line) + "\n"


def parse_field(cx: CellComplex, text: str) -> VectorField:
    """Read the ``match`` lines of fixture text against ``cx``."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        tok = line.split()
        if not tok or tok[0] != "match":
            continue
        if len(tok) != 3:
            raise FixtureSyntaxError(lineno, "expected: match <tail-id> <head-id>")
        a, b = tok[1], tok[2]
        for c in (a, b):
            if c not in cx:
                raise UnknownCell(c)
        if a in pairs:
            raise DuplicateTail(a, (pairs[a], b), f"line {lineno}: ")
        pairs[a] = b
    return VectorField(cx, pairs)


def parse_fixture(text: str) -> VectorField:
    """Complex and field from one fixture text."""
    return parse_field(parse_complex(text), text)


def validate_field(v: VectorField) -> ValidationReport:
    cx = v.complex
    out: list[Violation] = []
    for a, b in v.pairs.items():
        if cx.dim(b) != cx.dim(a) + 1:
            out.append(Violation(DIMENSION, (a, b)))
        elif a not in cx.faces(b):
            out.append(Violation(FACE, (a, b)))
    for a, b in v.pairs.items():
        if v.is_head(a):
            out.append(Violation(HEAD_NOT_TAIL, (a, b)))
    for tau in cx:
        pre = v.preimages(tau)
        if len(pre) > 1:
            out.append(Violation(SINGLE_PREIMAGE, tuple(cx.sorted(pre)) + (tau,)))
    return ValidationReport(tuple(out))


def rest_points(v: VectorField, k: int) -> list[str]:
    """Unmatched ``k``-cells in canonical order."""
    return [c for c in v.complex.cells_of_dim(k) if v.is_rest(c)]


def rest_counts(v: VectorField) -> list[int]:
    return [len(rest_points(v, k)) for k in range(v.complex.max_dim + 1)]


def from_pairs(cx: CellComplex, pairs: Iterable[tuple[str, str]]) -> VectorField:
    d: dict[str, str] = {}
    for a, b in pairs:
        if a in d:
            raise DuplicateTail(a, (d[a], b))
        d[a] = b
    return VectorField(cx, d)
