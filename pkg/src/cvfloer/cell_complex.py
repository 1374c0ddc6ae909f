"""
Finite regular cell complexes and the line-based fixture grammar.

Grammar (UTF-8, ``#`` starts a comment)::

    simplex 0 1 2              # a simplex and all of its faces
    cell sq 2 faces: e1 e2 e3 e4
    cell v0 0                  # explicit 0-cell
    match 0 0.1                # a vector-field arrow, read by vector_field

Cells may be declared in any order; faces are resolved after the whole text
has been read.  Simplicial cell ids are the dot-joined sorted vertex list
(``"0.1.3"``).  All matrices and iteration orders use the canonical order
``(dim, id)`` with ids compared as strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

import numpy as np

from .homology_z2 import GF2Matrix

ADJACENCY_MODES = ("codim1", "any-face")


class ComplexError(ValueError):
    """Invalid complex or fixture text."""


class FixtureSyntaxError(ComplexError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DanglingFace(ComplexError):
    pass


class DuplicateCell(ComplexError):
    pass


class FaceDimensionMismatch(ComplexError):
    pass


class IrregularCell(ComplexError):
    pass


class UnknownCell(KeyError):
    def __str__(self):
        return f"unknown cell {self.args[0]!r}"


def simplex_id(vertices: Iterable[int]) -> str:
    vs = sorted(set(int(v) for v in vertices))
    return ".".join(str(v) for v in vs)


def cell_key(cell_id: str, dim: int) -> tuple[int, str]:
    return (dim, cell_id)


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    faces: frozenset[str]
    vertices: tuple[int, ...] | None = None  # simplicial cells only


class CellComplex:
    """Immutable finite regular cell complex.

    ``mode`` is ``"simplicial"`` when every cell came from a ``simplex``
    declaration and ``"cw"`` otherwise.  Only codimension-1 incidences are
    stored; all of them are regular with multiplicity one.
    """

    def __init__(self, cells: Mapping[str, Cell] | Iterable[Cell], mode: str = "simplicial"):
        if isinstance(cells, Mapping):
            cells = cells.values()
        cells = sorted(cells, key=lambda c: (c.dim, c.id))
        self._cells: dict[str, Cell] = {}
        for c in cells:
            if c.id in self._cells:
                raise DuplicateCell(f"duplicate cell {c.id!r}")
            self._cells[c.id] = c
        if mode not in ("simplicial", "cw"):
            raise ComplexError(f"unknown mode {mode!r}")
        self.mode = mode
        self._validate()
        self._order = {cid: i for i, cid in enumerate(self._cells)}
        self._by_dim: dict[int, list[str]] = {}
        cofaces: dict[str, set[str]] = {cid: set() for cid in self._cells}
        for c in self._cells.values():
            self._by_dim.setdefault(c.dim, []).append(c.id)
            for f in c.faces:
                cofaces[f].add(c.id)
        self._cofaces = {cid: frozenset(s) for cid, s in cofaces.items()}

    def _validate(self) -> None:
        for c in self._cells.values():
            if c.dim < 0:
                raise FaceDimensionMismatch(f"cell {c.id!r} has negative dimension")
            if c.dim == 0 and c.faces:
                raise FaceDimensionMismatch(f"0-cell {c.id!r} cannot have faces")
            for f in c.faces:
                if f not in self._cells:
                    raise DanglingFace(f"cell {c.id!r} lists unknown face {f!r}")
                if self._cells[f].dim != c.dim - 1:
                    raise FaceDimensionMismatch(
                        f"face {f!r} of {c.id!r} has dimension {self._cells[f].dim}, "
                        f"expected {c.dim - 1}"
                    )
            # the attaching sphere must be a mod-2 cycle with every ridge used twice
            if c.dim == 1 and len(c.faces) != 2:
                raise IrregularCell(f"1-cell {c.id!r} must have exactly two vertex faces")
            if c.dim >= 2:
                ridges: dict[str, int] = {}
                for f in c.faces:
                    for g in self._cells[f].faces:
                        ridges[g] = ridges.get(g, 0) + 1
                bad = sorted(g for g, n in ridges.items() if n != 2)
                if bad or not c.faces:
                    raise IrregularCell(f"boundary of {c.id!r} is not a closed regular sphere ({bad})")

    # -- basic queries -----------------------------------------------------

    def __contains__(self, cell_id: str) -> bool:
        return cell_id in self._cells

    def __iter__(self) -> Iterator[str]:
        return iter(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def __getitem__(self, cell_id: str) -> Cell:
        try:
            return self._cells[cell_id]
        except KeyError:
            raise UnknownCell(cell_id) from None

    @property
    def max_dim(self) -> int:
        """Top dimension, or -1 for the empty complex."""
        return max(self._by_dim, default=-1)

    def dim(self, cell_id: str) -> int:
        return self[cell_id].dim

    def key(self, cell_id: str) -> tuple[int, str]:
        return (self[cell_id].dim, cell_id)

    def position(self, cell_id: str) -> int:
        return self._order[cell_id]

    def sorted(self, cell_ids: Iterable[str]) -> list[str]:
        return sorted(cell_ids, key=self._order.__getitem__)

    def cells_of_dim(self, k: int) -> list[str]:
        return list(self._by_dim.get(k, ()))

    def counts(self) -> list[int]:
        return [len(self._by_dim.get(k, ())) for k in range(self.max_dim + 1)]

    def faces(self, cell_id: str) -> frozenset[str]:
        return self[cell_id].faces

    def cofaces(self, cell_id: str) -> frozenset[str]:
        if cell_id not in self._cofaces:
            raise UnknownCell(cell_id)
        return self._cofaces[cell_id]

    def closure(self, cell_id: str) -> set[str]:
        """All faces of every codimension, including the cell itself."""
        seen = {cell_id}
        stack = [cell_id]
        while stack:
            for f in self[stack.pop()].faces:
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return seen

    def is_face(self, sigma: str, tau: str) -> bool:
        return sigma in self[tau].faces

    def vertices(self, cell_id: str) -> tuple[int, ...]:
        c = self[cell_id]
        if c.vertices is None:
            raise ComplexError(f"cell {cell_id!r} has no vertex labels (cw mode)")
        return c.vertices

    def lower_adjacent(self, q: str, q2: str, adjacency: str = "codim1") -> bool:
        """Whether two distinct equal-dimension cells share a face.

        ``codim1`` requires a common codimension-1 face; ``any-face`` accepts
        a common face of any dimension.
        """
        a, b = self[q], self[q2]
        if a.dim != b.dim:
            raise ComplexError(f"lower adjacency needs equal dimensions ({q!r}, {q2!r})")
        if a.dim < 1:
            raise ComplexError("lower adjacency is defined for cells of dimension >= 1")
        if q == q2:
            return False
        return bool(self.shared_faces(q, q2, adjacency))

    def shared_faces(self, q: str, q2: str, adjacency: str = "codim1") -> set[str]:
        if adjacency == "codim1":
            return set(self[q].faces & self[q2].faces)
        if adjacency == "any-face":
            return (self.closure(q) & self.closure(q2)) - {q, q2}
        raise ComplexError(f"unknown adjacency mode {adjacency!r}")

    def boundary_matrix(self, k: int) -> GF2Matrix:
        """Cellular boundary ``C_k -> C_{k-1}`` in canonical order."""
        if not 1 <= k <= self.max_dim:
            raise ComplexError(f"boundary degree {k} out of range 1..{self.max_dim}")
        rows = self.cells_of_dim(k - 1)
        cols = self.cells_of_dim(k)
        row_pos = {r: i for i, r in enumerate(rows)}
        data = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for j, c in enumerate(cols):
            for f in self[c].faces:
                data[row_pos[f], j] = 1
        return GF2Matrix(data, tuple(rows), tuple(cols))

    # -- serialisation -----------------------------------------------------

    def maximal_cells(self) -> list[str]:
        return [c for c in self._cells if not self._cofaces[c]]

    def to_text(self) -> str:
        """Fixture text that parses back to this complex."""
        lines = []
        if self.mode == "simplicial":
            for cid in self.maximal_cells():
                lines.append("simplex " + " ".join(str(v) for v in self.vertices(cid)))
        else:
            for cid, c in self._cells.items():
                if c.dim == 0:
                    lines.append(f"cell {cid} 0")
                else:
                    lines.append(f"cell {cid} {c.dim} faces: " + " ".join(sorted(c.faces)))
        return "\n".join(lines) + ("\n" if lines else "")


def simplicial_cells(simplices: Iterable[Iterable[int]]) -> dict[str, Cell]:
    """Close a family of vertex sets under taking faces."""
    out: dict[str, Cell] = {}
    stack = [tuple(sorted(set(int(v) for v in s))) for s in simplices]
    while stack:
        vs = stack.pop()
        cid = simplex_id(vs)
        if cid in out or not vs:
            continue
        facets = [tuple(f) for f in combinations(vs, len(vs) - 1)] if len(vs) > 1 else []
        out[cid] = Cell(cid, len(vs) - 1, frozenset(simplex_id(f) for f in facets), vs)
        stack.extend(facets)
    return out


def from_simplices(simplices: Iterable[Iterable[int]]) -> CellComplex:
    return CellComplex(simplicial_cells(simplices), mode="simplicial")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_complex(text: str) -> CellComplex:
    """Parse fixture text into a validated complex (``match`` lines ignored)."""
    simplices: list[tuple[int, ...]] = []
    explicit: dict[str, tuple[int, int, list[str]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        if kw == "simplex":
            if len(tok) < 2:
                raise FixtureSyntaxError(lineno, "simplex needs at least one vertex")
            try:
                vs = [int(t) for t in tok[1:]]
            except ValueError:
                raise FixtureSyntaxError(lineno, "simplex vertices must be integers") from None
            if any(v < 0 for v in vs):
                raise FixtureSyntaxError(lineno, "simplex vertices must be non-negative")
            if len(set(vs)) != len(vs):
                raise FixtureSyntaxError(lineno, "repeated vertex in simplex")
            simplices.append(tuple(vs))
        elif kw == "cell":
            if len(tok) < 3:
                raise FixtureSyntaxError(lineno, "expected: cell <name> <dim> faces: <id> ...")
            name = tok[1]
            try:
                dim = int(tok[2])
            except ValueError:
                raise FixtureSyntaxError(lineno, f"bad dimension {tok[2]!r}") from None
            rest = tok[3:]
            if rest and rest[0] != "faces:":
                raise FixtureSyntaxError(lineno, "expected 'faces:' after the dimension")
            faces = rest[1:]
            if dim > 0 and not faces:
                raise FixtureSyntaxError(lineno, f"{dim}-cell {name!r} needs a face list")
            if len(set(faces)) != len(faces):
                raise FixtureSyntaxError(lineno, f"repeated face in {name!r}")
            if name in explicit:
                raise DuplicateCell(f"line {lineno}: cell {name!r} declared twice")
            explicit[name] = (lineno, dim, faces)
        elif kw == "match":
            if len(tok) != 3:
                raise FixtureSyntaxError(lineno, "expected: match <tail-id> <head-id>")
        else:
            raise FixtureSyntaxError(lineno, f"unknown keyword {kw!r}")

    cells = simplicial_cells(simplices)
    for name, (lineno, dim, faces) in explicit.items():
        if name in cells:
            raise DuplicateCell(f"line {lineno}: cell {name!r} collides with a simplex id")
        cells[name] = Cell(name, dim, frozenset(faces))
    mode = "cw" if explicit else "simplicial"
    return CellComplex(cells, mode=mode)
