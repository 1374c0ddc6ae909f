"""
Dense linear algebra over GF(2) and the cellular homology oracle.

Matrices are small (desk-scale complexes), so they are stored as dense
``uint8`` arrays and reduced with XOR row operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from .cell_complex import CellComplex


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GF2Matrix:
    """Binary matrix with labelled rows and columns.

    ``data[i, j]`` is the coefficient of row ``i`` in the image of column
    ``j``, so a boundary matrix maps column chains to row chains.
    """

    data: np.ndarray
    row_labels: tuple[str, ...] = field(default=())
    col_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.uint8) & 1
        if data.ndim != 2:
            raise ShapeMismatch(f"expected a 2-d array, got shape {data.shape}")
        rows, cols = data.shape
        row_labels = tuple(self.row_labels) or tuple(str(i) for i in range(rows))
        col_labels = tuple(self.col_labels) or tuple(str(j) for j in range(cols))
        if len(row_labels) != rows or len(col_labels) != cols:
            raise ShapeMismatch(
                f"{len(row_labels)}x{len(col_labels)} labels for a {rows}x{cols} matrix"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "row_labels", row_labels)
        object.__setattr__(self, "col_labels", col_labels)

    @classmethod
    def zeros(cls, row_labels: Sequence[str], col_labels: Sequence[str]) -> "GF2Matrix":
        data = np.zeros((len(row_labels), len(col_labels)), dtype=np.uint8)
        return cls(data, tuple(row_labels), tuple(col_labels))

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def entry(self, row: str, col: str) -> int:
        return int(self.data[self.row_labels.index(row), self.col_labels.index(col)])

    def column(self, col: str) -> dict[str, int]:
        """Nonzero entries of one column as ``{row_label: 1}``."""
        j = self.col_labels.index(col)
        return {self.row_labels[i]: 1 for i in np.nonzero(self.data[:, j])[0]}

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot compose {self.shape} with {other.shape}")
        prod = (self.data.astype(np.int64) @ other.data.astype(np.int64)) & 1
        return GF2Matrix(prod.astype(np.uint8), self.row_labels, other.col_labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.row_labels, self.col_labels, self.data.tobytes()))


def row_echelon_gf2(m) -> tuple[np.ndarray, list[int]]:
    """Reduce a binary matrix to reduced row-echelon form over GF(2).

    Pivots are taken as the first nonzero row in column order, which keeps
    intermediate results reproducible.

    Returns:
        (R, pivot_cols): the reduced matrix and the pivot column of each
        leading row.
    """
    a = np.array(m.data if isinstance(m, GF2Matrix) else m, dtype=np.uint8) & 1
    n_rows, n_cols = a.shape
    pivot_cols: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        hits = np.nonzero(a[:, c])[0]
        hits = hits[hits != r]
        a[hits] ^= a[r]
        pivot_cols.append(c)
        r += 1
    return a, pivot_cols


def rank_gf2(m) -> int:
    """Rank over GF(2). Accepts a ``GF2Matrix`` or any 2-d 0/1 array."""
    data = m.data if isinstance(m, GF2Matrix) else np.asarray(m)
    if data.size == 0:
        return 0
    return len(row_echelon_gf2(data)[1])


def compose_is_zero(a: GF2Matrix, b: GF2Matrix) -> bool:
    """True iff ``a @ b`` vanishes over GF(2)."""
    return not (a @ b).data.any()


def betti_from_boundaries(dims: Sequence[int], boundaries: dict[int, GF2Matrix]) -> list[int]:
    """Betti numbers of a chain complex with chain-group sizes ``dims``.

    ``boundaries[k]`` maps degree ``k`` to degree ``k - 1``; missing degrees
    are treated as zero maps.
    """
    ranks = {k: rank_gf2(m) for k, m in boundaries.items()}
    return [dims[k] - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(len(dims))]


def betti_cellular(cx: "CellComplex") -> list[int]:
    """Cellular Betti numbers over GF(2); ``[]`` for the empty complex."""
    if cx.max_dim < 0:
        return []
    dims = [len(cx.cells_of_dim(k)) for k in range(cx.max_dim + 1)]
    bd = {k: cx.boundary_matrix(k) for k in range(1, cx.max_dim + 1)}
    return betti_from_boundaries(dims, bd)
