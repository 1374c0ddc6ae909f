import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvfloer.cell_complex import from_simplices, parse_complex
from cvfloer.homology_z2 import (
    GF2Matrix,
    ShapeMismatch,
    betti_cellular,
    compose_is_zero,
    rank_gf2,
    row_echelon_gf2,
)


def _labels(n, p):
    return tuple(f"{p}{i}" for i in range(n))


def test_small_ranks(field):
    assert rank_gf2(GF2Matrix.identity(3)) == 3
    assert rank_gf2(GF2Matrix.zeros(_labels(3, "r"), _labels(4, "c"))) == 0
    assert rank_gf2(field("tet").complex.boundary_matrix(1)) == 3


def test_rank_leaves_input_alone():
    m = np.array([[1, 1, 0], [1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    before = m.copy()
    assert rank_gf2(m) == 2
    assert np.array_equal(m, before)


def test_betti_cellular_examples(field):
    assert betti_cellular(field("tet").complex) == [1, 0, 1]
    assert betti_cellular(field("tor_a").complex) == [1, 2, 1]
    assert betti_cellular(field("klein").complex) == [1, 2, 1]
    assert betti_cellular(field("cube").complex) == [1, 0, 1]
    assert betti_cellular(parse_complex("simplex 0")) == [1]
    assert betti_cellular(parse_complex("")) == []


def test_compose_is_zero(field):
    cx = field("tet").complex
    assert compose_is_zero(cx.boundary_matrix(1), cx.boundary_matrix(2))
    assert not compose_is_zero(GF2Matrix.identity(2), GF2Matrix.identity(2))
    with pytest.raises(ShapeMismatch):
        compose_is_zero(GF2Matrix.identity(2), GF2Matrix.identity(3))


matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=100, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_rank_permutation_invariance(rows, rnd):
    m = np.array(rows, dtype=np.uint8)
    r = rank_gf2(m)
    pr = list(range(m.shape[0]))
    pc = list(range(m.shape[1]))
    rnd.shuffle(pr)
    rnd.shuffle(pc)
    assert rank_gf2(m[pr][:, pc]) == r
    assert r <= min(m.shape)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_echelon_pivots_match_rank(rows):
    m = np.array(rows, dtype=np.uint8)
    ech, pivots = row_echelon_gf2(m)
    assert len(pivots) == rank_gf2(m)
    assert pivots == sorted(pivots)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=6))
def test_euler_characteristic(simplices):
    cx = from_simplices(simplices)
    b = betti_cellular(cx)
    cells = [len(cx.cells_of_dim(k)) for k in range(cx.max_dim + 1)]
    assert sum((-1) ** k * n for k, n in enumerate(cells)) == sum((-1) ** k * x for k, x in enumerate(b))


def test_euler_on_fixtures(field):
    for name in ("tet", "tor_a", "tor_b", "cube", "k4", "klein"):
        cx = field(name).complex
        cells = [len(cx.cells_of_dim(k)) for k in range(cx.max_dim + 1)]
        b = betti_cellular(cx)
        assert sum((-1) ** k * n for k, n in enumerate(cells)) == sum((-1) ** k * x for k, x in enumerate(b))
