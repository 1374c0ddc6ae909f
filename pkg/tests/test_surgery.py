import itertools

import numpy as np
import pytest

from cvfloer.cell_complex import parse_complex
from cvfloer.dynamics import closed_orbits, find_orbit
from cvfloer.floer import rest_to_rest_count
from cvfloer.homology_z2 import betti_cellular
from cvfloer.surgery import (
    ChainMapMismatch,
    IllegalSplitPosition,
    NotAnOrbitCell,
    admissible_taus,
    is_gradient,
    morse_boundary,
    morse_inequalities,
    replace_all_orbits,
    replace_orbit,
    surgery_census,
    verify_chain_map,
)
from cvfloer.vector_field import parse_field, rest_counts, validate_field

from conftest import random_fields

FIXTURES = ("tet", "tor_a", "tor_b", "cube", "k4", "klein")


def test_tet_split_by_hand(field):
    v = field("tet")
    o0 = closed_orbits(v)[0]
    v2, rec = replace_orbit(v, o0, "1.2")
    assert rec.position == 1 and (rec.q_down, rec.q_up) == ("0", "1.2")
    assert v2("1") == "0.1" and v2("2") == "0.2" and v2("0") is None
    assert v2.is_rest("0") and v2.is_rest("1.2")
    assert validate_field(v2).valid


def test_default_split_is_smallest_admissible(field):
    v = field("tet")
    o0 = closed_orbits(v)[0]
    _, rec = replace_orbit(v, o0)
    assert rec.q_up == v.complex.sorted(admissible_taus(o0))[0]


def test_split_errors(field):
    v = field("tet")
    o0 = closed_orbits(v)[0]
    with pytest.raises(IllegalSplitPosition):
        replace_orbit(v, o0, o0.taus[-1])
    with pytest.raises(IllegalSplitPosition):
        replace_orbit(v, o0, "1")
    with pytest.raises(NotAnOrbitCell):
        replace_orbit(v, o0, "0.3")


def test_tet_census(field):
    v = field("tet")
    v2, recs = replace_all_orbits(v)
    cen = surgery_census(v, recs)
    assert cen["c"] == [1, 0, 1] and cen["A"] == [1, 1, 0]
    assert rest_counts(v2) == cen["predicted"] == [2, 2, 2]


def test_gradient_input_is_identity(field):
    v2, _ = replace_all_orbits(field("tet"))
    v3, recs = replace_all_orbits(v2)
    assert recs == [] and v3 == v2


def test_is_gradient(field):
    assert not is_gradient(field("tet"))
    assert is_gradient(replace_all_orbits(field("tet"))[0])
    assert is_gradient(parse_field(parse_complex("simplex 0 1 2"), ""))
    assert not is_gradient(field("cube"))


@pytest.mark.parametrize("name", FIXTURES)
def test_surgery_properties(field, name):
    v = field(name)
    orbits = closed_orbits(v)
    v2, recs = replace_all_orbits(v)
    assert is_gradient(v2)
    assert rest_counts(v2) == surgery_census(v, recs)["predicted"]
    for r in recs:
        assert r.orbit.twisted or rest_to_rest_count(v2, r.q_up, r.q_down) == 0
    outside = {c for c in v.complex} - {c for o in orbits for c in o.cells}
    assert {a: b for a, b in v.pairs.items() if a in outside} == {
        a: b for a, b in v2.pairs.items() if a in outside
    }


@pytest.mark.parametrize("name", FIXTURES)
def test_split_choice_independence(field, name):
    v = field(name)
    orbits = closed_orbits(v)
    bettis = set()
    for combo in itertools.product(*(admissible_taus(o) for o in orbits)):
        v2, _ = replace_all_orbits(v, {o.name: t for o, t in zip(orbits, combo)})
        bettis.add(tuple(morse_boundary(v2).betti()))
    assert bettis == {tuple(betti_cellular(v.complex))}


@pytest.mark.parametrize("name", ("tet", "tor_a", "cube", "klein"))
def test_orbit_order_independence(field, name):
    v = field(name)
    names = [o.name for o in closed_orbits(v)]
    results = set()
    for order in itertools.permutations(names):
        cur = v
        for n in order:
            cur, _ = replace_orbit(cur, find_orbit(closed_orbits(cur), n))
        results.add(tuple(cur.pairs.items()))
    assert len(results) == 1


def test_klein_surgery_homology(field):
    v2, recs = replace_all_orbits(field("klein"))
    assert any(r.orbit.twisted for r in recs)
    assert morse_boundary(v2).betti() == [1, 2, 1]


def test_all_critical_morse_is_cellular():
    cx = parse_complex("simplex 0 1 2\nsimplex 2 3")
    mc = morse_boundary(parse_field(cx, ""))
    for k in range(1, cx.max_dim + 1):
        assert np.array_equal(mc.boundaries[k].data, cx.boundary_matrix(k).data)
    assert mc.betti() == betti_cellular(cx)


def test_post_surgery_tet_betti(field):
    assert morse_boundary(replace_all_orbits(field("tet"))[0]).betti() == [1, 0, 1]


@pytest.mark.parametrize("name", ("tet", "tor_a", "cube"))
def test_chain_map(field, name):
    rep = verify_chain_map(field(name))
    assert rep.ok, rep.to_dict()
    mc = morse_boundary(replace_all_orbits(field(name))[0])
    assert sorted(rep.phi.values()) == sorted(g.label for gens in mc.generators.values() for g in gens)
    assert all(n == 2 for n in rep.two_paths.values())


def test_tor_a_parity_preserved(field):
    v = field("tor_a")
    assert verify_chain_map(v).ok
    v2, recs = replace_all_orbits(v)
    up = {r.orbit.index: r.q_up for r in recs}
    assert rest_to_rest_count(v2, up[1], up[0]) == 0


def test_k4_chain_map_mismatch_is_reported(field):
    with pytest.raises(ChainMapMismatch):
        verify_chain_map(field("k4"))
    rep = verify_chain_map(field("k4"), strict=False)
    assert all(x["value"] == 0 for x in rep.vanishing)


def test_morse_inequalities_examples(field):
    rep = morse_inequalities(field("tet"))
    assert rep.lhs[0] == 2 and rep.rhs[0] == 1
    rep = morse_inequalities(field("tor_b"))
    assert rep.lhs[1] == 2 and rep.rhs[1] == 1
    assert morse_inequalities(parse_field(parse_complex(""), "")).ok


def test_random_surgery_properties():
    for cx, v in random_fields(41, 200):
        orbits = closed_orbits(v)
        v2, recs = replace_all_orbits(v)
        assert is_gradient(v2) and validate_field(v2).valid
        if len(recs) == len(orbits):
            assert rest_counts(v2) == surgery_census(v, recs)["predicted"]
        assert morse_boundary(v2).betti() == betti_cellular(cx)
        assert morse_inequalities(v).ok
