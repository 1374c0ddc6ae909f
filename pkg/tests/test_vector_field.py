import pytest

from cvfloer.cell_complex import UnknownCell, parse_complex
from cvfloer.vector_field import (
    DIMENSION,
    FACE,
    HEAD_NOT_TAIL,
    SINGLE_PREIMAGE,
    DuplicateTail,
    parse_field,
    rest_points,
    validate_field,
)

from conftest import random_fields

TRI = parse_complex("simplex 0 1 2")


def test_single_match():
    v = parse_field(TRI, "match 0 0.1")
    assert v("0") == "0.1" and v.tail("0.1") == "0"
    assert v.classify("0") == "tail" and v.classify("0.1") == "head" and v.classify("2") == "rest"


def test_everywhere_zero_field():
    v = parse_field(TRI, "")
    assert all(v.is_rest(c) for c in TRI)
    assert rest_points(v, 1) == ["0.1", "0.2", "1.2"]


def test_tet_field(field):
    v = field("tet")
    assert len(v.pairs) == 6
    assert len(v.rest_cells()) == 2
    assert validate_field(v).valid
    assert rest_points(v, 0) == ["3"] and rest_points(v, 2) == ["0.1.2"]


def test_tor_b_rest_counts(field):
    v = field("tor_b")
    assert [len(rest_points(v, k)) for k in range(3)] == [1, 2, 1]


def test_two_tails_one_head():
    rep = validate_field(parse_field(TRI, "match 0 0.1\nmatch 1 0.1"))
    assert rep.clauses() == {SINGLE_PREIMAGE}
    assert rep.violations[0].cells == ("0", "1", "0.1")


def test_head_matched_again():
    rep = validate_field(parse_field(TRI, "match 0 0.1\nmatch 0.1 0.1.2"))
    assert HEAD_NOT_TAIL in rep.clauses()


def test_dimension_and_face_clauses():
    cx = parse_complex("simplex 0 1 2\nsimplex 3 4")
    rep = validate_field(parse_field(cx, "match 0 0.1.2\nmatch 3 0.1"))
    assert rep.clauses() == {DIMENSION, FACE}


def test_parse_errors():
    with pytest.raises(UnknownCell):
        parse_field(TRI, "match 0 0.3")
    with pytest.raises(DuplicateTail) as err:
        parse_field(TRI, "match 0 0.1\nmatch 0 0.2")
    assert err.value.cell == "0" and err.value.heads == ("0.1", "0.2")


def test_report_json_shape():
    d = validate_field(parse_field(TRI, "match 0 0.1\nmatch 1 0.1")).to_dict()
    assert d == {"valid": False, "violations": [{"clause": SINGLE_PREIMAGE, "cells": ["0", "1", "0.1"]}]}


def test_random_fields_partition_and_matching():
    for cx, v in random_fields(11, 150):
        rep = validate_field(v)
        assert rep.valid
        assert validate_field(v) == rep
        assert len(cx) == len(v.rest_cells()) + 2 * len(v.pairs)
        heads = list(v.pairs.values())
        assert len(set(heads)) == len(heads)
        for a, b in v.pairs.items():
            assert a in cx.faces(b)
            assert sum(c in (a, b) for c in cx) == 2
            assert [v.classify(a), v.classify(b)] == ["tail", "head"]
