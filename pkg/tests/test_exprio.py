import json
import random

import pytest
from conftest import elements, seeds
from hypothesis import given
from hypothesis import strategies as st

from superplucker.acceptance import fixture_plane, generic_plane
from superplucker.clusters import ClusterLabel, build_g2_51, make_cluster, values_from_plane
from superplucker.exprio import (
    ParseError,
    cluster_to_json,
    coords_to_json,
    matrix_to_json,
    multivector_to_json,
    parse_cluster_label,
    parse_cluster_state,
    parse_coords,
    parse_expr,
    parse_matrix,
    parse_multivector,
    parse_shape,
)
from superplucker.galgebra import GrassmannElement
from superplucker.grassmannian import random_plane
from superplucker.plucker_algebraic import wedge_rows
from superplucker.plucker_general import essential_coordinates
from superplucker.smatrix import ber


def test_fixture_value_parses_to_berezinian():
    M = parse_matrix({"row_parities": ["e", "o"], "col_parities": ["e", "o"], "entries": [["2", "t1"], ["t2", "3"]]})
    assert parse_expr("2/3 - 1/9*t1*t2", 2) == ber(M)


def test_simple_expressions():
    assert parse_expr("0") == 0
    assert parse_expr("t2*t1") == -parse_expr("t1*t2")
    assert str(parse_expr("t2*t1")) == "-t1*t2"
    assert parse_expr("-3/4 + t1", 3).n == 3
    assert parse_expr(" 5 ") == 5


@pytest.mark.parametrize(
    "text,pos",
    [("t1*t1", 3), ("2 + * t1", 4), ("t1*", 2), ("1/0", 0), ("2 t1 3", 5), ("", 0), ("t1 ? t2", 3), ("3 -", 3)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_expr(text)
    assert err.value.position == pos


def test_unknown_generator_in_context():
    with pytest.raises(ParseError, match="unknown generator t3"):
        parse_expr("t3", 2)


@given(elements())
def test_expression_roundtrip(x):
    assert parse_expr(str(x), x.n) == x


def test_fixture_matrix_document():
    doc = {
        "row_parities": ["e", "o"],
        "col_parities": ["e", "e", "o", "o"],
        "entries": [["2", "1", "t1", "0"], ["t2", "0", "3", "1"]],
    }
    assert parse_matrix(doc, strict=True) == fixture_plane()


def test_empty_matrix():
    M = parse_matrix({"row_parities": [], "col_parities": [], "entries": []})
    assert len(M.entries) == 0 and M.n == 0


def test_strict_parity_names_cell():
    doc = {"row_parities": ["e", "e"], "col_parities": ["e", "o"], "entries": [["1", "t1"], ["t2", "t1"]]}
    parse_matrix(doc)
    with pytest.raises(ParseError, match=r"\(1,0\)"):
        parse_matrix(doc, strict=True)


@pytest.mark.parametrize(
    "doc",
    [
        {"row_parities": ["e"], "col_parities": ["e"], "entries": [["1", "2"]]},
        {"row_parities": ["x"], "col_parities": ["e"], "entries": [["1"]]},
        {"row_parities": ["e"], "col_parities": ["e"], "entries": [["1 +"]]},
    ],
)
def test_bad_matrix_documents(doc):
    with pytest.raises(ParseError):
        parse_matrix(doc)


def test_entry_error_mentions_cell_once():
    with pytest.raises(ParseError) as err:
        parse_matrix({"row_parities": ["e"], "col_parities": ["e"], "entries": [["t1*t1"]]})
    assert str(err.value) == "entry (0,0): repeated generator t1 in one monomial at position 3"


@given(st.sampled_from([((1, 1), (2, 2)), ((2, 1), (3, 2)), ((0, 0), (1, 1))]), seeds)
def test_matrix_roundtrip(shapes, seed):
    U = random_plane(*shapes, 3, rng=random.Random(seed))
    doc = json.loads(json.dumps(matrix_to_json(U)))
    assert parse_matrix(doc) == U


@given(st.sampled_from([((2, 0), (3, 1)), ((3, 0), (4, 1))]), seeds)
def test_multivector_roundtrip(shapes, seed):
    T = wedge_rows(random_plane(*shapes, 3, rng=random.Random(seed)))
    assert parse_multivector(json.loads(json.dumps(multivector_to_json(T)))) == T


def test_bad_multivector_documents():
    with pytest.raises(ParseError):
        parse_multivector({"ambient": "2|1"})
    with pytest.raises(ParseError):
        parse_multivector({"degree": 2, "ambient": "2|1", "components": {"1;2": "1"}})


@given(st.sampled_from([((1, 1), (2, 2)), ((2, 1), (3, 2)), ((2, 0), (4, 1))]), seeds)
def test_coords_roundtrip(shapes, seed):
    c = essential_coordinates(random_plane(*shapes, 3, rng=random.Random(seed)))
    assert parse_coords(json.loads(json.dumps(coords_to_json(c)))) == c


def test_coords_key_validation():
    doc = coords_to_json(essential_coordinates(fixture_plane()))
    assert "1|1^" in doc["u"]
    bad = json.loads(json.dumps(doc))
    bad["u"]["2|1^,2^"] = "1"
    with pytest.raises(ParseError, match="not a canonical key"):
        parse_coords(bad)
    bad = json.loads(json.dumps(doc))
    del bad["ustar"]["1|1^"]
    with pytest.raises(ParseError, match="missing"):
        parse_coords(bad)


def test_cluster_state_roundtrip():
    graph = build_g2_51()
    label = parse_cluster_label("(T13, T14 | th1, th4)")
    assert label == ClusterLabel.make([(1, 3), (1, 4)], (1, 4))
    state = make_cluster(graph, label, values_from_plane(generic_plane(5)))
    doc = json.loads(json.dumps(cluster_to_json(state, "5_1")))
    assert doc["case"] == "5_1" and list(doc["values"])[0] == "T12"
    assert parse_cluster_state(doc, graph).same_values(state)
    with pytest.raises(ParseError):
        parse_cluster_label("T13 th1")


def test_shape_syntax():
    assert tuple(parse_shape("2|1")) == (2, 1)
    with pytest.raises(ParseError):
        parse_shape("2,1")


def test_odd_element_text():
    x = GrassmannElement.generator(1, 2) * 3
    assert str(x) == "3*t1"
