import itertools
import random

import pytest
from conftest import seeds
from hypothesis import given
from hypothesis import strategies as st

from superplucker.acceptance import fixture_plane
from superplucker.grassmannian import (
    ChartError,
    ChartIndex,
    admissible_charts,
    chart_block,
    change_chart,
    charts,
    dimension,
    free_coordinate_count,
    has_full_rank,
    is_admissible,
    normalize_to_chart,
    pi_dual,
    random_gl,
    random_plane,
)
from superplucker.smatrix import SuperShape, ber, identity, inverse_matrix

planes = st.sampled_from([((2, 1), (4, 2)), ((1, 1), (2, 2)), ((2, 0), (4, 1)), ((1, 2), (3, 3)), ((0, 2), (2, 3))])


def test_chart_syntax():
    c = ChartIndex.parse("1,3|2")
    assert c == ChartIndex((1, 3), (2,)) and str(c) == "1,3|2"
    assert ChartIndex.parse("|1") == ChartIndex((), (1,))
    for bad in ("1,3", "3,1|", "1,1|2", "a|1"):
        with pytest.raises(ValueError):
            ChartIndex.parse(bad)


def test_fixture_is_already_normalized():
    U = fixture_plane()
    assert normalize_to_chart(U, ChartIndex.parse("2|2")) == U


def test_normalize_is_idempotent_and_has_identity_block():
    rng = random.Random(1)
    U = random_plane((2, 1), (4, 2), 4, rng=rng)
    for c in admissible_charts(U):
        W = normalize_to_chart(U, c)
        assert chart_block(W, c) == identity((2, 1), 4)
        assert normalize_to_chart(W, c) == W


def test_inadmissible_chart_rejected():
    # first column has nilpotent entries only
    from superplucker.exprio import parse_matrix

    U = parse_matrix({"row_parities": ["e"], "col_parities": ["e", "e", "o"], "entries": [["t1*t2", "1", "t1"]]})
    assert not is_admissible(U, ChartIndex.parse("1|"))
    with pytest.raises(ChartError):
        normalize_to_chart(U, ChartIndex.parse("1|"))
    assert admissible_charts(U) == [ChartIndex.parse("2|")]


def test_change_to_same_chart_is_identity():
    U = random_plane((2, 1), (4, 2), 3, seed=5, chart=ChartIndex.parse("1,2|1"))
    assert change_chart(U, ChartIndex.parse("1,2|1")) == U


def test_change_between_even_charts_divides_by_block():
    n = 5
    U = random_plane((2, 0), (n, 1), 3, seed=7, chart=ChartIndex((n - 1, n), ()))
    c12 = ChartIndex((1, 2), ())
    if is_admissible(U, c12):
        assert change_chart(U, c12) == inverse_matrix(chart_block(U, c12)) @ U


@given(planes, seeds)
def test_chart_roundtrip(shapes, seed):
    shape, amb = shapes
    rng = random.Random(seed)
    b = next(iter(charts(shape, amb)))
    U = random_plane(shape, amb, 3, rng=rng, chart=b)
    for c in admissible_charts(U):
        assert change_chart(change_chart(U, c), b) == U


def test_pi_dual_swaps_blocks():
    U = fixture_plane()
    D = pi_dual(U)
    assert D.row_shape == SuperShape(1, 1) and D.col_shape == SuperShape(2, 2)
    assert D.entries == ((U[1, 2], U[1, 3], U[1, 0], U[1, 1]), (U[0, 2], U[0, 3], U[0, 0], U[0, 1]))
    assert pi_dual(D) == U


@given(planes, seeds)
def test_pi_dual_involution_and_rank(shapes, seed):
    U = random_plane(*shapes, 3, rng=random.Random(seed))
    assert pi_dual(pi_dual(U)) == U
    assert has_full_rank(pi_dual(U)) == has_full_rank(U)


def test_random_plane_edge_shapes():
    E0 = random_plane((0, 0), (0, 0), 2, seed=1)
    assert E0.entries == ()
    sq = random_plane((2, 1), (2, 1), 2, seed=1)
    assert ber(sq).is_invertible()


@given(planes, seeds)
def test_random_plane_normalizes_in_its_chart(shapes, seed):
    rng = random.Random(seed)
    shape, amb = shapes
    c = list(charts(shape, amb))[seed % len(list(charts(shape, amb)))]
    U = random_plane(shape, amb, 3, rng=rng, chart=c)
    assert normalize_to_chart(U, c) == U


def test_dimension_examples():
    assert dimension((1, 1), (2, 2)) == SuperShape(2, 2)
    for n, m in itertools.product(range(2, 6), range(0, 4)):
        assert dimension((2, 0), (n, m)) == SuperShape(2 * (n - 2), 2 * m)
    for n, m in itertools.product(range(1, 5), range(1, 4)):
        assert dimension((1, 1), (n, m)) == SuperShape(n + m - 2, n + m - 2)
    assert dimension((3, 2), (3, 2)) == SuperShape(0, 0)
    with pytest.raises(ValueError):
        dimension((3, 0), (2, 1))


@given(planes, seeds)
def test_free_coordinates_match_dimension(shapes, seed):
    shape, amb = shapes
    U = random_plane(shape, amb, 2, rng=random.Random(seed))
    for c in admissible_charts(U):
        assert free_coordinate_count(normalize_to_chart(U, c), c) == dimension(shape, amb)


@given(planes, seeds)
def test_normalization_is_gl_invariant(shapes, seed):
    rng = random.Random(seed)
    shape, amb = shapes
    U = random_plane(shape, amb, 3, rng=rng)
    g = random_gl(shape, 3, rng=rng)
    for c in admissible_charts(U):
        assert normalize_to_chart(g @ U, c) == normalize_to_chart(U, c)


@given(planes, seeds)
def test_pi_dual_commutes_with_normalization(shapes, seed):
    U = random_plane(*shapes, 3, rng=random.Random(seed))
    for c in admissible_charts(U):
        swapped = ChartIndex(c.odd, c.even)
        assert normalize_to_chart(pi_dual(U), swapped) == pi_dual(normalize_to_chart(U, c))
