import itertools
import random
from fractions import Fraction

import pytest
from conftest import elements, seeds
from hypothesis import given
from hypothesis import strategies as st

from superplucker.acceptance import fixture_plane
from superplucker.galgebra import EVEN, ODD, GrassmannElement, one, zero
from superplucker.grassmannian import random_gl, random_matrix
from superplucker.plucker_algebraic import E, O
from superplucker.plucker_general import CovectorArray
from superplucker.smatrix import (
    BerezinianUndefined,
    SuperMatrix,
    ber,
    ber_ghost,
    ber_star,
    block_form,
    identity,
    inverse_matrix,
    matmul,
    parity_reverse,
    schur_forms,
    super_cramer_solve,
)

N = 2
t1, t2 = GrassmannElement.generator(1, N), GrassmannElement.generator(2, N)


def s(v, n=N):
    return GrassmannElement.scalar(v, n)


def m11(a, b, c, d, n=N):
    return SuperMatrix([EVEN, ODD], [EVEN, ODD], [[a, b], [c, d]], n)


FIX = m11(s(2), t1, t2, s(3))
shapes = st.sampled_from([(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 1)])


def leibniz_det(M):
    """Permutation expansion, for commuting (even) entries."""
    k = len(M)
    total = zero(N if not k else M[0][0].n)
    for perm in itertools.permutations(range(k)):
        sign = (-1) ** sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = one(total.n) * sign
        for i, j in enumerate(perm):
            term = term * M[i][j]
        total = total + term
    return total


def test_identity_is_left_neutral():
    B = random_matrix(random.Random(0), [EVEN, ODD], [EVEN, EVEN, ODD], 3)
    assert matmul(identity((1, 1), 3), B) == B


def test_plane_times_basis_covectors():
    U = fixture_plane()
    P = CovectorArray.basis(U.cols, (E(1),), (O(1),), 2).P
    assert (U @ P).entries == ((s(2), t1), (t2, s(3)))


@given(seeds)
def test_matmul_associative(seed):
    rng = random.Random(seed)
    par = [EVEN, EVEN, ODD]
    A, B, C = (random_matrix(rng, par, par, 4) for _ in range(3))
    assert (A @ B) @ C == A @ (B @ C)


def test_ber_of_identity():
    for shape in [(0, 0), (2, 0), (0, 2), (2, 3)]:
        assert ber(identity(shape, 2)) == 1


def test_ber_fixture_both_schur_forms():
    a, b, c, d = s(2), t1, t2, s(3)
    first = (a - b * d.inverse() * c) / d
    second = a / (d - c * a.inverse() * b)
    assert first == second == s(Fraction(2, 3)) - t1 * t2 * Fraction(1, 9)
    assert ber(FIX, cross_check=True) == first
    assert schur_forms(FIX) == (first, second)


def test_ber_star_fixture():
    x, xi, eta, y = s(2), t1, t2, s(3)
    assert ber_star(m11(x, xi, eta, y)) == (y - eta * x.inverse() * xi) / x
    assert ber_star(identity((1, 1), N)) == 1


def test_parity_reverse_block_swap():
    x, xi, eta, y = s(2), t1, t2, s(3)
    R = block_form(parity_reverse(m11(x, xi, eta, y)))
    assert R.entries == ((y, eta), (xi, x))
    assert parity_reverse(parity_reverse(FIX)) == FIX
    assert ber(parity_reverse(FIX)) == ber_star(FIX)


def test_undefined_when_no_diagonal_block_invertible():
    with pytest.raises(BerezinianUndefined):
        ber(m11(t1 * t2, t1, t2, t1 * t2))


def test_ghost_column_duplicating_a_column_gives_zero():
    U = fixture_plane()
    P = CovectorArray.basis(U.cols, (O(1),), (O(1),), 2)
    assert ber_ghost(U @ P.P, 0) == 0


def test_ghost_column_values():
    xi, y = t1, s(3)
    assert ber_ghost(m11(xi, zero(N), y, one(N)), 0) == xi
    assert ber_ghost(m11(zero(N), xi, one(N), y), 0) == -xi / (y * y)


def test_inverse_of_identity_and_fixture():
    assert inverse_matrix(identity((2, 1), 2)) == identity((2, 1), 2)
    assert FIX @ inverse_matrix(FIX) == identity((1, 1), N)
    assert inverse_matrix(FIX) @ FIX == identity((1, 1), N)


def test_cramer_with_identity():
    b = [t1 * t2 + 1, t2]
    assert super_cramer_solve(identity((1, 1), N), b) == b


@given(seeds)
def test_cramer_matches_inverse_on_1_1(seed):
    rng = random.Random(seed)
    A = random_gl((1, 1), 4, rng=rng)
    b = [GrassmannElement.scalar(rng.randint(-3, 3), 4), GrassmannElement.generator(rng.randint(1, 4), 4)]
    c = super_cramer_solve(A, b)
    Ainv = inverse_matrix(A)
    assert c == [sum((Ainv[i, j] * b[j] for j in range(2)), zero(4)) for i in range(2)]


@given(seeds)
def test_cramer_substitution_on_2_1_odd_rhs(seed):
    rng = random.Random(seed)
    A = random_gl((2, 1), 4, rng=rng)
    g = lambda: GrassmannElement.generator(rng.randint(1, 4), 4)  # noqa: E731
    b = [g(), g(), GrassmannElement.scalar(rng.randint(-2, 2), 4)]
    c = super_cramer_solve(A, b)
    assert [sum((A[i, j] * c[j] for j in range(3)), zero(4)) for i in range(3)] == b


@given(shapes, seeds)
def test_ber_multiplicative(shape, seed):
    rng = random.Random(seed)
    A, B = random_gl(shape, 5, rng=rng), random_gl(shape, 5, rng=rng)
    assert ber(A @ B, cross_check=True) == ber(A) * ber(B)


@given(shapes, seeds)
def test_ber_of_parity_reverse_is_reciprocal(shape, seed):
    A = random_gl(shape, 5, rng=random.Random(seed))
    assert ber(parity_reverse(A)) == ber(A).inverse()
    assert ber(A) * ber_star(A) == 1


@given(shapes, seeds)
def test_schur_forms_agree(shape, seed):
    first, second = schur_forms(random_gl(shape, 5, rng=random.Random(seed)))
    if first is not None and second is not None:
        assert first == second


@given(shapes, seeds)
def test_inverse_of_product(shape, seed):
    rng = random.Random(seed)
    A, B = random_gl(shape, 4, rng=rng), random_gl(shape, 4, rng=rng)
    assert inverse_matrix(A @ B) == inverse_matrix(B) @ inverse_matrix(A)


@given(st.integers(1, 3), seeds)
def test_even_shape_ber_is_det(k, seed):
    A = random_gl((k, 0), 4, rng=random.Random(seed))
    assert ber(A) == leibniz_det(A.entries)
    B = random_gl((0, k), 4, rng=random.Random(seed))
    assert ber(B) == leibniz_det(B.entries).inverse()


def _ghost_setup(seed):
    rng = random.Random(seed)
    n = 5
    A = random_gl((1, 1), n, rng=rng)
    col = [GrassmannElement.generator(rng.randint(1, n), n), GrassmannElement.scalar(rng.randint(1, 3), n)]
    return A.with_column(0, col), col, n


@given(seeds, elements(n=5, parity=EVEN), elements(n=5, parity=ODD))
def test_ghost_column_linear(seed, lam_even, lam_odd):
    g, col, n = _ghost_setup(seed)
    base = ber_ghost(g, 0)
    # even scalars pass through on either side
    assert ber_ghost(g.with_column(0, [lam_even * x for x in col]), 0) == lam_even * base
    # odd scalars: homogeneous when written on the right of the column
    assert ber_ghost(g.with_column(0, [x * lam_odd for x in col]), 0) == base * lam_odd
    other = [GrassmannElement.generator(1, n), GrassmannElement.scalar(2, n)]
    summed = ber_ghost(g.with_column(0, [x + y for x, y in zip(col, other)]), 0)
    assert summed == base + ber_ghost(g.with_column(0, other), 0)
