"""Supermatrices over the Grassmann algebra, Berezinians and the super Cramer rule."""
from __future__ import annotations

from typing import NamedTuple

from .galgebra import (
    EVEN,
    ODD,
    GrassmannElement,
    NotInvertible,
    aux_generator,
    dot,
    one,
    strip_aux_right,
    zero,
)


class BerezinianUndefined(ArithmeticError):
    pass


class SuperShape(NamedTuple):
    even: int
    odd: int

    def __str__(self):
        return f"{self.even}|{self.odd}"

    @classmethod
    def parse(cls, text: str) -> SuperShape:
        a, _, b = text.partition("|")
        if not _ or not a.strip().isdigit() or not b.strip().isdigit():
            raise ValueError(f"bad shape {text!r}, expected 'r|s'")
        return cls(int(a), int(b))

    @property
    def parities(self) -> tuple[int, ...]:
        return (EVEN,) * self.even + (ODD,) * self.odd


class SuperMatrix:
    """Matrix with parity-labelled rows and columns; immutable."""

    __slots__ = ("rows", "cols", "entries", "n")

    def __init__(self, rows, cols, entries, n: int):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self.entries = tuple(tuple(r) for r in entries)
        self.n = n
        if len(self.entries) != len(self.rows):
            raise ValueError("row count does not match row parities")
        for r in self.entries:
            if len(r) != len(self.cols):
                raise ValueError("column count does not match column parities")

    @classmethod
    def from_blocks(cls, row_shape, col_shape, entries, n: int) -> SuperMatrix:
        return cls(SuperShape(*row_shape).parities, SuperShape(*col_shape).parities, entries, n)

    @property
    def row_shape(self) -> SuperShape:
        return SuperShape(self.rows.count(EVEN), self.rows.count(ODD))

    @property
    def col_shape(self) -> SuperShape:
        return SuperShape(self.cols.count(EVEN), self.cols.count(ODD))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list[GrassmannElement]:
        return [r[j] for r in self.entries]

    def with_column(self, j: int, col, parity=None) -> SuperMatrix:
        cols = list(self.cols)
        if parity is not None:
            cols[j] = parity
        entries = [list(r) for r in self.entries]
        for i, x in enumerate(col):
            entries[i][j] = x
        return SuperMatrix(self.rows, cols, entries, self.n)

    def select_columns(self, idx) -> SuperMatrix:
        idx = list(idx)
        return SuperMatrix(
            self.rows, [self.cols[j] for j in idx], [[r[j] for j in idx] for r in self.entries], self.n
        )

    def positions(self, parity: int, axis: str = "cols") -> list[int]:
        labels = self.cols if axis == "cols" else self.rows
        return [i for i, p in enumerate(labels) if p == parity]

    def parity_violations(self) -> list[tuple[int, int]]:
        """Cells whose entry does not have parity row + column (zero fits anywhere)."""
        bad = []
        for i, r in enumerate(self.entries):
            for j, x in enumerate(r):
                if x.is_zero():
                    continue
                if x.parity() != (self.rows[i] + self.cols[j]) % 2:
                    bad.append((i, j))
        return bad

    def is_even(self) -> bool:
        return not self.parity_violations()

    def body(self) -> list[list]:
        return [[x.body for x in r] for r in self.entries]

    def __matmul__(self, other: SuperMatrix) -> SuperMatrix:
        return matmul(self, other)

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries, self.n) == (other.rows, other.cols, other.entries, other.n)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"SuperMatrix({self.row_shape}x{self.col_shape}: [{body}])"


def identity(shape, n: int) -> SuperMatrix:
    par = SuperShape(*shape).parities
    k = len(par)
    return SuperMatrix(par, par, [[one(n) if i == j else zero(n) for j in range(k)] for i in range(k)], n)


# plain list-of-lists helpers over the (noncommutative) Grassmann ring


def _mm(A, B, n, ncols=None):
    if ncols is None:
        ncols = len(B[0]) if B else 0
    if not A or not B:
        return [[zero(n)] * ncols for _ in A]
    return [[dot(n, [(a, B[k][j]) for k, a in enumerate(row)]) for j in range(ncols)] for row in A]


def _msub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _mneg(A):
    return [[-a for a in r] for r in A]


def _madd(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matmul(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    if A.cols != B.rows:
        raise ValueError(f"parity mismatch: {A.cols} vs {B.rows}")
    if A.n != B.n:
        raise ValueError("context mismatch")
    return SuperMatrix(A.rows, B.cols, _mm(A.entries, B.entries, A.n, len(B.cols)), A.n)


def gauss_jordan_inverse(M, n: int):
    """Inverse of a square matrix over the Grassmann ring; pivots need nonzero body."""
    k = len(M)
    A = [list(r) + [one(n) if i == j else zero(n) for j in range(k)] for i, r in enumerate(M)]
    for col in range(k):
        piv = None
        best = None
        for i in range(col, k):
            b = A[i][col].body
            if b and (best is None or abs(b) > best):
                piv, best = i, abs(b)
        if piv is None:
            raise NotInvertible("matrix body is singular")
        A[col], A[piv] = A[piv], A[col]
        pinv = A[col][col].inverse()
        A[col] = [pinv * x for x in A[col]]
        for i in range(k):
            if i != col and A[i][col].terms:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return [r[k:] for r in A]


def _det_expand(M, n):
    k = len(M)
    memo = {}

    full = (1 << k) - 1

    def rec(i, used):
        if i == k - 1:
            return M[i][(full ^ used).bit_length() - 1]
        if used in memo:
            return memo[used]
        acc = zero(n)
        free = 0
        for j in range(k):
            if used >> j & 1:
                continue
            x = M[i][j]
            if x.terms:
                sub = rec(i + 1, used | 1 << j)
                if sub.terms:
                    t = x * sub
                    acc = acc - t if free & 1 else acc + t
            free += 1
        memo[used] = acc
        return acc

    return rec(0, 0)


def _det_bareiss(M, n):
    k = len(M)
    A = [list(r) for r in M]
    sign = 1
    prev_inv = None
    for c in range(k - 1):
        piv = next((i for i in range(c, k) if A[i][c].body), None)
        if piv is None:
            return None
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        p = A[c][c]
        for i in range(c + 1, k):
            for j in range(c + 1, k):
                v = A[i][j] * p - A[i][c] * A[c][j]
                A[i][j] = v if prev_inv is None else v * prev_inv
        prev_inv = p.inverse()
    d = A[k - 1][k - 1]
    return d if sign > 0 else -d


def det(M, n: int) -> GrassmannElement:
    """Determinant of a square matrix of pairwise commuting (even) entries."""
    k = len(M)
    if k == 0:
        return one(n)
    if k <= 4:
        return _det_expand(M, n)
    d = _det_bareiss(M, n)
    return d if d is not None else _det_expand(M, n)


def det_col(M, n: int) -> GrassmannElement:
    """Column determinant: sum over permutations of sign * M[s1][0] * M[s2][1] * ... in column order."""
    from itertools import permutations

    k = len(M)
    acc = zero(n)
    for perm in permutations(range(k)):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        t = one(n)
        for col, row in enumerate(perm):
            t = t * M[row][col]
            if t.is_zero():
                break
        acc = acc - t if inv & 1 else acc + t
    return acc


def blocks(g: SuperMatrix):
    re, ro = g.positions(EVEN, "rows"), g.positions(ODD, "rows")
    ce, co = g.positions(EVEN), g.positions(ODD)
    E = g.entries

    def blk(rs, cs):
        return [[E[i][j] for j in cs] for i in rs]

    return blk(re, ce), blk(re, co), blk(ro, ce), blk(ro, co)


def _check_square(g: SuperMatrix):
    if g.row_shape != g.col_shape:
        raise ValueError(f"Berezinian needs a square shape, got {g.row_shape}x{g.col_shape}")


def inverse_and_det(M, n: int):
    """(inverse or None, determinant) of a matrix with commuting entries."""
    k = len(M)
    if k == 0:
        return [], one(n)
    if k > 3:
        d = det(M, n)
        if not d.body:
            return None, d
        return gauss_jordan_inverse(M, n), d
    if k == 1:
        d = M[0][0]
        return ([[d.inverse()]] if d.body else None), d
    if k == 2:
        (a, b), (c, e) = M
        d = a * e - b * c
        if not d.body:
            return None, d
        di = d.inverse()
        return [[e * di, -b * di], [-c * di, a * di]], d
    # 3x3 adjugate
    (a, b, c), (d_, e, f), (g, h, i) = M
    co = [
        [e * i - f * h, -(d_ * i - f * g), d_ * h - e * g],
        [-(b * i - c * h), a * i - c * g, -(a * h - b * g)],
        [b * f - c * e, -(a * f - c * d_), a * e - b * d_],
    ]
    d = a * co[0][0] + b * co[0][1] + c * co[0][2]
    if not d.body:
        return None, d
    di = d.inverse()
    return [[co[j][r] * di for j in range(3)] for r in range(3)], d


def _first_form(g00, g01, g10, g11, n):
    inv11, d11 = inverse_and_det(g11, n)
    if inv11 is None:
        return None
    return det(_msub(g00, _mm(_mm(g01, inv11, n, len(g11)), g10, n, len(g00))), n) * d11.inverse()


def _second_form(g00, g01, g10, g11, n):
    inv00, d00 = inverse_and_det(g00, n)
    if inv00 is None:
        return None
    schur = det(_msub(g11, _mm(_mm(g10, inv00, n, len(g00)), g01, n, len(g11))), n)
    if not schur.body:
        return None
    return d00 * schur.inverse()


def schur_forms(g: SuperMatrix):
    """Both Schur expressions of the Berezinian; None where the formula is undefined."""
    _check_square(g)
    blk = blocks(g)
    return _first_form(*blk, g.n), _second_form(*blk, g.n)


def ber(g: SuperMatrix, cross_check: bool = False) -> GrassmannElement:
    """Berezinian of an even square supermatrix.

    Uses det(g00 - g01 g11^-1 g10) / det g11 when g11 is invertible and
    det g00 / det(g11 - g10 g00^-1 g01) otherwise.  With cross_check both
    forms are evaluated when available and compared.
    """
    _check_square(g)
    blk = blocks(g)
    first = _first_form(*blk, g.n)
    if first is not None and not cross_check:
        return first
    second = _second_form(*blk, g.n)
    if first is not None and second is not None and first != second:
        raise AssertionError(f"Schur forms disagree: {first} vs {second}")
    if first is None and second is None:
        raise BerezinianUndefined("neither diagonal block is invertible")
    return first if first is not None else second


def parity_reverse(A: SuperMatrix) -> SuperMatrix:
    """A^Pi: same entries, every row and column label flipped."""
    return SuperMatrix([1 - p for p in A.rows], [1 - p for p in A.cols], A.entries, A.n)


def block_form(A: SuperMatrix) -> SuperMatrix:
    """Reorder rows and columns so that even ones come first (stable)."""
    ri = A.positions(EVEN, "rows") + A.positions(ODD, "rows")
    ci = A.positions(EVEN) + A.positions(ODD)
    return SuperMatrix(
        [A.rows[i] for i in ri], [A.cols[j] for j in ci], [[A.entries[i][j] for j in ci] for i in ri], A.n
    )


def ber_star(g: SuperMatrix, cross_check: bool = False) -> GrassmannElement:
    return ber(parity_reverse(g), cross_check)


def _split_column(g: SuperMatrix, j: int):
    """Split column j into its slot-parity part and its wrong-parity part."""
    proper, ghost = [], []
    for i, x in enumerate(g.column(j)):
        want = (g.rows[i] + g.cols[j]) % 2
        proper.append(x.part(want))
        ghost.append(x.part(1 - want))
    return proper, ghost


class GhostColumnSpec(NamedTuple):
    position: int


def ber_ghost(g: SuperMatrix, ghost) -> GrassmannElement:
    """Berezinian (even slot) or inverse Berezinian (odd slot) extended linearly in one column.

    The column at ghost.position may have any parity.  Its wrong-parity
    part v is handled by right homogeneity: the column v*tau, with tau an
    auxiliary odd generator, is of proper parity, and the value for v is
    read off from Ber(..., v*tau, ...) = Ber(..., v, ...)*tau.
    """
    pos = ghost.position if isinstance(ghost, GhostColumnSpec) else int(ghost)
    for j in range(len(g.cols)):
        if j != pos and any(not x.is_zero() for x in _split_column(g, j)[1]):
            raise ValueError("more than one ghost column")
    fn = ber if g.cols[pos] == EVEN else ber_star
    proper, wrong = _split_column(g, pos)
    total = zero(g.n)
    if any(not x.is_zero() for x in proper):
        total = total + fn(g.with_column(pos, proper))
    if any(not x.is_zero() for x in wrong):
        tau = aux_generator(g.n)
        scaled = fn(g.with_column(pos, [x * tau for x in wrong]))
        total = total + strip_aux_right(scaled)
    return total


def ber_with_column(g: SuperMatrix, j: int, col) -> GrassmannElement:
    """Ber (even slot j) or Ber* (odd slot j) of g with column j replaced by col."""
    return ber_ghost(g.with_column(j, col), j)


def inverse_matrix(A: SuperMatrix) -> SuperMatrix:
    """Inverse of an even invertible supermatrix by block (Schur) inversion."""
    _check_square(A)
    n = A.n
    a, b, c, d = blocks(A)
    try:
        dinv = gauss_jordan_inverse(d, n)
        r, k = len(a), len(d)
        s = _msub(a, _mm(_mm(b, dinv, n, k), c, n, r))
        sinv = gauss_jordan_inverse(s, n)
    except NotInvertible:
        raise NotInvertible("supermatrix is not invertible") from None
    top_right = _mneg(_mm(_mm(sinv, b, n, k), dinv, n, k))
    bottom_left = _mneg(_mm(_mm(dinv, c, n, r), sinv, n, r))
    bottom_right = _madd(dinv, _mm(_mm(_mm(dinv, c, n, r), sinv, n, r), _mm(b, dinv, n, k), n, k))
    # scatter the blocks back into the labelled positions (rows of the inverse follow A.cols)
    ce, co = A.positions(EVEN), A.positions(ODD)
    re, ro = A.positions(EVEN, "rows"), A.positions(ODD, "rows")
    size = len(A.rows)
    out = [[None] * size for _ in range(size)]
    for bi, i in enumerate(ce):
        for bj, j in enumerate(re):
            out[i][j] = sinv[bi][bj]
        for bj, j in enumerate(ro):
            out[i][j] = top_right[bi][bj]
    for bi, i in enumerate(co):
        for bj, j in enumerate(re):
            out[i][j] = bottom_left[bi][bj]
        for bj, j in enumerate(ro):
            out[i][j] = bottom_right[bi][bj]
    return SuperMatrix(A.cols, A.rows, out, n)


def super_cramer_solve(A: SuperMatrix, b) -> list[GrassmannElement]:
    """Solve A c = b: c_j = Ber(A_j <- b)/Ber A for even j, Ber*(A_j <- b)/Ber* A for odd j."""
    _check_square(A)
    b = list(b)
    if len(b) != len(A.rows):
        raise ValueError("right-hand side has wrong length")
    try:
        den = ber(A).inverse()
        den_star = ber_star(A).inverse()
    except (BerezinianUndefined, NotInvertible):
        raise NotInvertible("matrix is not invertible") from None
    out = []
    for j, p in enumerate(A.cols):
        val = ber_with_column(A, j, b)
        out.append(val * (den if p == EVEN else den_star))
    return out
