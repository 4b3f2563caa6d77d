"""Charts and homogeneous coordinates on super Grassmannians G_{r|s}(n|m)."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import NamedTuple

from .galgebra import EVEN, ODD, GrassmannElement, NotInvertible, one, zero
from .smatrix import (
    SuperMatrix,
    SuperShape,
    ber,
    block_form,
    identity,
    inverse_matrix,
    matmul,
    parity_reverse,
)


class ChartIndex(NamedTuple):
    """Column selection (a1 < ... < ar | mu1 < ... < mus), 1-based."""

    even: tuple[int, ...]
    odd: tuple[int, ...]

    def __str__(self):
        return ",".join(map(str, self.even)) + "|" + ",".join(map(str, self.odd))

    @classmethod
    def parse(cls, text: str) -> ChartIndex:
        if "|" not in text:
            raise ValueError(f"bad chart {text!r}, expected 'a1,...,ar|mu1,...,mus'")
        a, b = text.split("|", 1)

        def nums(s):
            s = s.strip()
            return tuple(int(x) for x in s.split(",")) if s else ()

        c = cls(nums(a), nums(b))
        if list(c.even) != sorted(set(c.even)) or list(c.odd) != sorted(set(c.odd)):
            raise ValueError(f"chart indices must be strictly increasing: {text!r}")
        return c

    def shape(self) -> SuperShape:
        return SuperShape(len(self.even), len(self.odd))


def plane_shapes(U: SuperMatrix) -> tuple[SuperShape, SuperShape]:
    return U.row_shape, U.col_shape


def chart_columns(U: SuperMatrix, c: ChartIndex) -> list[int]:
    ev, od = U.positions(EVEN), U.positions(ODD)
    if any(not 1 <= a <= len(ev) for a in c.even) or any(not 1 <= m <= len(od) for m in c.odd):
        raise ValueError(f"chart {c} out of range for ambient {U.col_shape}")
    return [ev[a - 1] for a in c.even] + [od[m - 1] for m in c.odd]


def chart_block(U: SuperMatrix, c: ChartIndex) -> SuperMatrix:
    if c.shape() != U.row_shape:
        raise ValueError(f"chart {c} does not match plane shape {U.row_shape}")
    return U.select_columns(chart_columns(U, c))


def _body_rank(M) -> int:
    rows = [[Fraction(int(x.numerator), int(x.denominator)) for x in r] for r in M]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def has_full_rank(U: SuperMatrix) -> bool:
    """Rank condition checked on the body: even rows on even columns, odd rows on odd columns."""
    re, ro = U.positions(EVEN, "rows"), U.positions(ODD, "rows")
    ce, co = U.positions(EVEN), U.positions(ODD)
    b = U.body()
    even_block = [[b[i][j] for j in ce] for i in re]
    odd_block = [[b[i][j] for j in co] for i in ro]
    return _body_rank(even_block) == len(re) and _body_rank(odd_block) == len(ro)


def is_admissible(U: SuperMatrix, c: ChartIndex) -> bool:
    sub = chart_block(U, c)
    re, ro = sub.positions(EVEN, "rows"), sub.positions(ODD, "rows")
    ce, co = sub.positions(EVEN), sub.positions(ODD)
    b = sub.body()
    return (
        _body_rank([[b[i][j] for j in ce] for i in re]) == len(re)
        and _body_rank([[b[i][j] for j in co] for i in ro]) == len(ro)
    )


def charts(shape, ambient):
    """All charts in lexicographic order on (even_cols, odd_cols)."""
    r, s = shape
    n, m = ambient
    for a in itertools.combinations(range(1, n + 1), r):
        for mu in itertools.combinations(range(1, m + 1), s):
            yield ChartIndex(a, mu)


def admissible_charts(U: SuperMatrix):
    return [c for c in charts(U.row_shape, U.col_shape) if is_admissible(U, c)]


class ChartError(ValueError):
    pass


def normalize_to_chart(U: SuperMatrix, c: ChartIndex) -> SuperMatrix:
    """(U^c)^{-1} U: the inhomogeneous coordinates of U in chart c."""
    if not is_admissible(U, c):
        raise ChartError(f"chart {c} is not admissible for this plane")
    try:
        g = inverse_matrix(chart_block(U, c))
    except NotInvertible:
        raise ChartError(f"chart {c} is not admissible for this plane") from None
    return matmul(g, U)


def change_chart(U: SuperMatrix, c: ChartIndex) -> SuperMatrix:
    # a normalized representative in one chart is still a homogeneous matrix
    return normalize_to_chart(U, c)


def pi_dual(U: SuperMatrix) -> SuperMatrix:
    """U^Pi in block form: a point of G_{s|r}(Pi V)."""
    return block_form(parity_reverse(U))


def dimension(shape, ambient) -> SuperShape:
    r, s = shape
    n, m = ambient
    if not (0 <= r <= n and 0 <= s <= m):
        raise ValueError(f"impossible shape {r}|{s} in {n}|{m}")
    return SuperShape(r * (n - r) + s * (m - s), r * (m - s) + s * (n - r))


def free_coordinate_count(W: SuperMatrix, c: ChartIndex) -> SuperShape:
    """Entries outside the chart columns of a normalized matrix, split by slot parity."""
    chosen = set(chart_columns(W, c))
    counts = [0, 0]
    for i, rp in enumerate(W.rows):
        for j, cp in enumerate(W.cols):
            if j not in chosen:
                counts[(rp + cp) % 2] += 1
    return SuperShape(*counts)


# random data

SOUL_COEFFS = [-3, -2, -1, 1, 2, 3]


def random_element(rng: random.Random, n: int, parity: int, body_range=3, nonzero_body=False):
    """Random homogeneous element.

    Even: a bounded rational body plus at most one degree-2 monomial.
    Odd: a single degree-1 monomial.  Soul coefficients lie in {-3..3} minus 0.
    """
    out = zero(n)
    if parity == EVEN:
        b = rng.randint(-body_range, body_range)
        while nonzero_body and b == 0:
            b = rng.randint(-body_range, body_range)
        if rng.random() < 0.2:
            b = Fraction(b, rng.randint(1, 3))
        out = out + b
        if n >= 2 and rng.random() < 0.5:
            i, j = rng.sample(range(1, n + 1), 2)
            out = out + GrassmannElement.monomial((i, j), n, rng.choice(SOUL_COEFFS))
    elif n:
        out = GrassmannElement.monomial((rng.randint(1, n),), n, rng.choice(SOUL_COEFFS))
    return out


def random_matrix(rng, rows, cols, n: int, **kw) -> SuperMatrix:
    return SuperMatrix(
        rows, cols, [[random_element(rng, n, (rp + cp) % 2, **kw) for cp in cols] for rp in rows], n
    )


def random_gl(shape, n: int, seed=None, rng=None) -> SuperMatrix:
    """Random even invertible square supermatrix of the given shape (block form)."""
    rng = rng or random.Random(seed)
    par = SuperShape(*shape).parities
    while True:
        g = random_matrix(rng, par, par, n)
        if has_full_rank(g):
            return g


def random_plane(shape, ambient, n: int, seed=None, rng=None, chart: ChartIndex | None = None) -> SuperMatrix:
    """Random even r|s x n|m matrix with the identity in a random (or given) chart."""
    r, s = shape
    nn, m = ambient
    if not (0 <= r <= nn and 0 <= s <= m):
        raise ValueError(f"impossible shape {r}|{s} in {nn}|{m}")
    rng = rng or random.Random(seed)
    if chart is None:
        chart = ChartIndex(tuple(sorted(rng.sample(range(1, nn + 1), r))), tuple(sorted(rng.sample(range(1, m + 1), s))))
    rows = SuperShape(r, s).parities
    cols = SuperShape(nn, m).parities
    U = random_matrix(rng, rows, cols, n)
    entries = [list(row) for row in U.entries]
    for k, j in enumerate(chart_columns(U, chart)):
        for i in range(r + s):
            entries[i][j] = one(n) if i == k else zero(n)
    return SuperMatrix(rows, cols, entries, n)


def ber_of_chart(U: SuperMatrix, c: ChartIndex) -> GrassmannElement:
    return ber(chart_block(U, c))


__all__ = [
    "ChartIndex",
    "ChartError",
    "admissible_charts",
    "change_chart",
    "charts",
    "dimension",
    "free_coordinate_count",
    "has_full_rank",
    "identity",
    "is_admissible",
    "normalize_to_chart",
    "pi_dual",
    "random_gl",
    "random_plane",
]
