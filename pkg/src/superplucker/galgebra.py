"""Exact arithmetic in the Grassmann algebra Q[t1, ..., tN].

Monomials are bit masks: bit i stands for the generator t_i (i >= 1).
Bit 0 is reserved for an auxiliary odd generator used internally by the
ghost-column Berezinian; it never shows up in public results.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

EVEN, ODD = 0, 1

_RATIONAL_TYPES = (int, Fraction, type(mpq(0)))


def rational(value) -> mpq:
    if isinstance(value, str):
        return mpq(Fraction(value))
    return mpq(value)


@lru_cache(maxsize=None)
def _sign(m1: int, m2: int) -> int:
    """Sign of moving the generators of m2 past those of m1 into sorted order."""
    swaps = 0
    rest = m2
    while rest:
        low = rest & -rest
        swaps += (m1 & ~((low << 1) - 1)).bit_count()
        rest ^= low
    return -1 if swaps & 1 else 1


_TABLE_SIZE = 1 << 8  # monomials in t0..t7 use the precomputed sign table
_SIGN_TABLE = [[_sign(m1, m2) < 0 for m2 in range(_TABLE_SIZE)] for m1 in range(_TABLE_SIZE)]


def _accumulate(out: dict, a: dict, b: dict) -> None:
    """out += a*b on coefficient dicts (zero entries are left for the caller to drop)."""
    get = out.get
    if max(a) < _TABLE_SIZE and max(b) < _TABLE_SIZE:
        table = _SIGN_TABLE
        for m1, c1 in a.items():
            row = table[m1]
            for m2, c2 in b.items():
                if m1 & m2:
                    continue
                m = m1 | m2
                if row[m2]:
                    out[m] = get(m, 0) - c1 * c2
                else:
                    out[m] = get(m, 0) + c1 * c2
    else:
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                if m1 & m2:
                    continue
                m = m1 | m2
                if _sign(m1, m2) < 0:
                    out[m] = get(m, 0) - c1 * c2
                else:
                    out[m] = get(m, 0) + c1 * c2


def _mul_single(a: dict, b: dict) -> dict:
    """Product when one factor is a single term."""
    if len(b) == 1:
        ((m2, c2),) = b.items()
        return {m1 | m2: (-c1 * c2 if _sign(m1, m2) < 0 else c1 * c2) for m1, c1 in a.items() if not m1 & m2}
    ((m1, c1),) = a.items()
    return {m1 | m2: (-c1 * c2 if _sign(m1, m2) < 0 else c1 * c2) for m2, c2 in b.items() if not m1 & m2}


def mask_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def indices_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _monomial_key(mask: int):
    return (mask.bit_count(), mask_indices(mask))


class NotInvertible(ArithmeticError):
    pass


class GrassmannElement:
    """Immutable element of the Grassmann algebra with N generators."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = mpq(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj._hash = None
        return obj

    # construction helpers
    @classmethod
    def scalar(cls, value, n: int) -> GrassmannElement:
        return cls(n, {0: rational(value)})

    @classmethod
    def generator(cls, i: int, n: int) -> GrassmannElement:
        if not 1 <= i <= n:
            raise ValueError(f"generator t{i} outside context of {n} generators")
        return cls._raw(n, {1 << i: mpq(1)})

    @classmethod
    def monomial(cls, indices, n: int, coeff=1) -> GrassmannElement:
        """Ordered product coeff * t_i1 * t_i2 * ... (any order; repeats give 0)."""
        out = cls.scalar(coeff, n)
        for i in indices:
            out = out * cls.generator(i, n)
        return out

    # inspection
    @property
    def body(self) -> mpq:
        return self.terms.get(0, mpq(0))

    @property
    def soul(self) -> GrassmannElement:
        return GrassmannElement._raw(self.n, {m: c for m, c in self.terms.items() if m})

    def is_zero(self) -> bool:
        return not self.terms

    def is_invertible(self) -> bool:
        return 0 in self.terms

    def parity(self):
        """EVEN, ODD, or None for an inhomogeneous element (zero counts as even)."""
        ps = {m.bit_count() & 1 for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def part(self, parity: int) -> GrassmannElement:
        return GrassmannElement._raw(
            self.n, {m: c for m, c in self.terms.items() if m.bit_count() & 1 == parity}
        )

    def degree(self) -> int:
        return max((m.bit_count() for m in self.terms), default=0)

    def monomials(self):
        """(generator indices, coefficient) pairs in canonical order."""
        for m in sorted(self.terms, key=_monomial_key):
            yield mask_indices(m), self.terms[m]

    # arithmetic
    def _coerce(self, other) -> GrassmannElement | None:
        if isinstance(other, GrassmannElement):
            if other.n != self.n:
                raise ValueError(f"context mismatch: {self.n} vs {other.n} generators")
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return GrassmannElement._raw(self.n, {0: mpq(other)} if other else {})
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GrassmannElement._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            if not other:
                return GrassmannElement._raw(self.n, {})
            q = mpq(other)
            return GrassmannElement._raw(self.n, {m: c * q for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return GrassmannElement._raw(self.n, {})
        if len(b) == 1 or len(a) == 1:
            return GrassmannElement._raw(self.n, _mul_single(a, b))
        out = {}
        _accumulate(out, a, b)
        return GrassmannElement._raw(self.n, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = GrassmannElement._raw(self.n, {0: mpq(1)})
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> GrassmannElement:
        b = self.terms.get(0)
        if not b:
            raise NotInvertible(f"not invertible (zero body): {self}")
        binv = 1 / b
        step = self.soul * (-binv)
        out = GrassmannElement._raw(self.n, {0: mpq(1)})
        power = out
        while True:
            power = power * step
            if power.is_zero():
                break
            out = out + power
        return out * binv

    def __truediv__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / mpq(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    # comparison
    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, _RATIONAL_TYPES):
            if not other:
                return not self.terms
            return self.terms == {0: other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"GrassmannElement({self.n}, {to_text(self)!r})"


def _format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_text(x: GrassmannElement) -> str:
    """Canonical text: monomials sorted by degree then indices, e.g. '2/3 - 1/9*t1*t2'."""
    if x.is_zero():
        return "0"
    parts = []
    for indices, c in x.monomials():
        neg = c < 0
        a = -c if neg else c
        gens = "*".join(f"t{i}" for i in indices)
        if not gens:
            body = _format_rational(a)
        elif a == 1:
            body = gens
        else:
            body = f"{_format_rational(a)}*{gens}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def dot(n: int, pairs) -> GrassmannElement:
    """Sum of products x*y over (x, y) pairs, accumulated in one pass."""
    out = {}
    for x, y in pairs:
        if x.terms and y.terms:
            _accumulate(out, x.terms, y.terms)
    return GrassmannElement._raw(n, {m: c for m, c in out.items() if c})


def zero(n: int) -> GrassmannElement:
    return GrassmannElement._raw(n, {})


def one(n: int) -> GrassmannElement:
    return GrassmannElement._raw(n, {0: mpq(1)})


def parity_of(x: GrassmannElement):
    return x.parity()


def aux_generator(n: int) -> GrassmannElement:
    """The internal odd generator in bit 0; it anticommutes with every t_i."""
    return GrassmannElement._raw(n, {1: mpq(1)})


def strip_aux_right(x: GrassmannElement) -> GrassmannElement:
    """Given x = y * tau with tau the auxiliary generator, return y."""
    out = {}
    for m, c in x.terms.items():
        if not m & 1:
            raise ValueError("element is not a right multiple of the auxiliary generator")
        rest = m ^ 1
        # canonical order puts tau first: y_M * tau = (-1)^|M| tau * M
        out[rest] = -c if rest.bit_count() & 1 else c
    return GrassmannElement._raw(x.n, out)
