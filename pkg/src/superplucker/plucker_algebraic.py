"""Even multivectors in the exterior powers of a superspace V of dimension n|m.

Basis vectors e_1..e_n are even and e_1^..e_m^ are odd.  A multivector of
degree k is stored through its tensor components T^{a1...ak}, which are
super-antisymmetric:

    T^{...xy...} = -(-1)^{|x||y|} T^{...yx...}

and the multivector itself is T^{a1...ak} e_a1 ^ ... ^ e_ak summed over all
index tuples.  The coefficient on a basis element (a canonical tuple) is
therefore the number of distinct rearrangements of the tuple times the
component.  A wedge of even vectors u_1 ^ ... ^ u_k has components
(sign / k!) * (column determinant of the k x k minor), so minors and
components differ by the factor k!.
"""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .galgebra import EVEN, ODD, GrassmannElement, NotInvertible, one, zero
from .smatrix import SuperMatrix, SuperShape, det_col, inverse_matrix, matmul


class Index(NamedTuple):
    """Basis index: parity (0 even, 1 odd) and 1-based number.  Sorts even-first."""

    parity: int
    num: int

    def __str__(self):
        return f"{self.num}^" if self.parity else str(self.num)

    @classmethod
    def parse(cls, text: str) -> Index:
        text = text.strip()
        if text.endswith("^"):
            return cls(ODD, int(text[:-1]))
        return cls(EVEN, int(text))


def E(num: int) -> Index:
    return Index(EVEN, num)


def O(num: int) -> Index:
    return Index(ODD, num)


def all_indices(ambient) -> list[Index]:
    n, m = ambient
    return [E(a) for a in range(1, n + 1)] + [O(mu) for mu in range(1, m + 1)]


def tuple_parity(t) -> int:
    return sum(x.parity for x in t) & 1


def canonicalize(t):
    """Return (sign, canonical tuple) with T^t = sign * T^canonical; sign 0 if T^t must vanish."""
    t = list(t)
    sign = 1
    # bubble sort so that each swap is an adjacent transposition
    for i in range(len(t)):
        for j in range(len(t) - 1 - i):
            x, y = t[j], t[j + 1]
            if x > y:
                t[j], t[j + 1] = y, x
                sign = -sign if not (x.parity and y.parity) else sign
    for x, y in zip(t, t[1:]):
        if x == y and x.parity == EVEN:
            return 0, tuple(t)
    return sign, tuple(t)


def arrangements(t) -> int:
    """Number of distinct rearrangements of a canonical tuple."""
    c = Counter(t)
    out = math.factorial(len(t))
    for v in c.values():
        out //= math.factorial(v)
    return out


def canonical_tuples(k: int, ambient):
    """Canonical basis tuples: even part strictly increasing, odd part weakly increasing."""
    n, m = ambient
    for i in range(k, -1, -1):
        for ev in itertools.combinations(range(1, n + 1), i):
            for od in itertools.combinations_with_replacement(range(1, m + 1), k - i):
                yield tuple(E(a) for a in ev) + tuple(O(mu) for mu in od)


def format_tuple(t) -> str:
    return ",".join(str(x) for x in t)


def parse_tuple(text: str):
    text = text.strip()
    return tuple(Index.parse(p) for p in text.split(",")) if text else ()


class Multivector:
    """Super-antisymmetric component tensor of degree k over an n|m space."""

    __slots__ = ("degree", "ambient", "gens", "components")

    def __init__(self, degree: int, ambient, gens: int, components=None):
        self.degree = degree
        self.ambient = SuperShape(*ambient)
        self.gens = gens
        comps = {}
        for t, x in (components or {}).items():
            t = tuple(t)
            if len(t) != degree:
                raise ValueError(f"tuple {format_tuple(t)} has wrong length for degree {degree}")
            self._check_range(t)
            sign, c = canonicalize(t)
            if sign == 0:
                if x:
                    raise ValueError(f"component at {format_tuple(t)} must vanish")
                continue
            if c != t and c in comps:
                raise ValueError(f"component {format_tuple(c)} given twice")
            if x:
                comps[c] = x if sign > 0 else -x
        self.components = comps

    def _check_range(self, t):
        n, m = self.ambient
        for x in t:
            if not 1 <= x.num <= (m if x.parity else n):
                raise ValueError(f"index {x} out of range for ambient {self.ambient}")

    @classmethod
    def zero(cls, degree, ambient, gens):
        return cls(degree, ambient, gens)

    @classmethod
    def scalar(cls, value, ambient, gens):
        return cls(0, ambient, gens, {(): value})

    @classmethod
    def from_basis(cls, degree, ambient, gens, coefficients):
        """Build from coefficients on canonical basis elements e_t (t canonical)."""
        comps = {}
        for t, k in coefficients.items():
            sign, c = canonicalize(t)
            if c != tuple(t):
                raise ValueError(f"basis tuple {format_tuple(t)} is not canonical")
            comps[c] = k * Fraction(1, arrangements(c))
        return cls(degree, ambient, gens, comps)

    def component(self, t) -> GrassmannElement:
        """T^t for any index tuple, through the antisymmetry rule."""
        sign, c = canonicalize(t)
        if sign == 0:
            return zero(self.gens)
        x = self.components.get(c)
        if x is None:
            return zero(self.gens)
        return x if sign > 0 else -x

    __getitem__ = component

    def basis_coefficient(self, t) -> GrassmannElement:
        return self.components.get(tuple(t), zero(self.gens)) * arrangements(t)

    def basis_coefficients(self) -> dict:
        return {t: x * arrangements(t) for t, x in self.components.items()}

    def is_even(self) -> bool:
        return all(x.parity() == tuple_parity(t) for t, x in self.components.items())

    def is_zero(self) -> bool:
        return not self.components

    def _same_space(self, other):
        if (self.degree, self.ambient, self.gens) != (other.degree, other.ambient, other.gens):
            raise ValueError("multivectors live in different spaces")

    def __add__(self, other):
        self._same_space(other)
        out = dict(self.components)
        for t, x in other.components.items():
            out[t] = out.get(t, zero(self.gens)) + x
        return Multivector(self.degree, self.ambient, self.gens, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> Multivector:
        """c * T with c an even scalar (Grassmann or rational)."""
        return Multivector(self.degree, self.ambient, self.gens, {t: c * x for t, x in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.degree, self.ambient, self.gens, self.components) == (
            other.degree,
            other.ambient,
            other.gens,
            other.components,
        )

    def __hash__(self):
        return hash((self.degree, self.ambient, frozenset(self.components.items())))

    def __repr__(self):
        body = ", ".join(f"{format_tuple(t)}: {x}" for t, x in sorted(self.components.items()))
        return f"Multivector(k={self.degree}, {self.ambient}, {{{body}}})"


# wedge products


def _column_indices(U: SuperMatrix) -> list[Index]:
    out, counts = [], [0, 0]
    for p in U.cols:
        counts[p] += 1
        out.append(Index(p, counts[p]))
    return out


def wedge(vector, T: Multivector) -> Multivector:
    """vector ^ T, with vector = sum_b w^b e_b given as a sequence over all_indices(T.ambient).

    Works on basis coefficients: moving a coefficient K past e_b costs (-1)^{|b||K|},
    then e_b is inserted into the canonical basis word.
    """
    idx = all_indices(T.ambient)
    if len(vector) != len(idx):
        raise ValueError(f"vector has {len(vector)} entries, ambient {T.ambient} needs {len(idx)}")
    gens = T.gens
    out = {}
    coeffs = T.basis_coefficients()
    for b, w in zip(idx, vector):
        if not w:
            continue
        for t, K in coeffs.items():
            if b.parity == EVEN and b in t:
                continue
            # insert e_b at the front, then sort it into place
            sign, c = canonicalize((b,) + t)
            if sign == 0:
                continue
            for kp in (EVEN, ODD):
                part = K.part(kp)
                if not part:
                    continue
                term = w * part
                if b.parity and kp:
                    term = -term
                if sign < 0:
                    term = -term
                out[c] = out.get(c, zero(gens)) + term
    out = {t: x for t, x in out.items() if x}
    return Multivector.from_basis(T.degree + 1, T.ambient, gens, out)


def wedge_vectors(vectors, ambient, gens) -> Multivector:
    """v_1 ^ (v_2 ^ (... ^ v_k)) through repeated wedge()."""
    T = Multivector.scalar(one(gens), ambient, gens)
    for v in reversed(list(vectors)):
        T = wedge(v, T)
    return T


def _check_even_rows(U: SuperMatrix):
    if any(U.rows):
        raise ValueError(f"spanning vectors must be even: plane shape {U.row_shape} is not k|0")


def matrix_rows_as_vectors(U: SuperMatrix):
    """Rows of U reordered to all_indices order (even columns, then odd columns)."""
    order = U.positions(EVEN) + U.positions(ODD)
    return [[U.entries[i][j] for j in order] for i in range(len(U.rows))]


def wedge_rows(U: SuperMatrix) -> Multivector:
    """u_1 ^ ... ^ u_k for the (even) rows of U.

    Component at a canonical tuple a is (-1)^{sum_{i<j}|a_i||a_j|} / k! times the
    column determinant of the columns a_1..a_k.
    """
    _check_even_rows(U)
    k = len(U.rows)
    ambient = U.col_shape
    cols = {x: j for j, x in enumerate(_column_indices(U))}
    comps = {}
    scale = Fraction(1, math.factorial(k))
    for t in canonical_tuples(k, ambient):
        sub = [[U.entries[i][cols[x]] for x in t] for i in range(k)]
        d = det_col(sub, U.n)
        if not d:
            continue
        odd_pairs = sum(1 for i in range(k) for j in range(i + 1, k) if t[i].parity and t[j].parity)
        comps[t] = d * (-scale if odd_pairs & 1 else scale)
    return Multivector(k, ambient, U.n, comps)


def minors_from_multivector(T: Multivector) -> dict:
    """Minor-valued coordinates: k! times each component."""
    f = math.factorial(T.degree)
    return {t: x * f for t, x in T.components.items()}


# associated space and simplicity


def associated_space(T: Multivector):
    """Generators of L_T: for each canonical (k-1)-tuple a,

        f^a = sum_b T^{a b} (-1)^{|b| |a|} e_b

    returned as (a, vector) pairs; the vector parity is |a|.  Zero vectors are skipped.
    """
    idx = all_indices(T.ambient)
    out = []
    for a in canonical_tuples(T.degree - 1, T.ambient) if T.degree else ():
        pa = tuple_parity(a)
        vec = []
        for b in idx:
            x = T.component(a + (b,))
            vec.append(-x if (b.parity and pa) else x)
        if any(vec):
            out.append((a, vec))
    return out


def is_nondegenerate(T: Multivector) -> bool:
    return any(x.body != 0 for t, x in T.components.items() if tuple_parity_all_even(t))


def tuple_parity_all_even(t) -> bool:
    return all(x.parity == EVEN for x in t)


@dataclass
class SimplicityResult:
    simple: bool
    reason: str
    witness: SuperMatrix | None = None
    failing_generator: tuple | None = None

    def __bool__(self):
        return self.simple


def _pivot_component(T: Multivector):
    """An all-even canonical tuple whose component is invertible (largest body first)."""
    best = None
    for t, x in T.components.items():
        if tuple_parity_all_even(t) and x.body != 0:
            if best is None or abs(x.body) > abs(best[1].body):
                best = (t, x)
    return best


def is_simple(T: Multivector) -> SimplicityResult:
    """Simple iff non-degenerate and w ^ T = 0 for every generator w of L_T.

    On success the witness is an even k|0 matrix whose rows wedge to T exactly,
    built from the even generators f^{a minus a_i} of a pivot component T^a.
    """
    if T.degree == 0:
        return SimplicityResult(True, "degree 0", None)
    if not is_nondegenerate(T):
        return SimplicityResult(False, "degenerate: no all-even component is invertible")
    for a, w in associated_space(T):
        if not wedge(w, T).is_zero():
            return SimplicityResult(False, f"w ^ T != 0 for generator f^{{{format_tuple(a)}}}", failing_generator=a)
    W = _factorize(T)
    if W is None:
        raise AssertionError("factorization failed for a multivector passing the simplicity test")
    return SimplicityResult(True, "non-degenerate and w ^ T = 0 on L_T", W)


def _factorize(T: Multivector) -> SuperMatrix | None:
    k, gens = T.degree, T.gens
    pivot, Ta = _pivot_component(T)
    idx = all_indices(T.ambient)
    rows = []
    for i in range(k):
        rest = pivot[:i] + pivot[i + 1 :]
        rows.append([T.component(rest + (b,)) for b in idx])
    col_par = [x.parity for x in idx]
    F = SuperMatrix([EVEN] * k, col_par, rows, gens)
    chart = [idx.index(x) for x in pivot]
    try:
        g = inverse_matrix(F.select_columns(chart))
    except NotInvertible:
        return None
    W = matmul(g, F)
    candidate = wedge_rows(W)
    c = Ta / candidate.component(pivot)
    entries = [list(r) for r in W.entries]
    entries[0] = [c * x for x in entries[0]]
    W = SuperMatrix(W.rows, W.cols, entries, gens)
    return W if wedge_rows(W) == T else None


def row_span_contains(U: SuperMatrix, vector, chart) -> bool:
    """Is vector a left combination of the rows of U?  U must be the identity on chart columns.

    chart lists the column positions (all_indices order) carrying the identity.
    """
    rows = matrix_rows_as_vectors(U)
    lam = [vector[j] for j in chart]
    for b in range(len(vector)):
        acc = zero(U.n)
        for l, r in zip(lam, rows):
            acc = acc + l * r[b]
        if acc != vector[b]:
            return False
    return True


# super Pluecker relations


def _relation_residual(T: Multivector, a, b, c):
    """LHS - RHS of the k-plane relation for (a_1..a_{k-1}; b; c_1..c_k)."""
    pa = tuple_parity(a)
    pc = tuple_parity(c)
    lhs = T.component(a + (b,)) * T.component(c)
    if b.parity and (pa + pc) & 1:
        lhs = -lhs
    rhs = zero(T.gens)
    before = 0
    k = len(c)
    for j in range(k):
        cj = c[j]
        after = sum(x.parity for x in c[j + 1 :])
        e = b.parity * before + cj.parity * (pa + after)
        swapped = c[:j] + (b,) + c[j + 1 :]
        term = T.component(a + (cj,)) * T.component(swapped)
        rhs = rhs - term if e & 1 else rhs + term
        before += cj.parity
    return lhs - rhs


def plucker_relations_check(T: Multivector, debug_samples: int = 0, seed: int = 0):
    """Violated tuples (a, b, c) of the k-plane super Pluecker relations.

    Only canonical a and c are visited; debug_samples extra random non-canonical
    tuples are evaluated as well, to exercise permutation equivalence.
    """
    k = T.degree
    idx = all_indices(T.ambient)
    bad = []
    a_tuples = list(canonical_tuples(k - 1, T.ambient))
    c_tuples = list(canonical_tuples(k, T.ambient))
    for a in a_tuples:
        for b in idx:
            if canonicalize(a + (b,))[0] == 0 and all(canonicalize(a + (x,))[0] == 0 for x in idx):
                continue
            for c in c_tuples:
                if _relation_residual(T, a, b, c):
                    bad.append((a, b, c))
    if debug_samples:
        rng = random.Random(seed)
        for _ in range(debug_samples):
            a = tuple(rng.choice(idx) for _ in range(k - 1))
            b = rng.choice(idx)
            c = tuple(rng.choice(idx) for _ in range(k))
            if _relation_residual(T, a, b, c):
                bad.append((a, b, c))
    return bad


def plucker_k2_residual(T: Multivector, a, b, c, d) -> GrassmannElement:
    """LHS - RHS of the bivector relation
    T^{ab}T^{cd}(-1)^{|b|(|a|+|c|+|d|)} = T^{ac}T^{bd}(-1)^{|c|(|a|+|d|)} + T^{ad}T^{cb}(-1)^{|b||c|+|a||d|}.
    """
    pa, pb, pc, pd = a.parity, b.parity, c.parity, d.parity
    t1 = T.component((a, b)) * T.component((c, d))
    t2 = T.component((a, c)) * T.component((b, d))
    t3 = T.component((a, d)) * T.component((c, b))
    if pb * (pa + pc + pd) & 1:
        t1 = -t1
    if pc * (pa + pd) & 1:
        t2 = -t2
    if (pb * pc + pa * pd) & 1:
        t3 = -t3
    return t1 - t2 - t3


def plucker_k2_check(T: Multivector):
    """Violated (a, b, c, d) of the bivector relation over all index combinations."""
    if T.degree != 2:
        raise ValueError("bivector relation needs degree 2")
    idx = all_indices(T.ambient)
    return [q for q in itertools.product(idx, repeat=4) if plucker_k2_residual(T, *q)]


K2_FAMILIES = ("ev", "eeeo", "eeoo", "eooo", "oooo")


def _family_parts(T: Multivector):
    n, m = T.ambient

    def Tev(a, b):
        return T.component((E(a), E(b)))

    def th(a, mu):
        return T.component((E(a), O(mu)))

    def S(lam, mu):
        return T.component((O(lam), O(mu)))

    return n, m, Tev, th, S


def k2_family_check(T: Multivector) -> dict:
    """The five bivector families, split by how many indices are odd.

    With theta^{a mu} = T^{a mu^} and S^{lambda mu} = T^{lambda^ mu^}:
      ev:   T^{ab}T^{cd} = T^{ac}T^{bd} + T^{ad}T^{cb}
      eeeo: T^{ab}theta^{c mu} = T^{ac}theta^{b mu} + T^{cb}theta^{a mu}
      eeoo: T^{ab}S^{lm} = -theta^{al}theta^{bm} - theta^{am}theta^{bl}
      eooo: theta^{an}S^{lm} = -theta^{al}S^{mn} - theta^{am}S^{ln}
      oooo: S^{kn}S^{lm} = -S^{kl}S^{mn} - S^{km}S^{ln}
    Returns family -> list of violating index tuples.
    """
    if T.degree != 2:
        raise ValueError("family check needs degree 2")
    n, m, Tev, th, S = _family_parts(T)
    ev, od = range(1, n + 1), range(1, m + 1)
    report = {f: [] for f in K2_FAMILIES}
    for a, b, c, d in itertools.product(ev, repeat=4):
        if Tev(a, b) * Tev(c, d) != Tev(a, c) * Tev(b, d) + Tev(a, d) * Tev(c, b):
            report["ev"].append((a, b, c, d))
    for a, b, c in itertools.product(ev, repeat=3):
        for mu in od:
            if Tev(a, b) * th(c, mu) != Tev(a, c) * th(b, mu) + Tev(c, b) * th(a, mu):
                report["eeeo"].append((a, b, c, mu))
    for a, b in itertools.product(ev, repeat=2):
        for l, mu in itertools.product(od, repeat=2):
            if Tev(a, b) * S(l, mu) != -(th(a, l) * th(b, mu)) - th(a, mu) * th(b, l):
                report["eeoo"].append((a, b, l, mu))
    for a in ev:
        for nu, l, mu in itertools.product(od, repeat=3):
            if th(a, nu) * S(l, mu) != -(th(a, l) * S(mu, nu)) - th(a, mu) * S(l, nu):
                report["eooo"].append((a, nu, l, mu))
    for k, nu, l, mu in itertools.product(od, repeat=4):
        if S(k, nu) * S(l, mu) != -(S(k, l) * S(mu, nu)) - S(k, mu) * S(l, nu):
            report["oooo"].append((k, nu, l, mu))
    return report


def m1_family_check(T: Multivector) -> dict:
    """The one-odd-direction specialization with theta^a = T^{a 1^}, s = T^{1^ 1^}:
    T^{ab}theta^c = T^{ac}theta^b + T^{cb}theta^a, T^{ab}s = -2 theta^a theta^b,
    theta^a s = 0, s^2 = 0.
    """
    if T.degree != 2 or T.ambient.odd != 1:
        raise ValueError("needs a bivector in an n|1 space")
    n, _, Tev, th, S = _family_parts(T)
    s = S(1, 1)
    ev = range(1, n + 1)
    report = {"ttheta": [], "ts": [], "thetas": [], "skw": []}
    for a, b, c in itertools.product(ev, repeat=3):
        if Tev(a, b) * th(c, 1) != Tev(a, c) * th(b, 1) + Tev(c, b) * th(a, 1):
            report["ttheta"].append((a, b, c))
    for a, b in itertools.product(ev, repeat=2):
        if Tev(a, b) * s != th(a, 1) * th(b, 1) * (-2):
            report["ts"].append((a, b))
    for a in ev:
        if th(a, 1) * s:
            report["thetas"].append((a,))
    if s * s:
        report["skw"].append(())
    return report


@dataclass
class ReductionReport:
    pivot: tuple
    essential: dict
    eliminated: dict
    mismatches: list = field(default_factory=list)
    nilpotent_failures: list = field(default_factory=list)
    reduced_violations: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.nilpotent_failures or any(self.reduced_violations.values()))


def reduce_to_essential(T: Multivector, pivot) -> ReductionReport:
    """Split a bivector into essential data {T^{cd}, theta^{c mu}} and eliminated components.

    With T^{ab} invertible for the even pivot (a, b):
        theta^{c mu} = (T^{ac} theta^{b mu} + T^{cb} theta^{a mu}) / T^{ab}
        S^{lambda mu} = -(theta^{a lambda} theta^{b mu} + theta^{a mu} theta^{b lambda}) / T^{ab}
    Every theta and S is rebuilt from these and compared with T; the reduced
    relations (ev and eeeo families) and (S^{mu mu})^2 = 0 are checked too.
    """
    if T.degree != 2:
        raise ValueError("reduction needs degree 2")
    a, b = pivot
    n, m, Tev, th, S = _family_parts(T)
    Tab = Tev(a, b)
    if not Tab.is_invertible():
        raise NotInvertible(f"pivot T^{{{a}{b}}} is not invertible")
    inv = Tab.inverse()
    essential = {}
    for c, d in itertools.combinations(range(1, n + 1), 2):
        essential[(E(c), E(d))] = Tev(c, d)
    for c in range(1, n + 1):
        for mu in range(1, m + 1):
            essential[(E(c), O(mu))] = th(c, mu)
    report = ReductionReport(pivot, essential, {})
    for c in range(1, n + 1):
        for mu in range(1, m + 1):
            rebuilt = (Tev(a, c) * th(b, mu) + Tev(c, b) * th(a, mu)) * inv
            report.eliminated[(E(c), O(mu))] = rebuilt
            if rebuilt != th(c, mu):
                report.mismatches.append((E(c), O(mu)))
    for l in range(1, m + 1):
        for mu in range(l, m + 1):
            rebuilt = -(th(a, l) * th(b, mu) + th(a, mu) * th(b, l)) * inv
            report.eliminated[(O(l), O(mu))] = rebuilt
            if rebuilt != S(l, mu):
                report.mismatches.append((O(l), O(mu)))
    for mu in range(1, m + 1):
        if S(mu, mu) * S(mu, mu):
            report.nilpotent_failures.append(mu)
    fam = k2_family_check(T)
    report.reduced_violations = {"even": fam["ev"], "odd": fam["eeeo"]}
    return report


# Khudaverdian relations


class _SuperPoly:
    """Polynomial in covector variables p^i_c with Grassmann coefficients written on the right.

    A key is a sorted tuple of variables (i, Index); a variable is odd when its
    index is odd.  Only what the bivector identity needs: products and left
    derivatives.
    """

    __slots__ = ("terms", "gens")

    def __init__(self, gens, terms=None):
        self.gens = gens
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def _sort(vars_):
        vs = list(vars_)
        sign = 1
        for i in range(len(vs)):
            for j in range(len(vs) - 1 - i):
                x, y = vs[j], vs[j + 1]
                if x > y:
                    vs[j], vs[j + 1] = y, x
                    if x[1].parity and y[1].parity:
                        sign = -sign
        for x, y in zip(vs, vs[1:]):
            if x == y and x[1].parity:
                return 0, None
        return sign, tuple(vs)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, zero(self.gens)) + v
        return _SuperPoly(self.gens, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q):
        return _SuperPoly(self.gens, {k: v * q for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for k1, x1 in self.terms.items():
            for k2, x2 in other.terms.items():
                odd_vars = sum(1 for v in k2 if v[1].parity) & 1
                sign, key = self._sort(k1 + k2)
                if not sign:
                    continue
                for par in (EVEN, ODD):
                    part = x1.part(par)
                    if not part:
                        continue
                    term = part * x2
                    s = sign * (-1 if par and odd_vars else 1)
                    out[key] = out.get(key, zero(self.gens)) + (term if s > 0 else -term)
        return _SuperPoly(self.gens, out)

    def derivative(self, var):
        """Left derivative: move var to the front (past odd variables only), drop it."""
        out = {}
        for key, x in self.terms.items():
            if var not in key:
                continue
            pos = key.index(var)
            passed = sum(1 for v in key[:pos] if v[1].parity)
            mult = key.count(var)
            sign = -1 if (var[1].parity and passed & 1) else 1
            rest = key[:pos] + key[pos + 1 :]
            out[rest] = out.get(rest, zero(self.gens)) + x * (sign * mult)
        return _SuperPoly(self.gens, out)

    def coefficient(self, key) -> GrassmannElement:
        return self.terms.get(tuple(key), zero(self.gens))


def bivector_function(T: Multivector) -> _SuperPoly:
    """F(p^1, p^2) = T^{cd} p^1_c p^2_d, rewritten with coefficients on the right."""
    idx = all_indices(T.ambient)
    terms = {}
    for c, d in itertools.product(idx, repeat=2):
        x = T.component((c, d))
        if not x:
            continue
        sign, key = _SuperPoly._sort(((1, c), (2, d)))
        if not sign:
            continue
        # T^{cd} p_c p_d = (-1)^{(|c|+|d|)^2} p_c p_d T^{cd}
        s = sign * (-1 if (c.parity + d.parity) & 1 else 1)
        terms[key] = terms.get(key, zero(T.gens)) + (x if s > 0 else -x)
    return _SuperPoly(T.gens, terms)


def khudaverdian_k2_components(T: Multivector) -> dict:
    """Coefficient of p^1_c p^2_d in
        dF/dp^1_a dF/dp^2_b - dF/dp^2_a dF/dp^1_b - F d/dp^1_a d/dp^2_b F
    for every (a, b, c, d)."""
    F = bivector_function(T)
    idx = all_indices(T.ambient)
    d1 = {a: F.derivative((1, a)) for a in idx}
    d2 = {a: F.derivative((2, a)) for a in idx}
    out = {}
    for a, b in itertools.product(idx, repeat=2):
        second = d2[b].derivative((1, a))
        expr = d1[a] * d2[b] - d2[a] * d1[b] - F * second
        for c, d in itertools.product(idx, repeat=2):
            sign, key = _SuperPoly._sort(((1, c), (2, d)))
            x = expr.coefficient(key)
            out[(a, b, c, d)] = x if sign > 0 else -x
    return out


@dataclass
class KhudaverdianReport:
    degree: int
    violations: list
    plucker_violations: list
    disagreements: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def khudaverdian_check(T: Multivector, k: int | None = None) -> KhudaverdianReport:
    """Quadric identities from the reciprocal of the multivector.

    Degree 2: the component identity is evaluated for every (a, b, c, d) and compared
    tuple by tuple with the bivector Pluecker relation.  Degree 3: the six-term
    identity over all purely even index tuples, alongside the four-term relation.
    """
    k = T.degree if k is None else k
    if k != T.degree:
        raise ValueError(f"multivector has degree {T.degree}, asked for {k}")
    if k == 2:
        comps = khudaverdian_k2_components(T)
        viol = [q for q, x in comps.items() if x]
        pl = [q for q in comps if plucker_k2_residual(T, *q)]
        disagree = sorted(set(viol) ^ set(pl))
        return KhudaverdianReport(2, viol, pl, disagree)
    if k == 3:
        n = T.ambient.even
        tuples = list(itertools.product(range(1, n + 1), repeat=3))
        viol, pl = [], []
        for a in tuples:
            for b in tuples:
                if six_term(T, a, b):
                    viol.append((a, b))
                if four_term(T, a, b):
                    pl.append((a, b))
        return KhudaverdianReport(3, viol, pl)
    raise ValueError(f"Khudaverdian check supports degree 2 and 3, not {k}")


def _even_component(T):
    return lambda *t: T.component(tuple(E(x) for x in t))


def six_term(T: Multivector, a, b) -> GrassmannElement:
    """Six-term identity for purely even indices:

    T^{a1a2a3}T^{b1b2b3} + T^{a1a2b3}T^{b1b2a3} - T^{b1a2a3}T^{a1b2b3}
      + T^{b2a2a3}T^{a1b1b3} - T^{b1a2b3}T^{a1b2a3} + T^{b2a2b3}T^{a1b1a3}

    which is four_term(a; b) + four_term(a1 a2 b3; b1 b2 a3).
    """
    C = _even_component(T)
    a1, a2, a3 = a
    b1, b2, b3 = b
    return (
        C(a1, a2, a3) * C(b1, b2, b3)
        + C(a1, a2, b3) * C(b1, b2, a3)
        - C(b1, a2, a3) * C(a1, b2, b3)
        + C(b2, a2, a3) * C(a1, b1, b3)
        - C(b1, a2, b3) * C(a1, b2, a3)
        + C(b2, a2, b3) * C(a1, b1, a3)
    )


def four_term(T: Multivector, a, b) -> GrassmannElement:
    """T^{a1a2a3}T^{b1b2b3} - T^{b1a2a3}T^{a1b2b3} - T^{b2a2a3}T^{b1a1b3} - T^{b3a2a3}T^{b1b2a1}."""
    C = _even_component(T)
    a1, a2, a3 = a
    b1, b2, b3 = b
    return (
        C(a1, a2, a3) * C(b1, b2, b3)
        - C(b1, a2, a3) * C(a1, b2, b3)
        - C(b2, a2, a3) * C(b1, a1, b3)
        - C(b3, a2, a3) * C(b1, b2, a1)
    )


def _quadric_vector(terms, basis_pos):
    """Sparse vector of a quadric sum of products c * T^x T^y over monomials T_i T_j."""
    vec = {}
    for c, x, y in terms:
        sx, cx = _sign_sorted(x)
        sy, cy = _sign_sorted(y)
        if not sx or not sy:
            continue
        i, j = sorted((basis_pos[cx], basis_pos[cy]))
        vec[(i, j)] = vec.get((i, j), 0) + c * sx * sy
    return {k: v for k, v in vec.items() if v}


def _sign_sorted(t):
    if len(set(t)) < len(t):
        return 0, None
    inv = sum(1 for i in range(len(t)) for j in range(i + 1, len(t)) if t[i] > t[j])
    return (-1 if inv & 1 else 1), tuple(sorted(t))


def _six_terms(a, b):
    a1, a2, a3 = a
    b1, b2, b3 = b
    return [
        (1, (a1, a2, a3), (b1, b2, b3)),
        (1, (a1, a2, b3), (b1, b2, a3)),
        (-1, (b1, a2, a3), (a1, b2, b3)),
        (1, (b2, a2, a3), (a1, b1, b3)),
        (-1, (b1, a2, b3), (a1, b2, a3)),
        (1, (b2, a2, b3), (a1, b1, a3)),
    ]


def _six_terms_as_printed(a, b):
    # the first factor of the fourth term repeats b3 where a3 belongs
    a1, a2, a3 = a
    b1, b2, b3 = b
    terms = _six_terms(a, b)
    terms[3] = (1, (b2, a2, b3), (a1, b1, b3))
    return terms


def _four_terms(a, b):
    a1, a2, a3 = a
    b1, b2, b3 = b
    return [
        (1, (a1, a2, a3), (b1, b2, b3)),
        (-1, (b1, a2, a3), (a1, b2, b3)),
        (-1, (b2, a2, a3), (b1, a1, b3)),
        (-1, (b3, a2, a3), (b1, b2, a1)),
    ]


class _Echelon:
    """Exact row echelon basis of sparse rational vectors."""

    def __init__(self):
        self.rows = {}  # pivot -> row with row[pivot] == 1

    def add(self, vec) -> bool:
        v = {k: Fraction(x) for k, x in vec.items()}
        while v:
            p = min(v)
            r = self.rows.get(p)
            if r is None:
                c = v[p]
                self.rows[p] = {k: x / c for k, x in v.items()}
                return True
            c = v[p]
            for k, x in r.items():
                y = v.get(k, 0) - c * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)


@lru_cache(maxsize=None)
def quadric_families(n: int = 6) -> dict:
    """Deduplicated sparse quadric vectors of the six-term, four-term and as-printed
    six-term families for even trivectors in n dimensions.

    A vector maps a monomial (i, j), i <= j, of components T_i T_j (positions in the
    list of 3-subsets) to its integer coefficient.
    """
    basis = list(itertools.combinations(range(1, n + 1), 3))
    pos = {b: i for i, b in enumerate(basis)}
    builders = {"six": _six_terms, "four": _four_terms, "printed": _six_terms_as_printed}
    out = {name: {} for name in builders}
    for a in itertools.product(range(1, n + 1), repeat=3):
        for b in itertools.product(range(1, n + 1), repeat=3):
            for name, builder in builders.items():
                v = _quadric_vector(builder(a, b), pos)
                if v:
                    out[name].setdefault(frozenset(v.items()), (a, b))
    return {"basis": basis, **{name: [(dict(k), ab) for k, ab in fam.items()] for name, fam in out.items()}}


def quadric_span_ranks(n: int = 6) -> dict:
    """Exact ranks of the six-term, four-term and joint quadric families for trivectors in n dims.

    Equal ranks of six, four and their union mean the two families span the same
    space of quadrics, so they cut out the same points over any commutative ring.
    """
    fam = quadric_families(n)
    six, four, both, printed = _Echelon(), _Echelon(), _Echelon(), _Echelon()
    for v, _ in fam["six"]:
        six.add(v)
        both.add(v)
    for v, _ in fam["four"]:
        four.add(v)
        both.add(v)
    for v, _ in fam["printed"]:
        printed.add(v)
    size = len(fam["basis"])
    return {
        "monomials": size * (size + 1) // 2,
        "six": six.rank,
        "four": four.rank,
        "six_and_four": both.rank,
        "six_as_printed": printed.rank,
    }


def _violated(family, values):
    for v, ab in family:
        if sum(c * values[i] * values[j] for (i, j), c in v.items()):
            return ab
    return None


def _int_det3(U, t):
    a, b, c = (x - 1 for x in t)
    r0, r1, r2 = U
    return (
        r0[a] * (r1[b] * r2[c] - r1[c] * r2[b])
        - r0[b] * (r1[a] * r2[c] - r1[c] * r2[a])
        + r0[c] * (r1[a] * r2[b] - r1[b] * r2[a])
    )


def _random_candidate(n, rng, basis):
    """Integer trivector on the even indices: sparse noise, a decomposable one, or a sum of two."""
    kind = rng.randrange(3)
    if kind == 0:
        density = rng.choice([0.1, 0.2, 0.35, 0.5])
        return [rng.randint(-2, 2) if rng.random() < density else 0 for _ in basis]
    planes = []
    for _ in range(kind):
        U = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(3)]
        planes.append([_int_det3(U, t) for t in basis])
    vals = [sum(p[i] for p in planes) for i in range(len(basis))]
    if rng.random() < 0.5:
        vals[rng.randrange(len(basis))] += rng.choice([-1, 1])
    return vals


def search_six_not_four_witness(n: int = 6, trials: int = 2000, seed: int = 0):
    """Randomized search for an even trivector satisfying every six-term identity but
    violating some four-term relation.  Returns the multivector or None."""
    rng = random.Random(seed)
    fam = quadric_families(n)
    basis = fam["basis"]
    for _ in range(trials):
        vals = _random_candidate(n, rng, basis)
        if not any(vals) or _violated(fam["six"], vals) is not None:
            continue
        if _violated(fam["four"], vals) is not None:
            comps = {tuple(E(x) for x in t): GrassmannElement.scalar(v, 0) for t, v in zip(basis, vals) if v}
            return Multivector(3, (n, 0), 0, comps)
    return None


__all__ = [
    "Index",
    "Multivector",
    "E",
    "O",
    "all_indices",
    "associated_space",
    "canonical_tuples",
    "canonicalize",
    "four_term",
    "is_nondegenerate",
    "is_simple",
    "k2_family_check",
    "khudaverdian_check",
    "m1_family_check",
    "plucker_k2_check",
    "plucker_relations_check",
    "quadric_span_ranks",
    "reduce_to_essential",
    "search_six_not_four_witness",
    "six_term",
    "wedge",
    "wedge_rows",
    "wedge_vectors",
]
