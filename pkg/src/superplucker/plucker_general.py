"""Super Pluecker transforms of r|s-planes and their essential coordinates.

A plane is an even r|s x n|m matrix U.  The Pluecker transform evaluates
Ber(UP) on covector arrays P (n|m x r|s); the Pi-dual transform evaluates
Ber*(UP).  On basis covectors these give the essential coordinates

    u^{a|mu}          Ber of the columns a_1..a_r | mu_1..mu_s      even, weight +1
    u^{a..nu^|mu}     same with one odd column in an even slot      odd,  weight +1
    u*^{a|mu}         Ber* of the columns a | mu                    even, weight -1
    u*^{a|b mu}       Ber* with one even column in an odd slot      odd,  weight -1

Index groups are tuples of Index (see plucker_algebraic).  The "top" group
fills the even slots and the "bottom" group the odd slots.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .galgebra import EVEN, ODD, GrassmannElement, NotInvertible, one, zero
from .grassmannian import ChartError, ChartIndex
from .plucker_algebraic import E, Index, O, format_tuple
from .smatrix import (
    BerezinianUndefined,
    SuperMatrix,
    SuperShape,
    ber,
    ber_ghost,
    ber_star,
    matmul,
)

_UNDEFINED = (BerezinianUndefined, NotInvertible)

FAMILIES = ("u", "u_ghost", "ustar", "ustar_ghost")
WEIGHTS = {"u": 1, "u_ghost": 1, "ustar": -1, "ustar_ghost": -1}


# covector arrays and the two transforms


@dataclass(frozen=True)
class CovectorArray:
    """An n|m x r|s matrix P; ghost is the slot of its one wrong-parity column, if any."""

    P: SuperMatrix
    ghost: int | None = None

    @classmethod
    def of(cls, P: SuperMatrix) -> CovectorArray:
        cols = sorted({j for _, j in P.parity_violations()})
        if len(cols) > 1:
            raise ValueError("more than one wrong-parity column")
        return cls(P, cols[0] if cols else None)

    @classmethod
    def basis(cls, ambient_parities, top, bottom, gens: int) -> CovectorArray:
        """Basis covectors e^{top} in the even slots and e^{bottom} in the odd slots.

        ambient_parities are the column labels of the plane the array will act on.
        """
        ev = [i for i, p in enumerate(ambient_parities) if p == EVEN]
        od = [i for i, p in enumerate(ambient_parities) if p == ODD]
        picks = list(top) + list(bottom)
        slots = [EVEN] * len(top) + [ODD] * len(bottom)
        entries = [[zero(gens) for _ in picks] for _ in ambient_parities]
        for j, x in enumerate(picks):
            where = ev if x.parity == EVEN else od
            if not 1 <= x.num <= len(where):
                raise ValueError(f"index {x} out of range")
            entries[where[x.num - 1]][j] = one(gens)
        return cls.of(SuperMatrix(ambient_parities, slots, entries, gens))


def _as_covectors(P) -> CovectorArray:
    return P if isinstance(P, CovectorArray) else CovectorArray.of(P)


def _product(U: SuperMatrix, P: CovectorArray) -> SuperMatrix:
    if U.cols != P.P.rows:
        raise ValueError(f"covector rows {P.P.rows} do not match plane columns {U.cols}")
    M = matmul(U, P.P)
    if M.rows != M.cols and sorted(M.rows) != sorted(M.cols):
        raise ValueError("UP is not square")
    return M


def plucker_eval(U: SuperMatrix, P) -> GrassmannElement:
    """pl(U)(P) = Ber(UP); a ghost column is allowed in an even slot only."""
    P = _as_covectors(P)
    M = _product(U, P)
    if P.ghost is None:
        return ber(M)
    if P.P.cols[P.ghost] != EVEN:
        raise ValueError("pl(U) extends only to a wrong-parity column in an even slot")
    return ber_ghost(M, P.ghost)


def plucker_dual_eval(U: SuperMatrix, P) -> GrassmannElement:
    """pl*(U)(P) = Ber*(UP); a ghost column is allowed in an odd slot only."""
    P = _as_covectors(P)
    M = _product(U, P)
    if P.ghost is None:
        return ber_star(M)
    if P.P.cols[P.ghost] != ODD:
        raise ValueError("pl*(U) extends only to a wrong-parity column in an odd slot")
    return ber_ghost(M, P.ghost)


# essential coordinates


class _Zero(Exception):
    pass


class _Undefined(Exception):
    pass


def _arrange(group, native: int, ghost_last: bool, allow_ghost: bool, repeat_exc):
    """Sort one index group: natives by number, the single wrong-parity index at one end.

    Returns (sign, sorted group).  Every transposition costs a sign.
    """
    ghosts = [x for x in group if x.parity != native]
    if len(ghosts) > (1 if allow_ghost else 0):
        raise _Undefined
    end = 1 if ghost_last else -1

    def key(x):
        return (0, x.num) if x.parity == native else (end, 0)

    keys = [key(x) for x in group]
    if len(set(keys)) < len(keys):
        raise repeat_exc
    inv = sum(1 for i in range(len(keys)) for j in range(i + 1, len(keys)) if keys[i] > keys[j])
    return (-1 if inv & 1 else 1), tuple(sorted(group, key=key))


@dataclass
class EssentialCoords:
    """Four coordinate families keyed by canonical (top, bottom) index groups.

    A value of None marks an entry whose Berezinian is undefined.
    """

    ambient: SuperShape
    shape: SuperShape
    gens: int
    u: dict = field(default_factory=dict)
    u_ghost: dict = field(default_factory=dict)
    ustar: dict = field(default_factory=dict)
    ustar_ghost: dict = field(default_factory=dict)

    def family(self, name: str) -> dict:
        return getattr(self, name)

    def items(self):
        """(family, key, value) over all stored entries."""
        for name in FAMILIES:
            for key, v in self.family(name).items():
                yield name, key, v

    def _get(self, name, key):
        d = self.family(name)
        if key not in d:
            raise KeyError(f"{name}: no entry {format_key(key)}")
        return d[key]

    def value(self, top, bottom):
        """u^{top|bottom}: a ghost may sit in the top group; None when undefined."""
        top, bottom = tuple(top), tuple(bottom)
        try:
            s2, b = _arrange(bottom, ODD, True, False, _Undefined)
            s1, t = _arrange(top, EVEN, True, True, _Zero)
        except _Undefined:
            return None
        except _Zero:
            return zero(self.gens)
        ghost = t[-1] if t and t[-1].parity == ODD else None
        if ghost is not None and ghost in b:
            return zero(self.gens)
        v = self._get("u_ghost" if ghost is not None else "u", (t, b))
        return None if v is None else (v if s1 * s2 > 0 else -v)

    def value_star(self, top, bottom):
        """u*^{top|bottom}: a ghost may sit in the bottom group; None when undefined."""
        top, bottom = tuple(top), tuple(bottom)
        try:
            s1, t = _arrange(top, EVEN, True, False, _Undefined)
            s2, b = _arrange(bottom, ODD, False, True, _Zero)
        except _Undefined:
            return None
        except _Zero:
            return zero(self.gens)
        ghost = b[0] if b and b[0].parity == EVEN else None
        if ghost is not None and ghost in t:
            return zero(self.gens)
        v = self._get("ustar_ghost" if ghost is not None else "ustar", (t, b))
        return None if v is None else (v if s1 * s2 > 0 else -v)

    def scaled(self, lam: GrassmannElement) -> EssentialCoords:
        """Weight action: weight +1 entries times lam, weight -1 entries times lam^-1."""
        inv = lam.inverse()
        out = EssentialCoords(self.ambient, self.shape, self.gens)
        for name, key, v in self.items():
            f = lam if WEIGHTS[name] > 0 else inv
            out.family(name)[key] = None if v is None else v * f
        return out

    def replaced(self, name: str, key, value) -> EssentialCoords:
        out = EssentialCoords(
            self.ambient, self.shape, self.gens, dict(self.u), dict(self.u_ghost), dict(self.ustar), dict(self.ustar_ghost)
        )
        if key not in out.family(name):
            raise KeyError(f"{name}: no entry {format_key(key)}")
        out.family(name)[key] = value
        return out

    def __eq__(self, other):
        if not isinstance(other, EssentialCoords):
            return NotImplemented
        return (self.ambient, self.shape) == (other.ambient, other.shape) and all(
            self.family(f) == other.family(f) for f in FAMILIES
        )


def format_key(key) -> str:
    top, bottom = key
    return f"{format_tuple(top)}|{format_tuple(bottom)}"


def parse_key(text: str):
    from .plucker_algebraic import parse_tuple

    if "|" not in text:
        raise ValueError(f"bad coordinate key {text!r}, expected 'top|bottom'")
    a, b = text.split("|", 1)
    return parse_tuple(a), parse_tuple(b)


def coordinate_keys(shape, ambient):
    """Canonical keys of the four families, in a fixed order."""
    r, s = shape
    n, m = ambient
    ev = [tuple(E(a) for a in c) for c in itertools.combinations(range(1, n + 1), r)]
    od = [tuple(O(mu) for mu in c) for c in itertools.combinations(range(1, m + 1), s)]
    plain = [(a, mu) for a in ev for mu in od]
    keys = {"u": plain, "ustar": plain, "u_ghost": [], "ustar_ghost": []}
    if r:
        for c in itertools.combinations(range(1, n + 1), r - 1):
            for nu in range(1, m + 1):
                for mu in od:
                    if O(nu) not in mu:
                        keys["u_ghost"].append((tuple(E(a) for a in c) + (O(nu),), mu))
    if s:
        for a in ev:
            for b in range(1, n + 1):
                if E(b) in a:
                    continue
                for c in itertools.combinations(range(1, m + 1), s - 1):
                    keys["ustar_ghost"].append((a, (E(b),) + tuple(O(mu) for mu in c)))
    return keys


def _columns(U: SuperMatrix, top, bottom) -> SuperMatrix:
    ev, od = U.positions(EVEN), U.positions(ODD)
    picks = [(ev if x.parity == EVEN else od)[x.num - 1] for x in list(top) + list(bottom)]
    slots = [EVEN] * len(top) + [ODD] * len(bottom)
    return SuperMatrix(U.rows, slots, [[row[j] for j in picks] for row in U.entries], U.n)


def _safe(fn, *args):
    try:
        return fn(*args)
    except _UNDEFINED:
        return None


def essential_coordinates(U: SuperMatrix) -> EssentialCoords:
    """All essential coordinates of the plane U (columns selected by basis covectors)."""
    shape, ambient = U.row_shape, U.col_shape
    r = shape.even
    out = EssentialCoords(ambient, shape, U.n)
    keys = coordinate_keys(shape, ambient)
    for key in keys["u"]:
        M = _columns(U, *key)
        out.u[key] = _safe(ber, M)
        out.ustar[key] = _safe(ber_star, M)
    for key in keys["u_ghost"]:
        out.u_ghost[key] = _safe(ber_ghost, _columns(U, *key), r - 1)
    for key in keys["ustar_ghost"]:
        out.ustar_ghost[key] = _safe(ber_ghost, _columns(U, *key), r)
    return out


# local inverse


def _chart_groups(chart: ChartIndex):
    return tuple(E(a) for a in chart.even), tuple(O(mu) for mu in chart.odd)


def _swap(group, i, x):
    return group[:i] + (x,) + group[i + 1 :]


def inverse_plucker(coords: EssentialCoords, chart: ChartIndex) -> SuperMatrix:
    """The matrix W = (U^chart)^-1 U rebuilt from ratios of coordinates (block form)."""
    if chart.shape() != coords.shape:
        raise ValueError(f"chart {chart} does not match shape {coords.shape}")
    n, m = coords.ambient
    if any(not 1 <= a <= n for a in chart.even) or any(not 1 <= mu <= m for mu in chart.odd):
        raise ValueError(f"chart {chart} out of range for ambient {coords.ambient}")
    top, bottom = _chart_groups(chart)
    u0, us0 = coords.value(top, bottom), coords.value_star(top, bottom)
    if u0 is None or us0 is None or not u0.body or not us0.body:
        raise ChartError(f"chart {chart} is not admissible for these coordinates")
    u_inv, us_inv = u0.inverse(), us0.inverse()
    targets = [E(b) for b in range(1, n + 1)] + [O(nu) for nu in range(1, m + 1)]

    def need(v, what):
        if v is None:
            raise ValueError(f"coordinate {what} is undefined")
        return v

    rows = []
    for j in range(len(top)):
        rows.append([need(coords.value(_swap(top, j, x), bottom), f"u^{x}") * u_inv for x in targets])
    for beta in range(len(bottom)):
        rows.append([need(coords.value_star(top, _swap(bottom, beta, x)), f"u*^{x}") * us_inv for x in targets])
    return SuperMatrix.from_blocks(coords.shape, coords.ambient, rows, coords.gens)


# weighted equivalence


def equivalence_factor(c1: EssentialCoords, c2: EssentialCoords):
    """The even lam with c2 = lam^weight * c1 entrywise, or None."""
    if (c1.ambient, c1.shape) != (c2.ambient, c2.shape):
        return None
    if any(c1.family(f).keys() != c2.family(f).keys() for f in FAMILIES):
        return None
    lam = None
    for key in sorted(c1.u):
        v = c1.u[key]
        if v is not None and v.body and c2.u[key] is not None:
            lam = c2.u[key] * v.inverse()
            break
    if lam is None or not lam.body or lam.parity() != EVEN:
        return None
    return lam if c1.scaled(lam) == c2 else None


def coords_equivalent(c1: EssentialCoords, c2: EssentialCoords) -> bool:
    return equivalence_factor(c1, c2) is not None


# relation checks


@dataclass
class FamilyReport:
    checked: int = 0
    violations: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


@dataclass
class RelationReport:
    families: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(f.holds for f in self.families.values())

    def violations(self):
        return [(name, v) for name, f in self.families.items() for v in f.violations]

    def summary(self) -> dict:
        return {
            name: {"checked": f.checked, "violations": len(f.violations), "inconclusive": len(f.inconclusive)}
            for name, f in self.families.items()
        }


def _record(report: FamilyReport, label: str, fn):
    """Evaluate fn() -> (lhs, rhs); None or an undefined Berezinian is inconclusive."""
    report.checked += 1
    try:
        lhs, rhs = fn()
    except _UNDEFINED:
        report.inconclusive.append(label)
        return
    except TypeError:
        # an undefined coordinate (None) entered the arithmetic
        report.inconclusive.append(label)
        return
    if lhs is None or rhs is None:
        report.inconclusive.append(label)
    elif lhs != rhs:
        report.violations.append(label)


def _mul(*xs):
    out = xs[0]
    if out is None:
        raise TypeError
    for x in xs[1:]:
        if x is None:
            raise TypeError
        out = out * x
    return out


def _require(coords: EssentialCoords, r=None, s=None):
    if r is not None and coords.shape.even != r or s is not None and coords.shape.odd != s:
        want = f"{'r' if r is None else r}|{'s' if s is None else s}"
        raise ValueError(f"coordinates have shape {coords.shape}, expected {want}")


def r0_even_sides(coords: EssentialCoords, a, b):
    """Both sides of u^{a}u^{b} = sum_j u^{b_j a_2..a_r} u^{b with b_j -> a_1}."""
    u = coords.value
    lhs = _mul(u(a, ()), u(b, ()))
    rhs = zero(coords.gens)
    for j in range(len(b)):
        rhs = rhs + _mul(u((b[j],) + tuple(a[1:]), ()), u(_swap(tuple(b), j, a[0]), ()))
    return lhs, rhs


def r0_odd_sides(coords: EssentialCoords, a, b, mu: Index):
    """Both sides of the odd relation with b = b_1..b_{r-1} and the odd index mu last."""
    u = coords.value
    b = tuple(b)
    lhs = _mul(u(a, ()), u(b + (mu,), ()))
    rhs = zero(coords.gens)
    for j in range(len(b)):
        rhs = rhs + _mul(u((b[j],) + tuple(a[1:]), ()), u(_swap(b, j, a[0]) + (mu,), ()))
    rhs = rhs + _mul(u((mu,) + tuple(a[1:]), ()), u(b + (a[0],), ()))
    return lhs, rhs


def relations_check_r0(coords: EssentialCoords) -> RelationReport:
    """Quadratic relations among the essential coordinates of an r|0-plane."""
    _require(coords, s=0)
    r = coords.shape.even
    n, m = coords.ambient
    rep = RelationReport({"even": FamilyReport(), "odd": FamilyReport()})
    if r == 0:
        return rep
    evens = [E(a) for a in range(1, n + 1)]
    rests = list(itertools.combinations(evens, r - 1))
    for a1 in evens:
        for rest in rests:
            a = (a1,) + rest
            for b in itertools.combinations(evens, r):
                label = f"a={format_tuple(a)} b={format_tuple(b)}"
                _record(rep.families["even"], label, lambda: r0_even_sides(coords, a, b))
            for b in itertools.combinations(evens, r - 1):
                for mu in range(1, m + 1):
                    label = f"a={format_tuple(a)} b={format_tuple(b)} mu={mu}^"
                    _record(rep.families["odd"], label, lambda: r0_odd_sides(coords, a, b, O(mu)))
    return rep


def _ber_of(entries, ghost=None, gens=0, r=1, s=1):
    M = SuperMatrix.from_blocks((r, s), (r, s), entries, gens)
    if ghost is None:
        return ber(M)
    return ber_ghost(M, ghost)


def _ber11(rows, gens, ghost=None):
    if any(x is None for row in rows for x in row):
        raise TypeError
    return _ber_of(rows, ghost, gens)


def sp_sides(coords: EssentialCoords, family: str, idx):
    """Both sides of one Berezinian-form relation for 1|1-planes."""
    u, us, g = coords.value, coords.value_star, coords.gens
    if family == "sp0":
        a, mu = idx
        return _mul(u((E(a),), (O(mu),)), us((E(a),), (O(mu),))), one(g)
    if family == "sp1":
        a, mu, b, nu = idx
        M = [[u((E(b),), (O(mu),)), u((O(nu),), (O(mu),))], [us((E(a),), (E(b),)), us((E(a),), (O(nu),))]]
        return _mul(u((E(a),), (O(mu),)), u((E(b),), (O(nu),))), _ber11(M, g)
    if family == "sp2":
        a, mu, lam, nu = idx
        M = [[u((O(lam),), (O(mu),)), u((O(nu),), (O(mu),))], [us((E(a),), (O(lam),)), us((E(a),), (O(nu),))]]
        return _mul(u((E(a),), (O(mu),)), u((O(lam),), (O(nu),))), _ber11(M, g, ghost=0)
    if family == "sp3":
        a, mu, b, c = idx
        M = [[u((E(b),), (O(mu),)), u((E(c),), (O(mu),))], [us((E(a),), (E(b),)), us((E(a),), (E(c),))]]
        return _mul(us((E(a),), (O(mu),)), us((E(b),), (E(c),))), _ber11(M, g, ghost=1)
    raise ValueError(f"unknown family {family}")


def altsp_sides(coords: EssentialCoords, family: str, idx):
    """Both sides of one denominator-free relation for 1|1-planes."""
    u, us = coords.value, coords.value_star

    def U(x, y):
        return u((x,), (O(y),))

    def S(x, y):
        return us((E(x),), (y,))

    if family == "altsp1":
        a, b, mu, nu = idx
        lhs = _mul(U(E(a), mu), U(E(b), nu))
        rhs = _mul(U(E(a), nu), U(E(b), mu)) + _mul(U(O(mu), nu), S(a, E(b)), U(E(a), mu), U(E(a), mu))
        return lhs, rhs
    if family == "altsp2":
        a, lam, mu, nu = idx
        lhs = _mul(U(E(a), nu), U(O(lam), mu))
        rhs = _mul(U(E(a), mu), U(O(lam), nu)) + _mul(U(O(nu), mu), S(a, O(lam)), U(E(a), nu), U(E(a), nu))
        return lhs, rhs
    if family == "altsp3":
        a, b, c, mu = idx
        lhs = _mul(U(E(a), mu), S(a, E(c)), U(E(b), mu))
        rhs = _mul(U(E(a), mu), S(a, E(b)), U(E(c), mu)) + _mul(S(b, E(c)), U(E(b), mu), U(E(b), mu))
        return lhs, rhs
    raise ValueError(f"unknown family {family}")


def _family_indices(family: str, n: int, m: int):
    A, M = range(1, n + 1), range(1, m + 1)
    return {
        "sp0": itertools.product(A, M),
        "sp1": itertools.product(A, M, A, M),
        "sp2": itertools.product(A, M, M, M),
        "sp3": itertools.product(A, M, A, A),
        "altsp1": itertools.product(A, A, M, M),
        "altsp2": itertools.product(A, M, M, M),
        "altsp3": itertools.product(A, A, A, M),
    }[family]


_INDEX_NAMES = {
    "sp0": "a mu",
    "sp1": "a mu b nu",
    "sp2": "a mu lam nu",
    "sp3": "a mu b c",
    "altsp1": "a b mu nu",
    "altsp2": "a lam mu nu",
    "altsp3": "a b c mu",
}

SP_FAMILIES = ("sp0", "sp1", "sp2", "sp3")
ALTSP_FAMILIES = ("altsp1", "altsp2", "altsp3")


def _label(family, idx):
    return " ".join(f"{k}={v}" for k, v in zip(_INDEX_NAMES[family].split(), idx))


def relations_check_11(coords: EssentialCoords, families=SP_FAMILIES + ALTSP_FAMILIES) -> RelationReport:
    """Berezinian-form and denominator-free relations for 1|1-planes, family by family."""
    _require(coords, 1, 1)
    n, m = coords.ambient
    rep = RelationReport()
    for fam in families:
        rep.families[fam] = FamilyReport()
        sides = sp_sides if fam in SP_FAMILIES else altsp_sides
        for idx in _family_indices(fam, n, m):
            _record(rep.families[fam], _label(fam, idx), lambda: sides(coords, fam, idx))
    return rep


def _rs_matrix(coords, top, bottom, even_cols, odd_cols):
    """Entries u^{top with i -> x} / u*^{bottom with alpha -> x} for the given column indices."""
    cols = list(even_cols) + list(odd_cols)
    rows = []
    for i in range(len(top)):
        rows.append([coords.value(_swap(top, i, x), bottom) for x in cols])
    for alpha in range(len(bottom)):
        rows.append([coords.value_star(top, _swap(bottom, alpha, x)) for x in cols])
    if any(x is None for row in rows for x in row):
        raise TypeError
    return SuperMatrix.from_blocks(coords.shape, coords.shape, rows, coords.gens)


def rs_sides(coords: EssentialCoords, family: str, top, bottom, idx):
    """Both sides of one r|s relation at the fixed (top|bottom) = (a|mu)."""
    r, s = coords.shape
    u0 = coords.value(top, bottom)
    if u0 is None:
        raise TypeError
    w = r + s - 1
    if family == "relrs0":
        return _mul(u0, coords.value_star(top, bottom)), one(coords.gens)
    if family == "relrs1":
        b, nu = idx
        M = _rs_matrix(coords, top, bottom, b, nu)
        return ber(M), _mul(u0**w, coords.value(b, nu))
    if family == "relrs2":
        b, lam, nu = idx
        M = _rs_matrix(coords, top, bottom, tuple(b) + (lam,), nu)
        return ber_ghost(M, r - 1), _mul(u0**w, coords.value(tuple(b) + (lam,), nu))
    if family == "relrs3":
        b, c, nu = idx
        M = _rs_matrix(coords, top, bottom, b, (c,) + tuple(nu))
        return ber_ghost(M, r), _mul(u0 ** (-w), coords.value_star(b, (c,) + tuple(nu)))
    raise ValueError(f"unknown family {family}")


RS_FAMILIES = ("relrs0", "relrs1", "relrs2", "relrs3")


def _rs_indices(family, shape, ambient):
    r, s = shape
    n, m = ambient
    evens = [E(a) for a in range(1, n + 1)]
    odds = [O(mu) for mu in range(1, m + 1)]
    if family == "relrs0":
        return [None]
    if family == "relrs1":
        return [(b, nu) for b in itertools.combinations(evens, r) for nu in itertools.combinations(odds, s)]
    if family == "relrs2":
        if r == 0:
            return []
        return [
            (b, lam, nu)
            for b in itertools.combinations(evens, r - 1)
            for lam in odds
            for nu in itertools.combinations(odds, s)
        ]
    if family == "relrs3":
        if s == 0:
            return []
        return [
            (b, c, nu)
            for b in itertools.combinations(evens, r)
            for c in evens
            for nu in itertools.combinations(odds, s - 1)
        ]
    raise ValueError(family)


def _rs_label(family, key, idx):
    base = f"a|mu={format_key(key)}"
    if idx is None:
        return base
    parts = [format_tuple(x) if isinstance(x, tuple) else str(x) for x in idx]
    return f"{base} {' '.join(parts)}"


def relations_check_rs(coords: EssentialCoords, families=RS_FAMILIES) -> RelationReport:
    """Berezinian-form relations for general r|s-planes.

    Every canonical (a|mu) with defined u and u* serves as the fixed index;
    tuples whose Berezinian is undefined are reported as inconclusive.
    """
    rep = RelationReport({f: FamilyReport() for f in families})
    for key, u0 in coords.u.items():
        if u0 is None or coords.ustar[key] is None:
            for f in families:
                rep.families[f].inconclusive.append(f"a|mu={format_key(key)}")
            continue
        top, bottom = key
        for fam in families:
            for idx in _rs_indices(fam, coords.shape, coords.ambient):
                _record(rep.families[fam], _rs_label(fam, key, idx), lambda: rs_sides(coords, fam, top, bottom, idx))
    return rep


def relations_check(coords: EssentialCoords, family: str) -> RelationReport:
    if family == "r0":
        return relations_check_r0(coords)
    if family == "11":
        return relations_check_11(coords)
    if family == "rs":
        return relations_check_rs(coords)
    raise ValueError(f"unknown relation family {family!r}; expected r0, 11 or rs")


__all__ = [
    "CovectorArray",
    "EssentialCoords",
    "coords_equivalent",
    "coordinate_keys",
    "equivalence_factor",
    "essential_coordinates",
    "format_key",
    "inverse_plucker",
    "parse_key",
    "plucker_dual_eval",
    "plucker_eval",
    "relations_check",
    "relations_check_11",
    "relations_check_r0",
    "relations_check_rs",
]
