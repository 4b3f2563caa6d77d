"""Super cluster structures on G_2(n|1): clusters, even and odd mutations.

Variables are the even T^{ab} = -T^{ba} (essential bivector coordinates)
and the odd theta^a, one per even index.  Every exchange is an instance of
one of two three-term templates, valid for distinct a, b, c, d:

    even:  T^{ab} T^{cd}    = T^{ac} T^{bd} + T^{ad} T^{cb}
    odd:   T^{ab} theta^c   = T^{ac} theta^b + theta^a T^{cb}

solved for the right-hand unknown by dividing by T^{ab}, the pivot.

A super cluster holds even cluster variables (diagonals of the n-gon) and
two odd variables sitting at the endpoints of one of them, the carrier.
An even mutation flips the carrier diagonal and moves the odd pair to the
endpoints of the new diagonal.  An odd mutation keeps the diagonals and
moves the odd pair to the other diagonal through the shared vertex.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from .galgebra import GrassmannElement, NotInvertible, zero

# symbols


def T(a: int, b: int) -> str:
    if a == b:
        raise ValueError("T^{aa} is not a variable")
    return f"T{min(a, b)}{max(a, b)}" if max(a, b) < 10 else f"T{min(a, b)}_{max(a, b)}"


def TH(a: int) -> str:
    return f"th{a}"


_SYMBOL = re.compile(r"^(?:T(\d)(\d)|T(\d+)_(\d+)|th(\d+))$")


def parse_symbol(name: str):
    """('T', a, b) with a < b, or ('th', a)."""
    m = _SYMBOL.match(name.strip())
    if not m:
        raise ValueError(f"bad symbol {name!r}; expected e.g. T13 or th3")
    if m.group(5):
        return ("th", int(m.group(5)))
    a, b = (int(m.group(1)), int(m.group(2))) if m.group(1) else (int(m.group(3)), int(m.group(4)))
    if a == b:
        raise ValueError(f"bad symbol {name!r}")
    return ("T", min(a, b), max(a, b))


def _sign_T(a, b):
    return 1 if a < b else -1


class ClusterError(ValueError):
    pass


# templates


@dataclass(frozen=True)
class Relation:
    """One exchange identity, solved for its unknown."""

    kind: str  # "even" or "odd"
    indices: tuple

    @property
    def pivot(self) -> str:
        a, b = self.indices[:2]
        return T(a, b)

    @property
    def unknown(self) -> str:
        if self.kind == "even":
            return T(*self.indices[2:])
        return TH(self.indices[2])

    def inputs(self) -> set:
        if self.kind == "even":
            a, b, c, d = self.indices
            return {T(a, c), T(b, d), T(a, d), T(c, b)}
        a, b, c = self.indices
        return {T(a, c), TH(b), TH(a), T(c, b)}

    def __str__(self):
        if self.kind == "even":
            a, b, c, d = self.indices
            return f"T{a}{b}*T{c}{d} = T{a}{c}*T{b}{d} + T{a}{d}*T{c}{b}"
        a, b, c = self.indices
        return f"T{a}{b}*th{c} = T{a}{c}*th{b} + th{a}*T{c}{b}"

    def solve(self, values: dict, trace: list | None = None) -> GrassmannElement:
        """Value of the unknown; the only division is by the pivot."""
        get = _getter(values)
        piv = get("T", *self.indices[:2])
        if not piv.body:
            raise NotInvertible(f"pivot {self.pivot} is not invertible")
        if trace is not None:
            trace.append(self.pivot)
        if self.kind == "even":
            a, b, c, d = self.indices
            rhs = get("T", a, c) * get("T", b, d) + get("T", a, d) * get("T", c, b)
        else:
            a, b, c = self.indices
            rhs = get("T", a, c) * get("th", b) + get("th", a) * get("T", c, b)
        out = rhs * piv.inverse()
        if self.kind == "even":
            c, d = self.indices[2:]
            out = out if c < d else -out
        return out

    def residual(self, values: dict) -> GrassmannElement:
        get = _getter(values)
        if self.kind == "even":
            a, b, c, d = self.indices
            return get("T", a, b) * get("T", c, d) - get("T", a, c) * get("T", b, d) - get("T", a, d) * get("T", c, b)
        a, b, c = self.indices
        return get("T", a, b) * get("th", c) - get("T", a, c) * get("th", b) - get("th", a) * get("T", c, b)


def _getter(values: dict):
    def get(kind, *idx):
        if kind == "th":
            name = TH(idx[0])
            if name not in values:
                raise KeyError(name)
            return values[name]
        a, b = idx
        name = T(a, b)
        if name not in values:
            raise KeyError(name)
        v = values[name]
        return v if a < b else -v

    return get


# clusters and mutations


@dataclass(frozen=True)
class ClusterLabel:
    """Cluster contents without values: diagonals and odd indices."""

    even: frozenset  # of (a, b) with a < b
    odd: frozenset  # of ints

    @classmethod
    def make(cls, diagonals, odd) -> ClusterLabel:
        return cls(frozenset(tuple(sorted(d)) for d in diagonals), frozenset(odd))

    @property
    def carrier(self) -> tuple:
        pair = tuple(sorted(self.odd))
        if pair not in self.even:
            raise ClusterError(f"odd variables {pair} do not sit on a cluster diagonal")
        return pair

    def even_names(self):
        return sorted(T(*d) for d in self.even)

    def odd_names(self):
        return [TH(a) for a in sorted(self.odd)]

    def names(self):
        return self.even_names() + self.odd_names()

    def __str__(self):
        return "(" + ", ".join(self.even_names()) + " | " + ", ".join(self.odd_names()) + ")"


@dataclass(frozen=True)
class SuperCluster:
    label: ClusterLabel
    stable: tuple
    assignment: dict = field(hash=False, compare=False)

    def value(self, name: str) -> GrassmannElement:
        return self.assignment[name]

    def __str__(self):
        return str(self.label)

    def same_values(self, other: SuperCluster) -> bool:
        return self.label == other.label and self.assignment == other.assignment


@dataclass(frozen=True)
class Mutation:
    kind: str  # "even" or "odd"
    source: ClusterLabel
    target: ClusterLabel
    pivot: str
    outgoing: tuple
    incoming: tuple
    relations: tuple

    def __str__(self):
        ex = ",".join(self.outgoing) + " -> " + ",".join(self.incoming)
        return f"{self.kind} mutation {self.source} -> {self.target} (pivot {self.pivot}; {ex})"


def _even_mutation(src: ClusterLabel, tgt: ClusterLabel, n: int) -> Mutation | None:
    gone = src.even - tgt.even
    new = tgt.even - src.even
    if len(gone) != 1 or len(new) != 1:
        return None
    (a, b), (c, d) = next(iter(gone)), next(iter(new))
    if {a, b} & {c, d} or src.carrier != (a, b) or tgt.carrier != (c, d):
        return None
    rels = (Relation("even", (a, b, c, d)), Relation("odd", (a, b, c)), Relation("odd", (a, b, d)))
    return Mutation("even", src, tgt, T(a, b), (T(a, b), TH(a), TH(b)), (T(c, d), TH(c), TH(d)), rels)


def _odd_mutation(src: ClusterLabel, tgt: ClusterLabel, n: int) -> Mutation | None:
    if src.even != tgt.even or len(src.odd & tgt.odd) != 1:
        return None
    (shared,) = src.odd & tgt.odd
    (b,) = src.odd - tgt.odd
    (c,) = tgt.odd - src.odd
    rel = Relation("odd", (shared, b, c))
    return Mutation("odd", src, tgt, T(shared, b), (TH(b),), (TH(c),), (rel,))


@dataclass
class MutationGraph:
    n: int
    vertices: list
    edges: list
    stable: tuple

    def out_edges(self, label: ClusterLabel):
        return [e for e in self.edges if e.source == label]

    def find(self, label: ClusterLabel, kind: str, key: str) -> Mutation:
        """The mutation out of label with the given pivot (even) or exchanged pair (odd)."""
        for e in self.out_edges(label):
            if e.kind != kind:
                continue
            if kind == "even" and e.pivot == key:
                return e
            if kind == "odd" and _pair_key(e) == key:
                return e
        raise ClusterError(f"no {kind} mutation {key} out of cluster {label}")

    def pairs(self):
        """Undirected mutation pairs (each edge with its inverse), in a stable order."""
        seen, out = set(), []
        for e in self.edges:
            k = frozenset((e.source, e.target))
            if k not in seen:
                seen.add(k)
                out.append(e)
        return out

    def inverse(self, m: Mutation) -> Mutation:
        for e in self.edges:
            if e.source == m.target and e.target == m.source and e.kind == m.kind:
                return e
        raise ClusterError(f"mutation {m} has no inverse")

    def variables(self):
        names = set(self.stable)
        for v in self.vertices:
            names.update(v.names())
        return sorted(names, key=_symbol_key)


def _pair_key(m: Mutation) -> str:
    return "".join(sorted(m.outgoing + m.incoming, key=_symbol_key))


def _symbol_key(name):
    p = parse_symbol(name)
    return (0,) + p[1:] if p[0] == "T" else (1, p[1])


def sort_symbols(names) -> list:
    """T variables by index pair, then theta variables by index."""
    return sorted(names, key=_symbol_key)


def build_graph(n: int, clusters, stable) -> MutationGraph:
    """Mutation graph on the listed clusters; edges follow the even/odd rules."""
    labels = [ClusterLabel.make(d, o) for d, o in clusters]
    for lab in labels:
        lab.carrier  # raises unless the odd pair sits on a diagonal
    edges = []
    for s in labels:
        for t in labels:
            if s == t:
                continue
            m = _even_mutation(s, t, n) or _odd_mutation(s, t, n)
            if m is not None:
                edges.append(m)
    stable = tuple(T(a, b) for a, b in stable)
    g = MutationGraph(n, labels, edges, stable)
    for e in edges:
        g.inverse(e)
        if e.pivot in stable or e.pivot not in e.source.even_names():
            raise ClusterError(f"mutation {e} divides by a non-cluster variable")
    return g


def _sides(n):
    return [(a, a + 1) for a in range(1, n)] + [(1, n)]


def build_g2_41() -> MutationGraph:
    """G_2(4|1): clusters (T13 | th1, th3) and (T24 | th2, th4)."""
    return build_graph(4, [([(1, 3)], (1, 3)), ([(2, 4)], (2, 4))], _sides(4))


G2_51_CLUSTERS = [
    ([(1, 3), (1, 4)], (1, 3)),
    ([(1, 3), (3, 5)], (3, 5)),
    ([(2, 5), (3, 5)], (2, 5)),
    ([(2, 4), (2, 5)], (2, 4)),
    ([(1, 4), (2, 4)], (1, 4)),
    ([(1, 3), (1, 4)], (1, 4)),
    ([(1, 3), (3, 5)], (1, 3)),
    ([(2, 5), (3, 5)], (3, 5)),
    ([(2, 4), (2, 5)], (2, 5)),
    ([(1, 4), (2, 4)], (2, 4)),
]


def build_g2_51() -> MutationGraph:
    """G_2(5|1): ten clusters, two for each triangulation of the pentagon."""
    g = build_graph(5, G2_51_CLUSTERS, _sides(5))
    for v in g.vertices:
        kinds = sorted(e.kind for e in g.out_edges(v))
        if kinds != ["even", "odd"]:
            raise ClusterError(f"cluster {v} has mutations {kinds}")
    return g


def build_case(case: str) -> MutationGraph:
    builders = {"4_1": build_g2_41, "5_1": build_g2_51}
    if case not in builders:
        raise ValueError(f"unknown case {case!r}; expected 4_1 or 5_1")
    return builders[case]()


# evaluation


def make_cluster(graph: MutationGraph, label: ClusterLabel, values: dict) -> SuperCluster:
    """Attach values (name -> element) for the cluster variables and the stable ones."""
    if label not in graph.vertices:
        raise ClusterError(f"{label} is not a cluster of this graph")
    needed = label.names() + list(graph.stable)
    missing = [x for x in needed if x not in values]
    if missing:
        raise ClusterError(f"missing values for {', '.join(missing)}")
    for x in label.even_names():
        if not values[x].body:
            raise ClusterError(f"cluster variable {x} is not invertible")
    return SuperCluster(label, graph.stable, {x: values[x] for x in needed})


def mutate(state: SuperCluster, m: Mutation, trace: list | None = None) -> SuperCluster:
    """Apply m: solve its exchange identities for the incoming variables."""
    if state.label != m.source:
        raise ClusterError(f"mutation starts at {m.source}, state is {state.label}")
    values = dict(state.assignment)
    divisors = []
    new = {}
    try:
        for rel in m.relations:
            new[rel.unknown] = rel.solve(values, divisors)
    except NotInvertible as exc:
        raise ClusterError(str(exc)) from None
    if set(divisors) != {m.pivot}:
        raise ClusterError(f"mutation divided by {divisors}, expected only {m.pivot}")
    if trace is not None:
        trace.extend(divisors)
    for x in m.outgoing:
        values.pop(x, None)
    values.update(new)
    return SuperCluster(m.target, state.stable, values)


def parse_walk(text: str):
    """'even:T14,odd:th3th4' -> [('even', 'T14'), ('odd', 'th3th4')]."""
    steps = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        kind, _, key = part.partition(":")
        kind = kind.strip()
        if kind not in ("even", "odd") or not key:
            raise ValueError(f"bad walk step {part!r}; expected even:Tab or odd:thXthY")
        key = key.strip()
        if kind == "odd":
            names = re.findall(r"th\d+", key)
            if len(names) != 2 or "".join(names) != key:
                raise ValueError(f"bad odd step {part!r}")
            key = "".join(sorted(names, key=_symbol_key))
        else:
            parse_symbol(key)
        steps.append((kind, key))
    return steps


def walk(graph: MutationGraph, state: SuperCluster, steps) -> list:
    """States visited along a sequence of (kind, key) steps, starting with state."""
    if isinstance(steps, str):
        steps = parse_walk(steps)
    out = [state]
    for kind, key in steps:
        m = graph.find(out[-1].label, kind, key)
        out.append(mutate(out[-1], m))
    return out


@dataclass
class Generated:
    values: dict
    derivations: dict  # name -> relation used (or "seed")
    conflicts: list


def generate_all(state: SuperCluster, graph: MutationGraph, strict: bool = True) -> Generated:
    """Every variable reachable by mutations from state, with the relation used for each.

    A variable reached along two paths with different values is a conflict;
    with strict=True conflicts raise ClusterError.
    """
    values = dict(state.assignment)
    how = {x: "seed" for x in values}
    conflicts = []
    seen = {state.label}
    queue = deque([state])
    while queue:
        cur = queue.popleft()
        for m in graph.out_edges(cur.label):
            nxt = mutate(cur, m)
            for rel in m.relations:
                x = rel.unknown
                v = nxt.assignment[x]
                if x in values and values[x] != v:
                    conflicts.append(x)
                elif x not in values:
                    values[x] = v
                    how[x] = str(rel)
            if m.target not in seen:
                seen.add(m.target)
                queue.append(nxt)
    if conflicts and strict:
        raise ClusterError(f"inconsistent seed: conflicting values for {', '.join(sorted(set(conflicts)))}")
    order = sorted(values, key=_symbol_key)
    return Generated({x: values[x] for x in order}, {x: how[x] for x in order}, conflicts)


def relation_violations(values: dict, n: int) -> list:
    """Three-term even and odd identities among T^{ab}, theta^a that fail on values."""
    import itertools

    bad = []
    for a, b, c, d in itertools.permutations(range(1, n + 1), 4):
        rel = Relation("even", (a, b, c, d))
        try:
            if rel.residual(values):
                bad.append(str(rel))
        except KeyError:
            pass
    for a, b, c in itertools.permutations(range(1, n + 1), 3):
        rel = Relation("odd", (a, b, c))
        try:
            if rel.residual(values):
                bad.append(str(rel))
        except KeyError:
            pass
    return bad


# bridges to planes


def values_from_plane(U) -> dict:
    """T^{ab} = u^{ab} and theta^a = u^{a 1^} for a 2|0-plane U in n|1-space."""
    from .plucker_algebraic import E, O
    from .plucker_general import essential_coordinates

    if tuple(U.row_shape) != (2, 0) or U.col_shape.odd != 1:
        raise ValueError("expected a 2|0-plane in an n|1-space")
    c = essential_coordinates(U)
    n = U.col_shape.even
    out = {}
    for a in range(1, n + 1):
        out[TH(a)] = c.value((E(a), O(1)), ())
        for b in range(a + 1, n + 1):
            out[T(a, b)] = c.value((E(a), E(b)), ())
    return out


def coords_from_values(values: dict, n: int, gens: int):
    """Essential coordinates of a 2|0-plane in n|1-space from T and theta values."""
    from .plucker_algebraic import E, O
    from .plucker_general import EssentialCoords
    from .smatrix import SuperShape

    c = EssentialCoords(SuperShape(n, 1), SuperShape(2, 0), gens)
    for a in range(1, n + 1):
        c.u_ghost[((E(a), O(1)), ())] = values.get(TH(a), zero(gens))
        for b in range(a + 1, n + 1):
            c.u[((E(a), E(b)), ())] = values[T(a, b)]
    return c


# rendering


def export_dot(graph: MutationGraph | None) -> str:
    """Graphviz text: solid edges for even mutations, dashed for odd ones."""
    lines = ["graph mutations {"]
    if graph is not None:
        ids = {v: f"c{i}" for i, v in enumerate(graph.vertices)}
        for v in graph.vertices:
            lines.append(f'  {ids[v]} [label="{v}"];')
        for e in graph.pairs():
            if e.kind == "even":
                back = graph.inverse(e).pivot
                lines.append(f'  {ids[e.source]} -- {ids[e.target]} [style=solid, label="{e.pivot}/{back}"];')
            else:
                label = ",".join(sorted(e.outgoing + e.incoming, key=_symbol_key))
                lines.append(f'  {ids[e.source]} -- {ids[e.target]} [style=dashed, label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "ClusterError",
    "ClusterLabel",
    "Generated",
    "Mutation",
    "MutationGraph",
    "Relation",
    "SuperCluster",
    "T",
    "TH",
    "build_case",
    "build_g2_41",
    "build_g2_51",
    "coords_from_values",
    "export_dot",
    "generate_all",
    "make_cluster",
    "mutate",
    "parse_symbol",
    "parse_walk",
    "relation_violations",
    "sort_symbols",
    "values_from_plane",
    "walk",
]
