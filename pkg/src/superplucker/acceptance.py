"""Acceptance runner: nine end-to-end checks, each reported as one pass/fail line.

Every check is exact.  Sample counts are the full ones by default; quick=True
shrinks them for a fast smoke run (the `selftest --quick` command).
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from .clusters import (
    ClusterError,
    ClusterLabel,
    T,
    TH,
    build_g2_41,
    build_g2_51,
    generate_all,
    make_cluster,
    mutate,
    values_from_plane,
)
from .galgebra import EVEN, ODD, GrassmannElement, one, zero
from .grassmannian import (
    ChartIndex,
    admissible_charts,
    charts,
    dimension,
    free_coordinate_count,
    normalize_to_chart,
    random_element,
    random_gl,
    random_plane,
)
from .plucker_algebraic import (
    E,
    Multivector,
    O,
    canonical_tuples,
    k2_family_check,
    khudaverdian_check,
    plucker_relations_check,
    quadric_span_ranks,
    reduce_to_essential,
    search_six_not_four_witness,
    tuple_parity,
    wedge_rows,
)
from .plucker_general import (
    ALTSP_FAMILIES,
    SP_FAMILIES,
    CovectorArray,
    essential_coordinates,
    inverse_plucker,
    plucker_dual_eval,
    plucker_eval,
    relations_check_11,
    relations_check_r0,
    relations_check_rs,
)
from .smatrix import SuperMatrix, ber, parity_reverse, schur_forms


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number}. {self.name} ({self.seconds:.2f} s): {self.detail}"


def _scaled(full: int, quick: bool, small: int) -> int:
    return small if quick else full


# 1. the worked 1|1 in 2|2 table


def fixture_plane(x=2, y=3) -> SuperMatrix:
    """[[x, 1, xi, 0], [eta, 0, y, 1]] with xi = t1, eta = t2; columns e, e, o, o."""
    n = 2
    X, Y = GrassmannElement.scalar(x, n), GrassmannElement.scalar(y, n)
    xi, eta = GrassmannElement.generator(1, n), GrassmannElement.generator(2, n)
    return SuperMatrix([EVEN, ODD], [EVEN, EVEN, ODD, ODD], [[X, one(n), xi, zero(n)], [eta, zero(n), Y, one(n)]], n)


def fixture_table(x=2, y=3):
    """The sixteen closed forms, written with plain element arithmetic.

    Keys: ("pl" or "pl*", top index, bottom index).
    """
    n = 2
    X, Y = GrassmannElement.scalar(x, n), GrassmannElement.scalar(y, n)
    xi, eta = GrassmannElement.generator(1, n), GrassmannElement.generator(2, n)
    z = zero(n)
    return {
        ("pl", E(1), O(1)): (X - xi * Y.inverse() * eta) / Y,
        ("pl", E(1), O(2)): X,
        ("pl", E(2), O(1)): Y.inverse(),
        ("pl", E(2), O(2)): one(n),
        ("pl", O(1), O(1)): z,
        ("pl", O(1), O(2)): xi,
        ("pl", O(2), O(1)): -xi / (Y * Y),
        ("pl", O(2), O(2)): z,
        ("pl*", E(1), O(1)): (Y - eta * X.inverse() * xi) / X,
        ("pl*", E(1), O(2)): X.inverse(),
        ("pl*", E(2), O(1)): Y,
        ("pl*", E(2), O(2)): one(n),
        ("pl*", E(1), E(1)): z,
        ("pl*", E(1), E(2)): -eta / (X * X),
        ("pl*", E(2), E(1)): eta,
        ("pl*", E(2), E(2)): z,
    }


def criterion_1(quick=False) -> tuple[bool, str]:
    U = fixture_plane()
    bad = []
    table = fixture_table()
    for (kind, top, bottom), expected in table.items():
        P = CovectorArray.basis(U.cols, (top,), (bottom,), U.n)
        got = plucker_eval(U, P) if kind == "pl" else plucker_dual_eval(U, P)
        if got != expected:
            bad.append(f"{kind}({top}|{bottom}) = {got}, expected {expected}")
    return not bad, f"{len(table) - len(bad)}/{len(table)} evaluations match" + ("; " + "; ".join(bad) if bad else "")


# 2. Berezinian laws


def criterion_2(quick=False) -> tuple[bool, str]:
    per_shape = _scaled(500, quick, 20)
    rng = random.Random(2)
    failures, checked, both_forms = [], 0, 0
    for r, s in itertools.product(range(4), repeat=2):
        if r + s == 0:
            continue
        prev = random_gl((r, s), 6, rng=rng)
        bprev = ber(prev)
        for _ in range(per_shape):
            A = random_gl((r, s), 6, rng=rng)
            try:
                bA = ber(A, cross_check=True)
                if ber(prev @ A, cross_check=True) != bprev * bA:
                    failures.append(f"{r}|{s} product")
                if ber(parity_reverse(A), cross_check=True) * bA != 1:
                    failures.append(f"{r}|{s} parity reversal")
            except AssertionError:
                failures.append(f"{r}|{s} Schur forms disagree")
                continue
            f1, f2 = schur_forms(A)
            both_forms += f1 is not None and f2 is not None
            checked += 1
            prev, bprev = A, bA
    detail = f"{checked} matrices over 15 shapes, {both_forms} with both Schur forms compared, {len(failures)} failures"
    return not failures, detail + (f" (first: {failures[0]})" if failures else "")


# 3 and 4. relations on wedges of random k-planes


def _k_plane_samples(count: int, gens=4, seed=3):
    rng = random.Random(seed)
    ambients = {k: [(n, m) for n in range(k, 6) for m in range(0, 3)] for k in (2, 3)}
    out = []
    for i in range(count):
        k = 2 + i % 2
        amb = ambients[k][(i // 2) % len(ambients[k])]
        U = random_plane((k, 0), amb, gens, rng=rng)
        out.append((k, amb, wedge_rows(U)))
    return out


def criterion_3(quick=False) -> tuple[bool, str]:
    samples = _k_plane_samples(_scaled(200, quick, 12))
    bad_rel, bad_fam = 0, 0
    for k, _, Tk in samples:
        if plucker_relations_check(Tk):
            bad_rel += 1
        if k == 2 and any(k2_family_check(Tk).values()):
            bad_fam += 1
    n2 = sum(1 for s in samples if s[0] == 2)
    return not (bad_rel or bad_fam), (
        f"{len(samples)} planes (k=2: {n2}, k=3: {len(samples) - n2}); "
        f"{bad_rel} with relation violations, {bad_fam} with bivector family violations"
    )


def _even_pivot(Tk: Multivector):
    n = Tk.ambient.even
    for a, b in itertools.combinations(range(1, n + 1), 2):
        if Tk.component((E(a), E(b))).body:
            return a, b
    return None


def criterion_4(quick=False) -> tuple[bool, str]:
    samples = [s for s in _k_plane_samples(_scaled(200, quick, 12)) if s[0] == 2]
    bad = []
    for _, amb, Tk in samples:
        rep = reduce_to_essential(Tk, _even_pivot(Tk))
        if not rep.ok:
            bad.append(amb)
    return not bad, f"{len(samples)} bivectors reduced and rebuilt exactly, {len(bad)} failures"


# 5. embedding roundtrip


def criterion_5(quick=False) -> tuple[bool, str]:
    per_shape = _scaled(100, quick, 6)
    rng = random.Random(5)
    total_charts, bad = 0, []
    for shape in ((2, 0), (1, 1), (2, 1)):
        ambients = [(n, m) for n in range(shape[0], 5) for m in range(shape[1], 4)]
        for i in range(per_shape):
            amb = ambients[i % len(ambients)]
            U = random_plane(shape, amb, 4, rng=rng)
            coords = essential_coordinates(U)
            for c in admissible_charts(U):
                total_charts += 1
                if inverse_plucker(coords, c) != normalize_to_chart(U, c):
                    bad.append((shape, amb, str(c)))
    return not bad, f"{3 * per_shape} planes, {total_charts} admissible charts, {len(bad)} mismatches"


# 6. relation families on essential coordinates


def _perturbed(coords, rng):
    name = rng.choice([f for f in ("u_ghost", "ustar_ghost") if coords.family(f)])
    key = sorted(k for k, v in coords.family(name).items() if v is not None)[0]
    v = coords.family(name)[key]
    return coords.replaced(name, key, v + GrassmannElement.generator(rng.randint(1, coords.gens), coords.gens))


def criterion_6(quick=False) -> tuple[bool, str]:
    count = _scaled(20, quick, 3)
    rng = random.Random(6)
    problems, inconclusive = [], 0
    for r, amb in [(2, (4, 2)), (2, (5, 1)), (3, (4, 2)), (3, (5, 1))]:
        for _ in range(count):
            rep = relations_check_r0(essential_coordinates(random_plane((r, 0), amb, 4, rng=rng)))
            if not rep.holds:
                problems.append(f"r0 {r}|0 in {amb}")
    agreements, rejected = 0, 0
    for amb in [(2, 2), (3, 2), (3, 3)]:
        for _ in range(count):
            c = essential_coordinates(random_plane((1, 1), amb, 4, rng=rng))
            for data, expect in ((c, True), (_perturbed(c, rng), None)):
                rep = relations_check_11(data)
                sp = all(rep.families[f].holds for f in SP_FAMILIES)
                alt = all(rep.families[f].holds for f in ALTSP_FAMILIES)
                if sp != alt:
                    problems.append(f"sp/altsp verdicts differ in {amb}")
                elif expect and not sp:
                    problems.append(f"1|1 relations fail in {amb}")
                else:
                    agreements += 1
                    rejected += expect is None and not sp
    for amb in [(3, 2), (3, 3), (4, 2)]:
        for _ in range(count):
            rep = relations_check_rs(essential_coordinates(random_plane((2, 1), amb, 4, rng=rng)))
            inconclusive += sum(len(f.inconclusive) for f in rep.families.values())
            if not rep.holds:
                problems.append(f"rs 2|1 in {amb}")
    detail = (
        f"r0 on {4 * count} planes, 1|1 verdicts agree on {agreements}/{6 * count} "
        f"({rejected} of {3 * count} perturbed samples rejected by both), "
        f"rs on {3 * count} planes with {inconclusive} inconclusive tuples; {len(problems)} problems"
    )
    return not problems, detail + (f" (first: {problems[0]})" if problems else "")


# 7. Khudaverdian identities


def _perturb_multivector(Tk: Multivector, rng) -> Multivector:
    t = rng.choice(list(canonical_tuples(Tk.degree, Tk.ambient)))
    d = random_element(rng, Tk.gens, tuple_parity(t))
    if not d:
        d = GrassmannElement.scalar(1, Tk.gens) if tuple_parity(t) == EVEN else GrassmannElement.generator(1, Tk.gens)
    return Tk + Multivector(Tk.degree, Tk.ambient, Tk.gens, {t: d})


def khudaverdian_k2_agreement(count: int, seed=7):
    rng = random.Random(seed)
    ambients = [(2, 1), (3, 1), (2, 2), (3, 2)]
    disagreeing, violated = 0, 0
    for i in range(count):
        U = random_plane((2, 0), ambients[i % len(ambients)], 3, rng=rng)
        Tk = wedge_rows(U)
        if i % 2:
            Tk = _perturb_multivector(Tk, rng)
        rep = khudaverdian_check(Tk, 2)
        disagreeing += bool(rep.disagreements)
        violated += bool(rep.violations)
    return disagreeing, violated


def criterion_7(quick=False) -> tuple[bool, str]:
    count = _scaled(500, quick, 16)
    disagreeing, violated = khudaverdian_k2_agreement(count)
    rng = random.Random(77)
    k3_count = _scaled(20, quick, 3)
    k3_bad = 0
    for i in range(k3_count):
        amb = [(4, 0), (5, 0), (4, 1), (6, 0)][i % 4]
        if khudaverdian_check(wedge_rows(random_plane((3, 0), amb, 3, rng=rng)), 3).violations:
            k3_bad += 1
    witness = search_six_not_four_witness(6, trials=_scaled(2000, quick, 200))
    ranks = quadric_span_ranks(6)
    parts = [
        f"k=2: {count} bivectors, {disagreeing} verdict disagreements ({violated} violating)",
        f"k=3: {k3_bad}/{k3_count} simple trivectors violate the six-term identity",
        "witness: " + ("found" if witness is not None else "none found")
        + f" (quadric span ranks six={ranks['six']}, four={ranks['four']}, both={ranks['six_and_four']})",
    ]
    ok = disagreeing == 0 and k3_bad == 0 and witness is not None
    return ok, "; ".join(parts)


# 8. cluster structures


def generic_plane(n: int, gens: int = 4) -> SuperMatrix:
    """A 2|0-plane in n|1-space whose 2x2 even minors all have nonzero body."""
    G = lambda i: GrassmannElement.generator(i, gens)  # noqa: E731
    S = lambda v: GrassmannElement.scalar(v, gens)  # noqa: E731
    row1 = [S(1) + G(1) * G(2)] + [S(j) for j in range(2, n + 1)] + [G(3)]
    row2 = [S(1), S(4) + G(2) * G(4)] + [S(j * j) for j in range(3, n + 1)] + [G(4) + G(1)]
    return SuperMatrix([EVEN, EVEN], [EVEN] * n + [ODD], [row1, row2], gens)


def random_cluster_values(graph, label, rng, gens=4) -> dict:
    """Arbitrary values for a cluster and the stable variables (no relation imposed)."""
    vals = {}
    for name in label.names() + list(graph.stable):
        parity = ODD if name.startswith("th") else EVEN
        vals[name] = random_element(rng, gens, parity, nonzero_body=True)
    return vals


def theta1_chain(vals: dict) -> GrassmannElement:
    """theta^1 after going (T13 | th1, th3) -> (T24 | th2, th4) -> back, written out by hand."""
    t12, t14, t23, t34 = vals["T12"], vals["T14"], vals["T23"], vals["T34"]
    t13, th1, th3 = vals["T13"], vals["th1"], vals["th3"]
    t24 = (t12 * t34 + t14 * t23) / t13
    th2 = (t12 * th3 + th1 * t23) / t13
    th4 = (t14 * th3 - th1 * t34) / t13
    return (-t12 * th4 + th2 * t14) / t24


def criterion_8(quick=False) -> tuple[bool, str]:
    rng = random.Random(8)
    problems = []
    g4, g5 = build_g2_41(), build_g2_51()
    if len(g4.vertices) != 2:
        problems.append(f"4|1 has {len(g4.vertices)} clusters")
    if len(g5.vertices) != 10:
        problems.append(f"5|1 has {len(g5.vertices)} clusters")
    for v in g5.vertices:
        kinds = sorted(e.kind for e in g5.out_edges(v))
        if kinds != ["even", "odd"]:
            problems.append(f"{v} has mutations {kinds}")
    roundtrips = 0
    for g in (g4, g5):
        for m in g.edges:
            done = 0
            while done < _scaled(5, quick, 1):
                s = make_cluster(g, m.source, random_cluster_values(g, m.source, rng))
                try:
                    back = mutate(mutate(s, m), g.inverse(m))
                except ClusterError:
                    continue  # the new even variable happened to have zero body
                done += 1
                roundtrips += 1
                if not back.same_values(s):
                    problems.append(f"{m} then its inverse changes the assignment")
    chain_ok = 0
    while chain_ok < _scaled(10, quick, 2) and not problems:
        lab = ClusterLabel.make([(1, 3)], (1, 3))
        vals = random_cluster_values(g4, lab, rng)
        s = make_cluster(g4, lab, vals)
        m = g4.out_edges(lab)[0]
        try:
            back = mutate(mutate(s, m), g4.inverse(m))
        except ClusterError:
            continue
        if back.value("th1") == vals["th1"] == theta1_chain(vals):
            chain_ok += 1
        else:
            problems.append("theta^1 chain does not return theta^1")
    for g in (g4, g5):
        U = generic_plane(g.n)
        minors = values_from_plane(U)
        for lab in g.vertices:
            gen = generate_all(make_cluster(g, lab, minors), g)
            if gen.values != minors:
                problems.append(f"generate_all from {lab} misses or changes minors")
    detail = (
        f"{len(g4.vertices)} + {len(g5.vertices)} clusters, {roundtrips} mutation roundtrips, "
        f"theta^1 chain {chain_ok} ok, generation from all 12 seeds; {len(problems)} problems"
    )
    return not problems, detail + (f" (first: {problems[0]})" if problems else "")


# 9. dimension formula


def criterion_9(quick=False) -> tuple[bool, str]:
    rng = random.Random(9)
    bad, shapes = [], 0
    for n, m in itertools.product(range(0, 5), range(0, 4)):
        for r, s in itertools.product(range(n + 1), range(m + 1)):
            shapes += 1
            expect = dimension((r, s), (n, m))
            U = random_plane((r, s), (n, m), 2, rng=rng)
            for c in charts((r, s), (n, m)) if not quick else [ChartIndex(tuple(range(1, r + 1)), tuple(range(1, s + 1)))]:
                if c not in admissible_charts(U):
                    continue
                if free_coordinate_count(normalize_to_chart(U, c), c) != expect:
                    bad.append(f"{r}|{s} in {n}|{m} chart {c}")
    quoted = []
    for n, m in itertools.product(range(2, 5), range(0, 4)):
        if tuple(dimension((2, 0), (n, m))) != (2 * (n - 2), 2 * m):
            quoted.append(f"2|0 in {n}|{m}")
    for n, m in itertools.product(range(1, 5), range(1, 4)):
        if tuple(dimension((1, 1), (n, m))) != (n + m - 2, n + m - 2):
            quoted.append(f"1|1 in {n}|{m}")
    ok = not bad and not quoted
    return ok, f"{shapes} shapes, {len(bad)} chart counts off, {len(quoted)} quoted instances off"


CRITERIA = [
    (1, "fixture Pluecker table", criterion_1),
    (2, "Berezinian laws", criterion_2),
    (3, "relations on wedges of k-planes", criterion_3),
    (4, "reduced bivector relations", criterion_4),
    (5, "embedding roundtrip", criterion_5),
    (6, "essential coordinate relations", criterion_6),
    (7, "Khudaverdian identities", criterion_7),
    (8, "super cluster structures", criterion_8),
    (9, "dimension formula", criterion_9),
]


def run_criterion(number: int, quick: bool = False) -> CriterionResult:
    _, name, fn = CRITERIA[number - 1]
    start = time.perf_counter()
    try:
        passed, detail = fn(quick)
    except Exception as exc:  # a crash is a failure, reported on its line
        passed, detail = False, f"error: {type(exc).__name__}: {exc}"
    return CriterionResult(number, name, passed, detail, time.perf_counter() - start)


def run(quick: bool = False, only=None, echo=None) -> list[CriterionResult]:
    out = []
    for number, _, _ in CRITERIA:
        if only and number not in only:
            continue
        res = run_criterion(number, quick)
        if echo:
            echo(res.line())
        out.append(res)
    return out


__all__ = ["CRITERIA", "CriterionResult", "fixture_plane", "fixture_table", "generic_plane", "run", "run_criterion"]
