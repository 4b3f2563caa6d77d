import random

import pytest
from conftest import seeds
from hypothesis import given
from hypothesis import strategies as st

from superplucker.acceptance import generic_plane, random_cluster_values, theta1_chain
from superplucker.galgebra import GrassmannElement, one
from superplucker.grassmannian import random_plane
from superplucker.plucker_general import relations_check_r0
from superplucker.clusters import (
    ClusterError,
    ClusterLabel,
    Relation,
    SuperCluster,
    build_case,
    build_g2_41,
    build_g2_51,
    coords_from_values,
    export_dot,
    generate_all,
    make_cluster,
    mutate,
    parse_symbol,
    parse_walk,
    relation_violations,
    sort_symbols,
    values_from_plane,
    walk,
)

G41, G51 = build_g2_41(), build_g2_51()
L13 = ClusterLabel.make([(1, 3)], (1, 3))
L24 = ClusterLabel.make([(2, 4)], (2, 4))
L5 = ClusterLabel.make([(1, 3), (1, 4)], (1, 4))
GENS = 4


def g(i):
    return GrassmannElement.generator(i, GENS)


def plane_state(graph, label, seed=None):
    U = generic_plane(graph.n) if seed is None else random_plane((2, 0), (graph.n, 1), GENS, seed=seed)
    return U, make_cluster(graph, label, values_from_plane(U))


def safe_mutate(state, m):
    try:
        return mutate(state, m)
    except ClusterError:
        return None


def test_symbols():
    assert parse_symbol("T13") == ("T", 1, 3)
    assert parse_symbol("th4") == ("th", 4)
    assert sort_symbols(["th1", "T24", "T13"]) == ["T13", "T24", "th1"]
    with pytest.raises(ValueError):
        parse_symbol("T11")
    assert parse_walk("even:T14, odd:th4th3") == [("even", "T14"), ("odd", "th3th4")]
    with pytest.raises(ValueError):
        parse_walk("sideways:T14")


def test_four_one_graph_shape():
    assert G41.vertices == [L13, L24]
    assert len(G41.pairs()) == 1 and all(e.kind == "even" for e in G41.edges)
    assert set(G41.stable) == {"T12", "T23", "T34", "T14"}


def test_four_one_mutation_values():
    vals = {x: one(GENS) for x in G41.stable}
    vals.update(T13=one(GENS) * 2, th1=g(1), th3=g(2))
    trace = []
    out = mutate(make_cluster(G41, L13, vals), G41.edges[0], trace)
    assert out.label == L24
    assert out.value("T24") == 1
    assert out.value("th2") == (g(1) + g(2)) * GrassmannElement.scalar(1, GENS) / 2
    assert set(trace) == {"T13"}


def test_five_one_graph_shape():
    assert len(G51.vertices) == 10
    for v in G51.vertices:
        assert sorted(e.kind for e in G51.out_edges(v)) == ["even", "odd"]
    odd = G51.find(L5, "odd", "th3th4")
    assert odd.target == ClusterLabel.make([(1, 3), (1, 4)], (1, 3))
    even = G51.find(L5, "even", "T14")
    assert even.target == ClusterLabel.make([(1, 3), (3, 5)], (3, 5))
    with pytest.raises(ClusterError):
        G51.find(L5, "even", "T13")


def test_odd_edges_pair_clusters_with_same_diagonals():
    for e in G51.edges:
        if e.kind == "odd":
            assert e.source.even == e.target.even
        else:
            assert e.source.even != e.target.even
    assert len([e for e in G51.pairs() if e.kind == "odd"]) == 5


@given(seeds, st.sampled_from(["4_1", "5_1"]))
def test_mutation_then_inverse_is_identity(seed, case):
    graph = build_case(case)
    rng = random.Random(seed)
    label = rng.choice(graph.vertices)
    state = make_cluster(graph, label, random_cluster_values(graph, label, rng, GENS))
    for m in graph.out_edges(label):
        nxt = safe_mutate(state, m)
        if nxt is None:
            continue
        back = safe_mutate(nxt, graph.inverse(m))
        if back is not None:
            assert back.same_values(state)


@given(seeds)
def test_theta_one_chain(seed):
    rng = random.Random(seed)
    vals = random_cluster_values(G41, L13, rng, GENS)
    state = make_cluster(G41, L13, vals)
    m = G41.edges[0] if G41.edges[0].source == L13 else G41.edges[1]
    mid = safe_mutate(state, m)
    if mid is None:
        return
    back = safe_mutate(mid, G41.inverse(m))
    if back is None:
        return
    assert back.value("th1") == theta1_chain(vals) == vals["th1"]


def test_odd_mutation_and_its_inverse():
    _, state = plane_state(G51, L5)
    m = G51.find(L5, "odd", "th3th4")
    mid = mutate(state, m)
    assert set(mid.label.odd) == {1, 3}
    assert mutate(mid, G51.inverse(m)).same_values(state)


@pytest.mark.parametrize("case", ["4_1", "5_1"])
def test_mutations_agree_with_plane_minors(case):
    graph = build_case(case)
    U = generic_plane(graph.n)
    minors = values_from_plane(U)
    for label in graph.vertices:
        state = make_cluster(graph, label, minors)
        for m in graph.out_edges(label):
            out = mutate(state, m)
            for x in m.incoming:
                assert out.value(x) == minors[x]


@pytest.mark.parametrize("case,counts", [("4_1", (6, 4)), ("5_1", (10, 5))])
def test_generate_all_recovers_every_variable(case, counts):
    graph = build_case(case)
    U = generic_plane(graph.n)
    minors = values_from_plane(U)
    for label in graph.vertices:
        gen = generate_all(make_cluster(graph, label, minors), graph)
        assert gen.values == minors and not gen.conflicts
        assert sum(x.startswith("T") for x in gen.values) == counts[0]
        assert sum(x.startswith("th") for x in gen.values) == counts[1]
        assert all(gen.derivations[x] == "seed" for x in label.names())


def test_generate_all_from_trivial_seed():
    vals = {x: one(GENS) for x in list(G41.stable) + ["T13"]}
    vals.update(th1=g(1) * 0, th3=g(1) * 0)
    gen = generate_all(make_cluster(G41, L13, vals), G41)
    assert gen.values["T24"] == 2
    assert gen.values["th2"] == 0 and gen.values["th4"] == 0


def test_generate_all_reports_inconsistent_seed():
    # a value outside the cluster that disagrees with what mutations produce
    _, state = plane_state(G51, L5)
    bad = SuperCluster(state.label, state.stable, {**state.assignment, "T24": one(GENS) * 7})
    with pytest.raises(ClusterError):
        generate_all(bad, G51)
    assert set(generate_all(bad, G51, strict=False).conflicts) == {"T24"}


def test_zero_pivot_is_rejected():
    vals = {x: one(GENS) for x in G41.stable}
    vals.update(T13=g(1) * g(2), th1=g(1), th3=g(2))
    with pytest.raises(ClusterError):
        make_cluster(G41, L13, vals)


def test_never_divides_by_stable_variables():
    for graph in (G41, G51):
        U = generic_plane(graph.n)
        minors = values_from_plane(U)
        for m in graph.edges:
            trace = []
            mutate(make_cluster(graph, m.source, minors), m, trace)
            assert set(trace) == {m.pivot}
            assert m.pivot not in graph.stable


@given(seeds, st.lists(st.integers(0, 1), min_size=1, max_size=8))
def test_walks_from_plane_keep_relations(seed, choices):
    rng = random.Random(seed)
    U = random_plane((2, 0), (5, 1), GENS, rng=rng)
    minors = values_from_plane(U)
    if any(not v.body for x, v in minors.items() if x.startswith("T")):
        return
    state = make_cluster(G51, L5, minors)
    for c in choices:
        m = sorted(G51.out_edges(state.label), key=lambda e: e.kind)[c]
        nxt = safe_mutate(state, m)
        if nxt is None:
            break
        state = nxt
    for x, v in state.assignment.items():
        assert v == minors[x]
    gen = generate_all(state, G51, strict=False)
    assert not relation_violations(gen.values, 5)
    assert relations_check_r0(coords_from_values(gen.values, 5, GENS)).holds


def test_walk_by_keys():
    _, state = plane_state(G51, L5)
    states = walk(G51, state, "even:T14,odd:th1th5")
    assert [s.label for s in states][1] == ClusterLabel.make([(1, 3), (3, 5)], (3, 5))
    assert len(states) == 3


def test_relation_templates():
    rel = Relation("even", (1, 3, 2, 4))
    assert rel.pivot == "T13" and rel.unknown == "T24"
    assert str(rel) == "T13*T24 = T12*T34 + T14*T23"
    odd = Relation("odd", (1, 3, 2))
    assert odd.unknown == "th2" and odd.inputs() == {"T12", "th3", "th1", "T23"}


def test_dot_output():
    dot = export_dot(G41)
    assert dot.count("[label=") == 2
    assert dot.count("style=solid") == 1 and 'label="T13/T24"' in dot
    dot5 = export_dot(G51)
    assert dot5.count("[label=") == 10
    degree = {}
    for line in dot5.splitlines():
        if " -- " in line:
            a, b = line.split("[")[0].split(" -- ")
            for x in (a.strip(), b.strip()):
                degree[x] = degree.get(x, 0) + 1
    assert len(degree) == 10 and set(degree.values()) == {2}
    assert export_dot(None) == "graph mutations {\n}\n"
    assert export_dot(G51) == dot5
