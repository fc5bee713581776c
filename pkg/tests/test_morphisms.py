from itertools import product

import pytest

import oracles
from generators import MEDIUM_CONTAINERS, SMALL_CONTAINERS, TG, graph
from nestcond.cra import CLASS, ENC_METHOD, METHOD, build_cra_container, cra_typegraph, default_instance
from nestcond.errors import MorphismError
from nestcond.graphs import (
    GraphMorphism,
    SubgraphRef,
    TypedGraph,
    all_subgraphs,
    compose,
    empty_graph,
    full_subgraph,
    validate_morphism,
)
from nestcond.morphisms import (
    empty_instantiation,
    enumerate_injective_morphisms,
    enumerate_instantiations,
    enumerate_morphism_instantiations,
    extend_to_container,
    instantiate_morphism,
    instantiation_of,
    iter_injective_morphisms,
)

PATTERNS = [
    graph("p0", []),
    graph("p1", [("x", "A")]),
    graph("p2", [("x", "A"), ("y", "B")]),
    graph("p3", [("x", "A"), ("y", "B")], [("k", "h", "x", "y")]),
    graph("p4", [("x", "A")], [("l", "e", "x", "x")]),
    graph("p5", [("x", "A"), ("y", "B")], [("k", "h", "x", "y"), ("k2", "h", "x", "y")]),
    graph("p6", [("x", "A"), ("z", "A")], [("l", "e", "x", "z")]),
    graph("p7", [("x", "A"), ("z", "A"), ("y", "B")]),
]

CRA_T, CRA_P = build_cra_container(default_instance())


def _maps(ms):
    return sorted((dict(m.node_map), dict(m.edge_map)) for m in ms)


def _key(maps):
    return sorted((sorted(n.items()), sorted(e.items())) for n, e in maps)


@pytest.mark.parametrize("host", SMALL_CONTAINERS + MEDIUM_CONTAINERS, ids=lambda g: g.name)
def test_enumeration_matches_brute_force(host):
    for p in PATTERNS:
        found = enumerate_injective_morphisms(p, host)
        assert _key([(dict(m.node_map), dict(m.edge_map)) for m in found]) == _key(oracles.injections(p, host))
        for m in found:
            report = validate_morphism(m)
            assert report.ok and report.injective


def test_enumeration_is_sorted_and_repeatable():
    host = MEDIUM_CONTAINERS[3]
    p = PATTERNS[7]
    first = [tuple(m.node_map[n] for n in sorted(p.nodes)) for m in iter_injective_morphisms(p, host)]
    assert first == sorted(first)
    assert enumerate_injective_morphisms(p, host) == enumerate_injective_morphisms(p, host)


def test_fixed_prefix_restricts():
    host = SMALL_CONTAINERS[4]
    p = PATTERNS[5]
    assert len(enumerate_injective_morphisms(p, host)) == 2
    only = list(iter_injective_morphisms(p, host, fixed_edges={"k": "h2"}))
    assert [dict(m.edge_map) for m in only] == [{"k": "h2", "k2": "h1"}]
    assert list(iter_injective_morphisms(p, host, fixed_nodes={"x": "b1"})) == []


def test_type_graph_mismatch():
    with pytest.raises(MorphismError):
        enumerate_injective_morphisms(PATTERNS[1], empty_graph(cra_typegraph()))


def test_cra_counts():
    tg = cra_typegraph()
    method = TypedGraph.build(tg, [("m", METHOD)])
    owned = TypedGraph.build(tg, [("m", METHOD), ("c", CLASS)], [("k", ENC_METHOD, "c", "m")])
    assert len(enumerate_injective_morphisms(method, CRA_T)) == 3
    assert len(enumerate_injective_morphisms(owned, CRA_T)) == 18
    assert len(enumerate_injective_morphisms(empty_graph(tg), CRA_T)) == 1


def test_two_class_pattern_counts_against_brute_force():
    tg = cra_typegraph()
    twice = TypedGraph.build(tg, [("m", METHOD), ("c1", CLASS), ("c2", CLASS)],
                             [("k1", ENC_METHOD, "c1", "m"), ("k2", ENC_METHOD, "c2", "m")])
    host = SubgraphRef(CRA_T, [n for n in CRA_T.nodes if n != "A1"],
                       [e for e, (_, s, t) in CRA_T.edges.items() if "A1" not in (s, t)]).graph
    ours = enumerate_injective_morphisms(twice, host)
    brute = oracles.injections(twice, host)
    assert len(ours) == len(brute) == 90
    per_m1 = [m for m in ours if m.node_map["m"] == "M1"]
    assert len(per_m1) == 30
    images = {(m.image_node_ids(), m.image_edge_ids()) for m in per_m1}
    assert len(images) == 15


@pytest.mark.parametrize("container", SMALL_CONTAINERS[2:], ids=lambda g: g.name)
def test_instantiations_correspond_to_injections(container):
    for host, p in product(all_subgraphs(container), PATTERNS):
        mus = enumerate_instantiations(p, host)
        qs = enumerate_injective_morphisms(p, host.graph)
        assert len(mus) == len(qs)
        for mu, q in zip(mus, qs):
            assert mu.as_morphism() == q
            assert mu.iso.is_bijective()
            ext = extend_to_container(mu, host)
            assert ext.in_container and ext.target == mu.target


def test_instantiate_morphism_exists_iff_routes_agree():
    container = SMALL_CONTAINERS[4]
    host = full_subgraph(container)
    c0, c1 = PATTERNS[1], PATTERNS[3]
    a = GraphMorphism(c0, c1, {"x": "x"}, {})
    for mu0, mu1 in product(enumerate_instantiations(c0, host), enumerate_instantiations(c1, host)):
        b = instantiate_morphism(a, mu0, mu1)
        agree = mu1.iso.node_map["x"] == mu0.iso.node_map["x"]
        assert (b is not None) == agree
        if b is not None:
            assert b.domain == mu0.target and b.codomain == mu1.target


@pytest.mark.parametrize("container", SMALL_CONTAINERS[2:] + MEDIUM_CONTAINERS[:2], ids=lambda g: g.name)
def test_morphism_instantiations_are_the_compatible_ones(container):
    host = full_subgraph(container)
    cases = [(PATTERNS[1], PATTERNS[3], {"x": "x"}, {}),
             (PATTERNS[3], PATTERNS[5], {"x": "x", "y": "y"}, {"k": "k2"}),
             (PATTERNS[0], PATTERNS[2], {}, {})]
    for c0, c1, nm, em in cases:
        a = GraphMorphism(c0, c1, nm, em)
        for mu0 in enumerate_instantiations(c0, host):
            expected = [(b, mu1) for mu1 in enumerate_instantiations(c1, host)
                        if (b := instantiate_morphism(a, mu0, mu1)) is not None]
            assert enumerate_morphism_instantiations(a, mu0) == expected


def test_non_injective_condition_morphism_rejected():
    c0 = graph("c0", [("x", "A"), ("z", "A")])
    a = GraphMorphism(c0, PATTERNS[1], {"x": "x", "z": "x"}, {})
    mu0 = enumerate_instantiations(c0, full_subgraph(MEDIUM_CONTAINERS[0]))[0]
    with pytest.raises(MorphismError):
        enumerate_morphism_instantiations(a, mu0)


def test_empty_instantiation_is_unique():
    mu = empty_instantiation(empty_graph(TG), full_subgraph(SMALL_CONTAINERS[3]))
    assert enumerate_instantiations(empty_graph(TG), full_subgraph(SMALL_CONTAINERS[3])) == [mu]
    assert mu.target.is_empty()


def test_instantiation_of_round_trip():
    container = MEDIUM_CONTAINERS[2]
    host = SubgraphRef(container, {"a1", "a2", "b1"}, {"e1", "h1"})
    for q in enumerate_injective_morphisms(PATTERNS[6], host.graph):
        mu = instantiation_of(q, host)
        assert compose(mu.iso, mu.inclusion.as_morphism()) == q
