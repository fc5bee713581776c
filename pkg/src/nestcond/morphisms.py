"""Enumeration of injective typed morphisms and of instantiations.

An instantiation identifies a graph ``C`` with a concrete subgraph ``B`` of a
host subgraph ``S``: it is an isomorphism ``C ≅ B`` together with the
inclusion ``B ⊆ S``. Instantiations of ``C`` in ``S`` correspond one-to-one
with injective morphisms ``C -> S`` via image factorization.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import MorphismError
from .graphs import (
    GraphMorphism,
    Inclusion,
    SubgraphRef,
    TypedGraph,
    compose,
    full_subgraph,
    image_factorize,
    is_subgraph,
)


class _HostIndex:
    __slots__ = ("nodes_by_type", "edges_between")

    def __init__(self, g: TypedGraph):
        self.nodes_by_type = defaultdict(list)
        for n, t in g.nodes.items():
            self.nodes_by_type[t].append(n)
        self.edges_between = defaultdict(list)
        for e, (t, s, r) in g.edges.items():
            self.edges_between[t, s, r].append(e)
        # g.nodes / g.edges iterate in sorted ID order, so the lists are sorted


def iter_injective_morphisms(c: TypedGraph, g: TypedGraph, *,
                             fixed_nodes: Mapping[str, str] | None = None,
                             fixed_edges: Mapping[str, str] | None = None) -> Iterator[GraphMorphism]:
    """Yield every injective typed morphism ``c -> g`` extending the fixed partial maps.

    Order: lexicographic in the node assignment (pattern nodes in sorted ID
    order, candidates in sorted ID order), then in the edge assignment.
    """
    if c.typegraph != g.typegraph:
        raise MorphismError("pattern and host are typed over different type graphs")
    fixed_nodes = dict(fixed_nodes or {})
    fixed_edges = dict(fixed_edges or {})
    idx = _HostIndex(g)
    order = list(c.nodes)

    # pattern edges grouped by the later of their two endpoints in `order`
    pos = {n: i for i, n in enumerate(order)}
    closing = defaultdict(list)
    for e, (t, s, r) in c.edges.items():
        closing[max(pos[s], pos[r])].append((t, s, r))

    node_img: dict[str, str] = {}
    used_nodes: set[str] = set()

    def candidates(n):
        if n in fixed_nodes:
            m = fixed_nodes[n]
            return [m] if g.nodes.get(m) == c.nodes[n] else []
        return idx.nodes_by_type.get(c.nodes[n], ())

    def adjacent_ok(i):
        for t, s, r in closing.get(i, ()):
            if not idx.edges_between.get((t, node_img[s], node_img[r])):
                return False
        return True

    edge_order = list(c.edges)
    used_edges: set[str] = set()
    edge_img: dict[str, str] = {}

    def extend_edges(k):
        if k == len(edge_order):
            yield GraphMorphism(c, g, dict(node_img), dict(edge_img))
            return
        e = edge_order[k]
        t, s, r = c.edges[e]
        pool = idx.edges_between.get((t, node_img[s], node_img[r]), ())
        if e in fixed_edges:
            pool = [fixed_edges[e]] if fixed_edges[e] in pool else []
        for d in pool:
            if d in used_edges:
                continue
            used_edges.add(d)
            edge_img[e] = d
            yield from extend_edges(k + 1)
            del edge_img[e]
            used_edges.discard(d)

    def extend_nodes(i):
        if i == len(order):
            yield from extend_edges(0)
            return
        n = order[i]
        for m in candidates(n):
            if m in used_nodes:
                continue
            node_img[n] = m
            used_nodes.add(m)
            if adjacent_ok(i):
                yield from extend_nodes(i + 1)
            used_nodes.discard(m)
            del node_img[n]

    yield from extend_nodes(0)


def enumerate_injective_morphisms(c: TypedGraph, g: TypedGraph) -> list[GraphMorphism]:
    return list(iter_injective_morphisms(c, g))


@dataclass(frozen=True)
class Instantiation:
    """``iso: C ≅ target.graph`` plus the inclusion ``target ⊆ host``."""

    iso: GraphMorphism
    target: SubgraphRef
    host: SubgraphRef

    def __post_init__(self):
        if not is_subgraph(self.target, self.host):
            raise MorphismError(f"instantiation target {self.target} is not inside its host {self.host}")

    @property
    def pattern(self) -> TypedGraph:
        return self.iso.domain

    @property
    def in_container(self) -> bool:
        """True for an instantiation in the container itself rather than a smaller host."""
        return self.host.is_full()

    @property
    def inclusion(self) -> Inclusion:
        return Inclusion(self.target, self.host)

    def as_morphism(self) -> GraphMorphism:
        """The injection ``C -> host`` this instantiation corresponds to."""
        return compose(self.iso, self.inclusion.as_morphism())


def instantiation_of(q: GraphMorphism, host: SubgraphRef) -> Instantiation:
    iso, image = image_factorize(q, host)
    return Instantiation(iso, image, host)


def iter_instantiations(c: TypedGraph, host: SubgraphRef, **fixed) -> Iterator[Instantiation]:
    for q in iter_injective_morphisms(c, host.graph, **fixed):
        yield instantiation_of(q, host)


def enumerate_instantiations(c: TypedGraph, host: SubgraphRef) -> list[Instantiation]:
    return list(iter_instantiations(c, host))


def extend_to_container(mu: Instantiation, host: SubgraphRef | None = None) -> Instantiation:
    """Re-host an instantiation in the full container (IDs are unchanged)."""
    if host is not None and mu.host != host:
        raise MorphismError("instantiation is not hosted in the given subgraph")
    if mu.in_container:
        return mu
    return Instantiation(mu.iso, mu.target, full_subgraph(mu.host.container))


def instantiate_morphism(a: GraphMorphism, mu0: Instantiation, mu1: Instantiation) -> Inclusion | None:
    """The inclusion ``B0 ⊆ B1`` instantiating ``a: C0 -> C1`` between ``mu0`` and ``mu1``, if any.

    It exists iff both routes ``C0 -> host`` agree, i.e. ``j1(a(x)) == j0(x)``
    for every element ``x`` of ``C0``.
    """
    if mu0.host != mu1.host:
        raise MorphismError("instantiations live in different hosts")
    if a.domain != mu0.pattern or a.codomain != mu1.pattern:
        raise MorphismError("morphism does not go between the instantiated patterns")
    j0, j1 = mu0.iso, mu1.iso
    for n, m in a.node_map.items():
        if j1.node_map[m] != j0.node_map[n]:
            return None
    for e, d in a.edge_map.items():
        if j1.edge_map[d] != j0.edge_map[e]:
            return None
    return Inclusion(mu0.target, mu1.target)


def forced_prefix(a: GraphMorphism, mu0: Instantiation) -> tuple[dict[str, str], dict[str, str]]:
    """Partial maps on ``a``'s codomain that every compatible instantiation must extend."""
    nodes = {m: mu0.iso.node_map[n] for n, m in a.node_map.items()}
    edges = {d: mu0.iso.edge_map[e] for e, d in a.edge_map.items()}
    return nodes, edges


def enumerate_morphism_instantiations(a: GraphMorphism, mu0: Instantiation) -> list[tuple[Inclusion, Instantiation]]:
    """All instantiations ``b1`` of the injective morphism ``a`` whose domain is ``mu0``.

    Each result pairs ``b1: B0 ⊆ B1`` with the unique compatible
    instantiation ``mu1`` of ``a``'s codomain, in the host of ``mu0``.
    """
    if not a.is_injective():
        raise MorphismError("condition morphisms must be injective")
    if a.domain != mu0.pattern:
        raise MorphismError("morphism domain is not the pattern of the given instantiation")
    fixed_nodes, fixed_edges = forced_prefix(a, mu0)
    out = []
    for mu1 in iter_instantiations(a.codomain, mu0.host, fixed_nodes=fixed_nodes, fixed_edges=fixed_edges):
        out.append((Inclusion(mu0.target, mu1.target), mu1))
    return out


def empty_instantiation(empty: TypedGraph, host: SubgraphRef) -> Instantiation:
    """The unique instantiation of the empty graph in ``host``."""
    if not empty.is_empty():
        raise MorphismError("expected the empty graph")
    return Instantiation(GraphMorphism(empty, SubgraphRef(host.container).graph, {}, {}),
                         SubgraphRef(host.container), host)

