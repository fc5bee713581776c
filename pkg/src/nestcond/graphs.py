"""Typed graphs, typed graph morphisms and the subgraph lattice of a container graph.

Element IDs are opaque strings. Node IDs and edge IDs live in separate
namespaces. All values are immutable once built; every operation is pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import ContainerMismatchError, MorphismError


class Edge(NamedTuple):
    type: str
    src: str
    tar: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()
    injective: bool | None = None
    surjective: bool | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class TypeGraph:
    """The fixed graph of element types: node types plus edge types with endpoints."""

    nodes: frozenset[str]
    edges: Mapping[str, tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        edges = {e: (s, t) for e, (s, t) in sorted(dict(self.edges).items())}
        object.__setattr__(self, "edges", MappingProxyType(edges))

    def __hash__(self):
        return hash((self.nodes, frozenset(self.edges.items())))

    def src(self, edge_type: str) -> str:
        return self.edges[edge_type][0]

    def tar(self, edge_type: str) -> str:
        return self.edges[edge_type][1]

    def violations(self) -> list[str]:
        out = []
        for e, (s, t) in self.edges.items():
            if s not in self.nodes:
                out.append(f"edge type {e!r}: source type {s!r} is not a declared node type")
            if t not in self.nodes:
                out.append(f"edge type {e!r}: target type {t!r} is not a declared node type")
        return out


@dataclass(frozen=True)
class TypedGraph:
    """A finite graph typed over ``typegraph``.

    ``nodes`` maps node ID to node type, ``edges`` maps edge ID to an
    :class:`Edge` (type, source node, target node). The ``name`` is a label
    used for serialization only and takes no part in equality.
    """

    typegraph: TypeGraph
    nodes: Mapping[str, str]
    edges: Mapping[str, Edge]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        nodes = dict(sorted(dict(self.nodes).items()))
        edges = {e: Edge(*v) for e, v in sorted(dict(self.edges).items())}
        object.__setattr__(self, "nodes", MappingProxyType(nodes))
        object.__setattr__(self, "edges", MappingProxyType(edges))

    @classmethod
    def build(cls, typegraph: TypeGraph, nodes: Iterable[tuple[str, str]] | Mapping[str, str] = (),
              edges: Iterable[tuple[str, str, str, str]] = (), name: str = "") -> TypedGraph:
        """Build from ``(id, type)`` node pairs and ``(id, type, src, tar)`` edge tuples."""
        if isinstance(nodes, Mapping):
            nodes = nodes.items()
        node_map = {}
        for n, t in nodes:
            if n in node_map:
                raise ValueError(f"duplicate node id {n!r}")
            node_map[n] = t
        edge_map = {}
        for e, t, s, r in edges:
            if e in edge_map:
                raise ValueError(f"duplicate edge id {e!r}")
            edge_map[e] = Edge(t, s, r)
        return cls(typegraph, node_map, edge_map, name)

    def __hash__(self):
        return hash((frozenset(self.nodes.items()), frozenset(self.edges.items())))

    @cached_property
    def node_ids(self) -> frozenset[str]:
        return frozenset(self.nodes)

    @cached_property
    def edge_ids(self) -> frozenset[str]:
        return frozenset(self.edges)

    @property
    def size(self) -> int:
        """Number of elements (nodes plus edges)."""
        return len(self.nodes) + len(self.edges)

    def is_empty(self) -> bool:
        return not self.nodes and not self.edges

    def renamed(self, name: str) -> TypedGraph:
        return TypedGraph(self.typegraph, self.nodes, self.edges, name)


def empty_graph(typegraph: TypeGraph, name: str = "empty") -> TypedGraph:
    return TypedGraph(typegraph, {}, {}, name)


def validate_typed_graph(g: TypedGraph, tg: TypeGraph | None = None) -> ValidationReport:
    """List every violated well-formedness condition of ``g`` over ``tg``.

    ``tg`` defaults to the graph's own type graph.
    """
    tg = g.typegraph if tg is None else tg
    out = list(tg.violations())
    if tg != g.typegraph:
        out.append("graph is typed over a different type graph")
    for n, t in g.nodes.items():
        if t not in tg.nodes:
            out.append(f"node {n!r}: type {t!r} is not a node type")
    for e, (t, s, r) in g.edges.items():
        if s not in g.nodes:
            out.append(f"edge {e!r}: dangling source {s!r}")
        if r not in g.nodes:
            out.append(f"edge {e!r}: dangling target {r!r}")
        if t not in tg.edges:
            out.append(f"edge {e!r}: type {t!r} is not an edge type")
            continue
        ts, tt = tg.edges[t]
        if s in g.nodes and g.nodes[s] != ts:
            out.append(f"edge {e!r}: source {s!r} has type {g.nodes[s]!r}, edge type {t!r} needs {ts!r}")
        if r in g.nodes and g.nodes[r] != tt:
            out.append(f"edge {e!r}: target {r!r} has type {g.nodes[r]!r}, edge type {t!r} needs {tt!r}")
    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class GraphMorphism:
    domain: TypedGraph
    codomain: TypedGraph
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "node_map", MappingProxyType(dict(sorted(dict(self.node_map).items()))))
        object.__setattr__(self, "edge_map", MappingProxyType(dict(sorted(dict(self.edge_map).items()))))

    def __hash__(self):
        return hash((frozenset(self.node_map.items()), frozenset(self.edge_map.items())))

    def is_injective(self) -> bool:
        return (len(set(self.node_map.values())) == len(self.node_map)
                and len(set(self.edge_map.values())) == len(self.edge_map))

    def is_surjective(self) -> bool:
        return (set(self.node_map.values()) >= self.codomain.node_ids
                and set(self.edge_map.values()) >= self.codomain.edge_ids)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def image_node_ids(self) -> frozenset[str]:
        return frozenset(self.node_map.values())

    def image_edge_ids(self) -> frozenset[str]:
        return frozenset(self.edge_map.values())

    def inverse(self) -> GraphMorphism:
        if not self.is_bijective():
            raise MorphismError("only bijective morphisms can be inverted")
        return GraphMorphism(self.codomain, self.domain,
                             {v: k for k, v in self.node_map.items()},
                             {v: k for k, v in self.edge_map.items()})


def validate_morphism(f: GraphMorphism) -> ValidationReport:
    out = []
    for side, g in (("domain", f.domain), ("codomain", f.codomain)):
        out += [f"{side}: {v}" for v in validate_typed_graph(g).violations]
    if f.domain.typegraph != f.codomain.typegraph:
        out.append("domain and codomain are typed over different type graphs")
    dom, cod = f.domain, f.codomain
    for n in dom.nodes:
        if n not in f.node_map:
            out.append(f"node {n!r} is not mapped")
    for e in dom.edges:
        if e not in f.edge_map:
            out.append(f"edge {e!r} is not mapped")
    for n, m in f.node_map.items():
        if n not in dom.nodes:
            out.append(f"node map: unknown domain node {n!r}")
        elif m not in cod.nodes:
            out.append(f"node map: {n!r} -> unknown codomain node {m!r}")
        elif dom.nodes[n] != cod.nodes[m]:
            out.append(f"node {n!r} -> {m!r} changes type {dom.nodes[n]!r} to {cod.nodes[m]!r}")
    for e, d in f.edge_map.items():
        if e not in dom.edges:
            out.append(f"edge map: unknown domain edge {e!r}")
            continue
        if d not in cod.edges:
            out.append(f"edge map: {e!r} -> unknown codomain edge {d!r}")
            continue
        ge, he = dom.edges[e], cod.edges[d]
        if ge.type != he.type:
            out.append(f"edge {e!r} -> {d!r} changes type {ge.type!r} to {he.type!r}")
        if f.node_map.get(ge.src) != he.src:
            out.append(f"edge {e!r} -> {d!r} breaks the source square")
        if f.node_map.get(ge.tar) != he.tar:
            out.append(f"edge {e!r} -> {d!r} breaks the target square")
    total = not out
    return ValidationReport(tuple(out),
                            injective=f.is_injective() if total else None,
                            surjective=f.is_surjective() if total else None)


def identity(g: TypedGraph) -> GraphMorphism:
    return GraphMorphism(g, g, {n: n for n in g.nodes}, {e: e for e in g.edges})


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """Apply ``f`` first, then ``g`` (the morphism usually written g ∘ f)."""
    if f.codomain != g.domain:
        raise MorphismError("cannot compose: codomain of the first morphism is not the domain of the second")
    return GraphMorphism(f.domain, g.codomain,
                         {n: g.node_map[m] for n, m in f.node_map.items()},
                         {e: g.edge_map[d] for e, d in f.edge_map.items()})


@dataclass(frozen=True)
class SubgraphRef:
    """A subgraph of ``container`` given by its node and edge ID sets.

    Equality is equality of ID sets within the same container; the container
    is left out of the hash so hashing stays cheap.
    """

    container: TypedGraph = field(hash=False, repr=False)
    nodes: frozenset[str] = frozenset()
    edges: frozenset[str] = frozenset()

    def __post_init__(self):
        nodes, edges = frozenset(self.nodes), frozenset(self.edges)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        c = self.container
        if not nodes <= c.node_ids:
            raise ValueError(f"unknown container nodes: {sorted(nodes - c.node_ids)}")
        if not edges <= c.edge_ids:
            raise ValueError(f"unknown container edges: {sorted(edges - c.edge_ids)}")
        for e in edges:
            _, s, t = c.edges[e]
            if s not in nodes or t not in nodes:
                raise ValueError(f"edge {e!r} needs its endpoints {s!r}, {t!r} in the subgraph")

    def __repr__(self):
        return f"SubgraphRef({self})"

    def __str__(self):
        return "{" + ",".join(self.sorted_nodes + self.sorted_edges) + "}"

    @cached_property
    def sorted_nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.nodes))

    @cached_property
    def sorted_edges(self) -> tuple[str, ...]:
        return tuple(sorted(self.edges))

    @property
    def key(self) -> tuple:
        """Deterministic sort key: by size, then by sorted IDs."""
        return (len(self.nodes) + len(self.edges), self.sorted_nodes, self.sorted_edges)

    @property
    def size(self) -> int:
        return len(self.nodes) + len(self.edges)

    def is_empty(self) -> bool:
        return not self.nodes and not self.edges

    def is_full(self) -> bool:
        return self.nodes == self.container.node_ids and self.edges == self.container.edge_ids

    @cached_property
    def graph(self) -> TypedGraph:
        """The typed graph this subgraph denotes (restriction of the container)."""
        c = self.container
        if self.is_full():
            return c
        return TypedGraph(c.typegraph,
                          {n: c.nodes[n] for n in self.sorted_nodes},
                          {e: c.edges[e] for e in self.sorted_edges},
                          f"{c.name}{self}")


def empty_subgraph(container: TypedGraph) -> SubgraphRef:
    return SubgraphRef(container)


def full_subgraph(container: TypedGraph) -> SubgraphRef:
    return SubgraphRef(container, container.node_ids, container.edge_ids)


def same_container(a: SubgraphRef, b: SubgraphRef) -> bool:
    return a.container is b.container or a.container == b.container


def _check(a: SubgraphRef, b: SubgraphRef):
    if not same_container(a, b):
        raise ContainerMismatchError("subgraphs belong to different containers")


def meet(a: SubgraphRef, b: SubgraphRef) -> SubgraphRef:
    _check(a, b)
    return SubgraphRef(a.container, a.nodes & b.nodes, a.edges & b.edges)


def join(a: SubgraphRef, b: SubgraphRef) -> SubgraphRef:
    _check(a, b)
    return SubgraphRef(a.container, a.nodes | b.nodes, a.edges | b.edges)


def join_all(parts: Iterable[SubgraphRef], container: TypedGraph | None = None) -> SubgraphRef:
    parts = list(parts)
    if not parts:
        if container is None:
            raise ValueError("join of no subgraphs needs an explicit container")
        return empty_subgraph(container)
    out = parts[0]
    for p in parts[1:]:
        out = join(out, p)
    return out


def is_subgraph(a: SubgraphRef, b: SubgraphRef) -> bool:
    _check(a, b)
    return a.nodes <= b.nodes and a.edges <= b.edges


def all_subgraphs(container: TypedGraph) -> list[SubgraphRef]:
    """Every subgraph of ``container``, ordered by :attr:`SubgraphRef.key`."""
    node_ids = sorted(container.nodes)
    out = []
    for r in range(len(node_ids) + 1):
        for ns in itertools.combinations(node_ids, r):
            nset = set(ns)
            avail = [e for e, (_, s, t) in container.edges.items() if s in nset and t in nset]
            for k in range(len(avail) + 1):
                for es in itertools.combinations(avail, k):
                    out.append(SubgraphRef(container, ns, es))
    out.sort(key=lambda s: s.key)
    return out


def supergraphs(sub: SubgraphRef, within: Iterable[SubgraphRef] | None = None) -> Iterator[SubgraphRef]:
    """All subgraphs of the container that contain ``sub``."""
    pool = all_subgraphs(sub.container) if within is None else within
    return (g for g in pool if is_subgraph(sub, g))


@dataclass(frozen=True)
class Inclusion:
    """The unique morphism ``domain ⊆ codomain`` between two subgraphs of one container."""

    domain: SubgraphRef
    codomain: SubgraphRef

    def __post_init__(self):
        if not same_container(self.domain, self.codomain):
            raise ContainerMismatchError("inclusion between subgraphs of different containers")
        if not (self.domain.nodes <= self.codomain.nodes and self.domain.edges <= self.codomain.edges):
            raise MorphismError(f"{self.domain} is not a subgraph of {self.codomain}")

    def __str__(self):
        return f"{self.domain} ⊆ {self.codomain}"

    @property
    def container(self) -> TypedGraph:
        return self.domain.container

    def is_identity(self) -> bool:
        return self.domain == self.codomain

    def then(self, outer: Inclusion) -> Inclusion:
        """Compose with an inclusion starting where this one ends."""
        if self.codomain != outer.domain:
            raise MorphismError(f"cannot compose {self} with {outer}")
        return Inclusion(self.domain, outer.codomain)

    def as_morphism(self) -> GraphMorphism:
        return GraphMorphism(self.domain.graph, self.codomain.graph,
                             {n: n for n in self.domain.nodes},
                             {e: e for e in self.domain.edges})


def identity_inclusion(s: SubgraphRef) -> Inclusion:
    return Inclusion(s, s)


def image_factorize(q: GraphMorphism, host: SubgraphRef) -> tuple[GraphMorphism, SubgraphRef]:
    """Split an injection ``q`` into ``host`` as an isomorphism onto its image, then inclusion.

    The image is returned as a subgraph of the host's container, so IDs are
    unchanged.
    """
    if not q.is_injective():
        raise MorphismError("image factorization needs an injective morphism")
    cod = q.codomain
    if cod.node_ids != host.nodes or cod.edge_ids != host.edges:
        raise MorphismError("codomain of the morphism is not the graph denoted by the host subgraph")
    image = SubgraphRef(host.container, q.image_node_ids(), q.image_edge_ids())
    iso = GraphMorphism(q.domain, image.graph, q.node_map, q.edge_map)
    return iso, image
