"""Nested conditions over typed graphs and over a finite category of subgraphs.

One AST serves both categories. A condition whose existential morphisms are
:class:`~nestcond.graphs.GraphMorphism` values lives among all typed graphs
(category ``"tg"``); one whose morphisms are
:class:`~nestcond.graphs.Inclusion` values lives among the subgraphs of a
single container (category ``"sub"``).

Core constructors are :class:`Truth`, :class:`Exists`, :class:`Not`,
:class:`And` and :class:`Or`. :class:`Forall`, :class:`Implies` and
:class:`Falsum` are surface sugar removed by :func:`desugar`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ConditionError, MorphismError
from .graphs import (
    GraphMorphism,
    Inclusion,
    SubgraphRef,
    TypedGraph,
    ValidationReport,
    empty_graph,
    same_container,
    validate_morphism,
)
from .morphisms import iter_injective_morphisms


@dataclass(frozen=True)
class Truth:
    def __str__(self):
        return "true"


TRUE = Truth()


@dataclass(frozen=True)
class Exists:
    morphism: GraphMorphism | Inclusion
    body: Condition = TRUE

    def __str__(self):
        m = self.morphism
        label = str(m.codomain) if isinstance(m, Inclusion) else f"{m.domain.name}->{m.codomain.name}"
        if isinstance(self.body, Truth):
            return f"∃({label})"
        return f"∃({label}, {self.body})"


@dataclass(frozen=True)
class Not:
    body: Condition

    def __str__(self):
        if isinstance(self.body, Truth):
            return "false"
        return f"¬{self.body}"


@dataclass(frozen=True)
class And:
    children: tuple[Condition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def __str__(self):
        if not self.children:
            return "⋀[]"
        return "(" + " ∧ ".join(map(str, self.children)) + ")"


@dataclass(frozen=True)
class Or:
    children: tuple[Condition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def __str__(self):
        if not self.children:
            return "⋁[]"
        return "(" + " ∨ ".join(map(str, self.children)) + ")"


FALSE = Not(TRUE)


# surface syntax


@dataclass(frozen=True)
class Forall:
    morphism: GraphMorphism | Inclusion
    body: Condition = TRUE


@dataclass(frozen=True)
class Implies:
    premise: Condition
    conclusion: Condition


@dataclass(frozen=True)
class Falsum:
    pass


Condition = Union[Truth, Exists, Not, And, Or, Forall, Implies, Falsum]


def conj(*cs: Condition) -> And:
    return And(cs)


def disj(*cs: Condition) -> Or:
    return Or(cs)


def desugar(c: Condition) -> Condition:
    """Rewrite surface sugar into core constructors; core input comes back unchanged."""
    if isinstance(c, Truth):
        return c
    if isinstance(c, Falsum):
        return FALSE
    if isinstance(c, Forall):
        return Not(Exists(c.morphism, Not(desugar(c.body))))
    if isinstance(c, Implies):
        return Or((Not(desugar(c.premise)), desugar(c.conclusion)))
    if isinstance(c, Exists):
        return Exists(c.morphism, desugar(c.body))
    if isinstance(c, Not):
        return Not(desugar(c.body))
    if isinstance(c, And):
        return And(tuple(map(desugar, c.children)))
    if isinstance(c, Or):
        return Or(tuple(map(desugar, c.children)))
    raise TypeError(f"not a condition: {c!r}")


def nesting_level(c: Condition) -> int:
    if isinstance(c, (Truth, Falsum)):
        return 0
    if isinstance(c, (Exists, Forall)):
        return nesting_level(c.body) + 1
    if isinstance(c, Not):
        return nesting_level(c.body)
    if isinstance(c, (And, Or)):
        return max((nesting_level(d) for d in c.children), default=0)
    if isinstance(c, Implies):
        return max(nesting_level(c.premise), nesting_level(c.conclusion))
    raise TypeError(f"not a condition: {c!r}")


def subconditions(c: Condition) -> Iterator[Condition]:
    """Pre-order walk over ``c`` and all its subconditions."""
    yield c
    if isinstance(c, (Exists, Forall, Not)):
        yield from subconditions(c.body)
    elif isinstance(c, (And, Or)):
        for d in c.children:
            yield from subconditions(d)
    elif isinstance(c, Implies):
        yield from subconditions(c.premise)
        yield from subconditions(c.conclusion)


def morphisms(c: Condition) -> Iterator[GraphMorphism | Inclusion]:
    for d in subconditions(c):
        if isinstance(d, (Exists, Forall)):
            yield d.morphism


def category(c: Condition) -> str | None:
    """``"tg"``, ``"sub"``, or None for a condition without any morphism."""
    kinds = {"sub" if isinstance(m, Inclusion) else "tg" for m in morphisms(c)}
    if len(kinds) > 1:
        raise ConditionError("condition mixes graph morphisms and subgraph inclusions")
    return kinds.pop() if kinds else None


def top_roots(c: Condition) -> list:
    """Domains of the existentials reachable from the root through Boolean operators only."""
    if isinstance(c, (Exists, Forall)):
        return [c.morphism.domain]
    if isinstance(c, Not):
        return top_roots(c.body)
    if isinstance(c, (And, Or)):
        return [r for d in c.children for r in top_roots(d)]
    if isinstance(c, Implies):
        return top_roots(c.premise) + top_roots(c.conclusion)
    return []


def root_of(c: Condition):
    """The graph (or subgraph) ``c`` is a condition over, or None if it has no existential."""
    roots = top_roots(c)
    return roots[0] if roots else None


def validate_condition(c: Condition, root: TypedGraph | SubgraphRef | None = None) -> ValidationReport:
    out: list[str] = []
    seen: dict = {}

    def visit(d, root, path):
        if isinstance(d, (Truth, Falsum)):
            return
        if isinstance(d, (Exists, Forall)):
            m = d.morphism
            if isinstance(m, Inclusion):
                kind = "sub"
                if "container" not in seen:
                    seen["container"] = m.container
                elif not (m.container is seen["container"] or m.container == seen["container"]):
                    out.append(f"{path}: inclusion in a different container")
            elif isinstance(m, GraphMorphism):
                kind = "tg"
                rep = validate_morphism(m)
                out.extend(f"{path}: {v}" for v in rep.violations)
                if rep.ok and not rep.injective:
                    out.append(f"{path}: morphism is not injective")
            else:
                out.append(f"{path}: not a morphism: {m!r}")
                return
            if seen.setdefault("kind", kind) != kind:
                out.append(f"{path}: mixes graph morphisms and subgraph inclusions")
            if root is not None and m.domain != root:
                out.append(f"{path}: morphism domain does not match the graph the condition is over")
            visit(d.body, m.codomain, path + ".body")
        elif isinstance(d, Not):
            visit(d.body, root, path + ".not")
        elif isinstance(d, (And, Or)):
            for i, e in enumerate(d.children):
                visit(e, root, f"{path}[{i}]")
        elif isinstance(d, Implies):
            visit(d.premise, root, path + ".premise")
            visit(d.conclusion, root, path + ".conclusion")
        else:
            out.append(f"{path}: not a condition: {d!r}")

    if root is None:
        root = root_of(c)
    visit(c, root, "$")
    return ValidationReport(tuple(out))


def _check_root(c: Condition, root) -> None:
    for r in top_roots(c):
        if r != root:
            raise ConditionError("condition is not over the domain of the given morphism")


def satisfies(g: GraphMorphism, c: Condition) -> bool:
    """``g ⊨ c`` among typed graphs; witnesses range over all injections."""
    if not g.is_injective():
        raise MorphismError("satisfaction is defined here for injective morphisms only")
    c = desugar(c)
    _check_root(c, g.domain)
    return _sat(g, c)


def _sat(g: GraphMorphism, c: Condition) -> bool:
    if isinstance(c, Truth):
        return True
    if isinstance(c, Exists):
        a = c.morphism
        fixed_nodes = {a.node_map[n]: m for n, m in g.node_map.items()}
        fixed_edges = {a.edge_map[e]: d for e, d in g.edge_map.items()}
        return any(_sat(q, c.body) for q in iter_injective_morphisms(
            a.codomain, g.codomain, fixed_nodes=fixed_nodes, fixed_edges=fixed_edges))
    if isinstance(c, Not):
        return not _sat(g, c.body)
    if isinstance(c, And):
        return all(_sat(g, d) for d in c.children)
    if isinstance(c, Or):
        return any(_sat(g, d) for d in c.children)
    raise TypeError(f"not a core condition: {c!r}")


def satisfies_constraint(graph: TypedGraph, c: Condition) -> bool:
    """``graph ⊨ c`` for a constraint (a condition over the empty graph)."""
    empty = empty_graph(graph.typegraph)
    return satisfies(GraphMorphism(empty, graph, {}, {}), c)


def satisfies_sub(incl: Inclusion, c: Condition, *, check: bool = True) -> bool:
    """``incl ⊨_I c`` in the category of subgraphs; the only candidate witness is an inclusion."""
    c = desugar(c) if check else c
    if check:
        for m in morphisms(c):
            if not isinstance(m, Inclusion):
                raise ConditionError("expected a condition over subgraphs")
            if not same_container(m.domain, incl.domain):
                raise ConditionError("condition lives in a different container")
        _check_root(c, incl.domain)
    host = incl.codomain
    return _sat_sub(host.nodes, host.edges, c)


def _sat_sub(nodes: frozenset, edges: frozenset, c: Condition) -> bool:
    if isinstance(c, Truth):
        return True
    if isinstance(c, Exists):
        b1 = c.morphism.codomain
        return b1.nodes <= nodes and b1.edges <= edges and _sat_sub(nodes, edges, c.body)
    if isinstance(c, Not):
        return not _sat_sub(nodes, edges, c.body)
    if isinstance(c, And):
        return all(_sat_sub(nodes, edges, d) for d in c.children)
    if isinstance(c, Or):
        return any(_sat_sub(nodes, edges, d) for d in c.children)
    raise TypeError(f"not a core condition: {c!r}")


def satisfies_sub_constraint(g: SubgraphRef, c: Condition) -> bool:
    return satisfies_sub(Inclusion(SubgraphRef(g.container), g), c)


def to_graph_condition(c: Condition) -> Condition:
    """Replace every inclusion by the explicit graph morphism it stands for."""
    if isinstance(c, (Exists, Forall)):
        m = c.morphism.as_morphism() if isinstance(c.morphism, Inclusion) else c.morphism
        return type(c)(m, to_graph_condition(c.body))
    if isinstance(c, Not):
        return Not(to_graph_condition(c.body))
    if isinstance(c, (And, Or)):
        return type(c)(tuple(map(to_graph_condition, c.children)))
    if isinstance(c, Implies):
        return Implies(to_graph_condition(c.premise), to_graph_condition(c.conclusion))
    return c


def explain(g: GraphMorphism, c: Condition, limit: int = 20) -> tuple[bool, list[str]]:
    """Evaluate ``g ⊨ c`` and return a short trace of the witnesses that decided it.

    For a satisfied existential the trace names the image of the witness
    found; for a failed one it says that no match satisfies the body, which
    under a negation reads as a counter-witness search.
    """
    c = desugar(c)
    _check_root(c, g.domain)
    lines: list[str] = []

    def img(q):
        return "{" + ",".join(sorted(q.node_map.values()) + sorted(q.edge_map.values())) + "}"

    def go(g, c, depth):
        pad = "  " * depth
        if isinstance(c, Exists):
            a = c.morphism
            fixed_nodes = {a.node_map[n]: m for n, m in g.node_map.items()}
            fixed_edges = {a.edge_map[e]: d for e, d in g.edge_map.items()}
            for q in iter_injective_morphisms(a.codomain, g.codomain, fixed_nodes=fixed_nodes,
                                              fixed_edges=fixed_edges):
                if _sat(q, c.body):
                    if len(lines) < limit:
                        lines.append(f"{pad}match of {a.codomain.name or 'pattern'} at {img(q)}")
                    go(q, c.body, depth + 1)
                    return True
            if len(lines) < limit:
                lines.append(f"{pad}no match of {a.codomain.name or 'pattern'} satisfies its body")
            return False
        if isinstance(c, Not):
            inner = c.body
            if isinstance(inner, Exists):
                a = inner.morphism
                fixed_nodes = {a.node_map[n]: m for n, m in g.node_map.items()}
                fixed_edges = {a.edge_map[e]: d for e, d in g.edge_map.items()}
                for q in iter_injective_morphisms(a.codomain, g.codomain, fixed_nodes=fixed_nodes,
                                                  fixed_edges=fixed_edges):
                    if _sat(q, inner.body):
                        if len(lines) < limit:
                            lines.append(f"{pad}counter-witness: {a.codomain.name or 'pattern'} at {img(q)}")
                            _explain_failure(q, inner.body, depth + 1)
                        return False
                if len(lines) < limit:
                    lines.append(f"{pad}no counter-witness: every match of {a.codomain.name or 'pattern'} fails its body")
                return True
            return not _sat(g, inner)
        if isinstance(c, And):
            return all(go(g, d, depth) for d in c.children)
        if isinstance(c, Or):
            return any(go(g, d, depth) for d in c.children)
        return _sat(g, c)

    def _explain_failure(q, body, depth):
        # body holds at the counter-witness; show why when it is itself a negation
        if isinstance(body, Not) and isinstance(body.body, Exists):
            go(q, body.body, depth)

    return go(g, c, 0), lines
