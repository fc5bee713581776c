"""JSON documents for graphs, subgraphs, conditions and normal forms.

Every document carries a ``kind`` field. IDs are always emitted sorted so
that printing is deterministic; ``parse_*(print_*(x)) == x`` for every value.
Parsing accepts the surface operators ``forall``, ``implies`` and ``false``
and desugars them; printing emits core operators only.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .conditions import (
    TRUE,
    And,
    Condition,
    Exists,
    Forall,
    Implies,
    Falsum,
    Not,
    Or,
    Truth,
    desugar,
)
from .errors import ParseError
from .flattening import Literal, NormalFormCondition
from .graphs import GraphMorphism, Inclusion, SubgraphRef, TypedGraph, TypeGraph


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _need(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    return doc[key]


# type graphs and graphs


def print_typegraph(tg: TypeGraph) -> dict:
    return {
        "nodes": sorted(tg.nodes),
        "edges": [{"id": e, "src": s, "tar": t} for e, (s, t) in tg.edges.items()],
    }


def parse_typegraph(doc: dict) -> TypeGraph:
    try:
        return TypeGraph(frozenset(doc["nodes"]), {e["id"]: (e["src"], e["tar"]) for e in doc["edges"]})
    except (KeyError, TypeError) as exc:
        raise ParseError(f"type graph: malformed ({exc})") from exc


def _graph_body(g: TypedGraph) -> dict:
    return {
        "name": g.name,
        "nodes": [{"id": n, "type": t} for n, t in g.nodes.items()],
        "edges": [{"id": e, "type": t, "src": s, "tar": r} for e, (t, s, r) in g.edges.items()],
    }


def print_graph(g: TypedGraph) -> dict:
    return {"kind": "graph", **_graph_body(g), "typegraph": print_typegraph(g.typegraph)}


def _parse_graph_body(doc: dict, tg: TypeGraph) -> TypedGraph:
    try:
        return TypedGraph.build(
            tg,
            [(n["id"], n["type"]) for n in doc.get("nodes", [])],
            [(e["id"], e["type"], e["src"], e["tar"]) for e in doc.get("edges", [])],
            doc.get("name", ""),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"graph {doc.get('name', '')!r}: malformed ({exc})") from exc


def parse_graph(doc: dict) -> TypedGraph:
    tg = parse_typegraph(_need(doc, "typegraph", "graph"))
    return _parse_graph_body(doc, tg)


# subgraphs


def _sub_body(s: SubgraphRef) -> dict:
    return {"nodes": list(s.sorted_nodes), "edges": list(s.sorted_edges)}


def print_subgraph(s: SubgraphRef) -> dict:
    return {"kind": "subgraph", "container": s.container.name, **_sub_body(s)}


def _parse_sub_body(doc: dict, container: TypedGraph) -> SubgraphRef:
    try:
        return SubgraphRef(container, doc.get("nodes", []), doc.get("edges", []))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"subgraph: {exc}") from exc


def parse_subgraph(doc: dict, container: TypedGraph) -> SubgraphRef:
    name = doc.get("container")
    if name not in (None, "", container.name):
        raise ParseError(f"subgraph refers to container {name!r}, got {container.name!r}")
    return _parse_sub_body(doc, container)


def subgraph_from_graph(g: TypedGraph, container: TypedGraph) -> SubgraphRef:
    """View a standalone graph file as a subgraph of ``container`` (matching IDs)."""
    for n, t in g.nodes.items():
        if container.nodes.get(n) != t:
            raise ParseError(f"node {n!r} of {g.name!r} is not a node of {container.name!r} with that type")
    for e, edge in g.edges.items():
        if container.edges.get(e) != edge:
            raise ParseError(f"edge {e!r} of {g.name!r} is not an edge of {container.name!r}")
    return _parse_sub_body({"nodes": list(g.nodes), "edges": list(g.edges)}, container)


# conditions


class _GraphTable:
    def __init__(self):
        self.by_name: dict[str, TypedGraph] = {}

    def name_of(self, g: TypedGraph) -> str:
        if g.name:
            other = self.by_name.setdefault(g.name, g)
            if other != g:
                raise ValueError(f"two different graphs are both named {g.name!r}")
            return g.name
        for name, other in self.by_name.items():
            if other == g:
                return name
        k = len(self.by_name)
        while f"G{k}" in self.by_name:
            k += 1
        self.by_name[f"G{k}"] = g
        return f"G{k}"


def print_condition(c: Condition, root: TypedGraph | SubgraphRef) -> dict:
    """Serialize ``c`` as a condition over ``root``.

    A typed-graph root gives a ``tg`` document with a table of all graphs; a
    subgraph root gives a ``sub`` document referring to its container by name.
    """
    c = desugar(c)
    if isinstance(root, SubgraphRef):
        container = root.container

        def morph(m):
            if not isinstance(m, Inclusion):
                raise ValueError("a condition over a subgraph must use inclusions")
            return {"from": _sub_body(m.domain), "to": _sub_body(m.codomain)}

        tree = _print_tree(c, morph)
        return {"kind": "condition", "category": "sub", "container": container.name,
                "root": _sub_body(root), "condition": tree}

    table = _GraphTable()
    root_name = table.name_of(root)

    def morph(m):
        if not isinstance(m, GraphMorphism):
            raise ValueError("a condition over a typed graph must use graph morphisms")
        return {"from": table.name_of(m.domain), "to": table.name_of(m.codomain),
                "nodes": dict(m.node_map), "edges": dict(m.edge_map)}

    tree = _print_tree(c, morph)
    return {"kind": "condition", "category": "tg", "typegraph": print_typegraph(root.typegraph),
            "graphs": [_graph_body(g) | {"name": n} for n, g in table.by_name.items()],
            "root": root_name, "condition": tree}


def _print_tree(c: Condition, morph) -> dict:
    if isinstance(c, Truth):
        return {"op": "true"}
    if isinstance(c, Exists):
        return {"op": "exists", "morphism": morph(c.morphism), "body": _print_tree(c.body, morph)}
    if isinstance(c, Not):
        return {"op": "not", "body": _print_tree(c.body, morph)}
    if isinstance(c, (And, Or)):
        return {"op": "and" if isinstance(c, And) else "or",
                "children": [_print_tree(d, morph) for d in c.children]}
    raise TypeError(f"not a core condition: {c!r}")


def parse_condition(doc: dict, container: TypedGraph | None = None) -> tuple[Condition, TypedGraph | SubgraphRef]:
    """Read a condition document; returns the (desugared) condition and its root."""
    if doc.get("kind", "condition") != "condition":
        raise ParseError(f"expected a condition document, got kind {doc.get('kind')!r}")
    cat = _need(doc, "category", "condition")
    if cat == "sub":
        ref = _need(doc, "container", "condition")
        if isinstance(ref, dict):
            container = parse_graph(ref)
        elif container is None:
            raise ParseError(f"condition over subgraphs of {ref!r} needs its container graph")
        elif ref not in ("", container.name):
            raise ParseError(f"condition refers to container {ref!r}, got {container.name!r}")
        root = _parse_sub_body(_need(doc, "root", "condition"), container)

        def morph(m):
            try:
                return Inclusion(_parse_sub_body(m["from"], container), _parse_sub_body(m["to"], container))
            except (KeyError, TypeError) as exc:
                raise ParseError(f"inclusion: malformed ({exc})") from exc
            except ValueError as exc:
                raise ParseError(f"inclusion: {exc}") from exc
    elif cat == "tg":
        tg = parse_typegraph(_need(doc, "typegraph", "condition"))
        graphs = {}
        for gd in doc.get("graphs", []):
            g = _parse_graph_body(gd, tg)
            if g.name in graphs:
                raise ParseError(f"duplicate graph name {g.name!r}")
            graphs[g.name] = g
        rname = _need(doc, "root", "condition")
        if rname not in graphs:
            raise ParseError(f"unknown root graph {rname!r}")
        root = graphs[rname]

        def morph(m):
            try:
                return GraphMorphism(graphs[m["from"]], graphs[m["to"]], m.get("nodes", {}), m.get("edges", {}))
            except KeyError as exc:
                raise ParseError(f"morphism refers to unknown graph {exc}") from exc
            except TypeError as exc:
                raise ParseError(f"morphism: malformed ({exc})") from exc
    else:
        raise ParseError(f"unknown condition category {cat!r}")
    c = desugar(_parse_tree(_need(doc, "condition", "condition"), morph))
    return c, root


def _parse_tree(t: dict, morph) -> Condition:
    if not isinstance(t, dict):
        raise ParseError(f"condition node must be an object, got {t!r}")
    op = t.get("op")
    body = lambda: _parse_tree(t["body"], morph) if "body" in t else TRUE  # noqa: E731
    kids = lambda: [_parse_tree(k, morph) for k in t.get("children", [])]  # noqa: E731
    if op == "true":
        return TRUE
    if op == "false":
        return Falsum()
    if op == "exists":
        return Exists(morph(_need(t, "morphism", "exists")), body())
    if op == "forall":
        return Forall(morph(_need(t, "morphism", "forall")), body())
    if op == "not":
        return Not(_parse_tree(_need(t, "body", "not"), morph))
    if op == "and":
        return And(kids())
    if op == "or":
        return Or(kids())
    if op == "implies":
        if "children" in t:
            ks = kids()
            if len(ks) != 2:
                raise ParseError("implies takes exactly two children")
            return Implies(*ks)
        return Implies(_parse_tree(_need(t, "premise", "implies"), morph),
                       _parse_tree(_need(t, "conclusion", "implies"), morph))
    raise ParseError(f"unknown operator {op!r}")



# normal forms


def _print_literal(lit: Literal) -> dict:
    return {"positive": lit.positive, "witness": None if lit.witness is None else _sub_body(lit.witness)}


def print_normal_form(nf: NormalFormCondition, container: TypedGraph | None = None) -> dict:
    if container is None:
        container = nf.root.container if nf.root is not None else None
    clauses = []
    classes = nf.classes or (None,) * len(nf.clauses)
    for clause, cls in zip(nf.clauses, classes):
        entry: dict[str, Any] = {}
        if cls is not None:
            entry["class"] = cls.kind.value
            if cls.value is not None:
                entry["value"] = cls.value
            if cls.premise is not None:
                entry["premise"] = _sub_body(cls.premise)
            if cls.conclusions:
                entry["disjuncts"] = [_sub_body(b) for b in cls.conclusions]
        entry["literals"] = [_print_literal(lit) for lit in clause]
        clauses.append(entry)
    return {"kind": "normal_form", "container": container.name if container is not None else None,
            "root": None if nf.root is None else _sub_body(nf.root), "form": nf.form, "clauses": clauses}


def parse_normal_form(doc: dict, container: TypedGraph) -> NormalFormCondition:
    if doc.get("kind") != "normal_form":
        raise ParseError("expected a normal_form document")
    root = None if doc.get("root") is None else _parse_sub_body(doc["root"], container)
    clauses = []
    for entry in _need(doc, "clauses", "normal form"):
        lits = []
        for ld in _need(entry, "literals", "clause"):
            w = ld.get("witness")
            lits.append(Literal(bool(ld["positive"]), None if w is None else _parse_sub_body(w, container)))
        clauses.append(tuple(lits))
    return NormalFormCondition(root, _need(doc, "form", "normal form"), tuple(clauses))


# morphisms (enumeration output)


def print_morphism(m: GraphMorphism) -> dict:
    return {"from": m.domain.name, "to": m.codomain.name, "nodes": dict(m.node_map), "edges": dict(m.edge_map)}

