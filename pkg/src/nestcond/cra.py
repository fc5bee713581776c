"""Class-responsibility assignment: type graph, container builder and the built-in constraints.

The container holds the problem part (methods, attributes, dependencies)
plus ``class_count`` classes and an ``encapsulates`` edge from every class to
every method and attribute, so every assignment is a subgraph of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .conditions import TRUE, Condition, Exists, Forall, Not, desugar, satisfies_constraint
from .errors import ParseError
from .flattening import normalize
from .graphs import GraphMorphism, SubgraphRef, TypedGraph, TypeGraph, empty_graph
from .instantiate import instantiate_constraint

CLASS, METHOD, ATTRIBUTE = "Class", "Method", "Attribute"
ENC_METHOD, ENC_ATTRIBUTE = "encapsulatesMethod", "encapsulatesAttribute"
FUNCTIONAL_DEP, DATA_DEP = "functionalDep", "dataDep"


def cra_typegraph() -> TypeGraph:
    return TypeGraph(
        frozenset({CLASS, METHOD, ATTRIBUTE}),
        {
            ENC_METHOD: (CLASS, METHOD),
            ENC_ATTRIBUTE: (CLASS, ATTRIBUTE),
            FUNCTIONAL_DEP: (METHOD, METHOD),
            DATA_DEP: (METHOD, ATTRIBUTE),
        },
    )


def enc_id(cls: str, feature: str) -> str:
    return f"enc({cls},{feature})"


def dep_id(kind: str, src: str, tar: str) -> str:
    return f"{kind}({src},{tar})"


@dataclass(frozen=True)
class CraInstance:
    methods: tuple[str, ...]
    attributes: tuple[str, ...]
    functional_deps: tuple[tuple[str, str], ...] = ()
    data_deps: tuple[tuple[str, str], ...] = ()
    class_count: int | None = None  # defaults to the number of features
    name: str = field(default="cra", compare=False)

    def __post_init__(self):
        for attr in ("methods", "attributes"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        for attr in ("functional_deps", "data_deps"):
            object.__setattr__(self, attr, tuple(tuple(p) for p in getattr(self, attr)))
        if self.class_count is None:
            object.__setattr__(self, "class_count", len(self.methods) + len(self.attributes))
        problems = self.violations()
        if problems:
            raise ValueError("; ".join(problems))

    def violations(self) -> list[str]:
        out = []
        ids = list(self.methods) + list(self.attributes)
        if len(set(ids)) != len(ids):
            out.append("method and attribute IDs must be distinct")
        ms, attrs = set(self.methods), set(self.attributes)
        for s, t in self.functional_deps:
            if s not in ms or t not in ms:
                out.append(f"functional dependency ({s}, {t}) needs two known methods")
        for s, t in self.data_deps:
            if s not in ms or t not in attrs:
                out.append(f"data dependency ({s}, {t}) needs a known method and attribute")
        if not isinstance(self.class_count, int) or self.class_count < 1:
            out.append(f"classCount must be a positive integer, got {self.class_count!r}")
        return out

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(f"C{i}" for i in range(1, self.class_count + 1))

    def to_json(self) -> dict:
        return {
            "kind": "cra_instance",
            "name": self.name,
            "methods": list(self.methods),
            "attributes": list(self.attributes),
            "functionalDeps": [list(p) for p in self.functional_deps],
            "dataDeps": [list(p) for p in self.data_deps],
            "classCount": self.class_count,
        }

    @classmethod
    def from_json(cls, doc: dict) -> CraInstance:
        if not isinstance(doc, dict) or doc.get("kind", "cra_instance") != "cra_instance":
            raise ParseError("expected a cra_instance document")
        try:
            return cls(doc.get("methods", []), doc.get("attributes", []),
                       doc.get("functionalDeps", []), doc.get("dataDeps", []),
                       doc.get("classCount"), doc.get("name", "cra"))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"invalid instance: {exc}") from exc


def default_instance() -> CraInstance:
    """Three methods and three attributes; each method reads one attribute."""
    return CraInstance(
        methods=("M1", "M2", "M3"),
        attributes=("A1", "A2", "A3"),
        functional_deps=(("M1", "M2"), ("M2", "M3")),
        data_deps=(("M1", "A1"), ("M2", "A2"), ("M3", "A3")),
    )


def build_cra_container(inst: CraInstance) -> tuple[TypedGraph, SubgraphRef]:
    """The container ``T`` and its problem subgraph ``P``."""
    tg = cra_typegraph()
    nodes = [(m, METHOD) for m in inst.methods] + [(a, ATTRIBUTE) for a in inst.attributes]
    deps = [(dep_id(FUNCTIONAL_DEP, s, t), FUNCTIONAL_DEP, s, t) for s, t in inst.functional_deps]
    deps += [(dep_id(DATA_DEP, s, t), DATA_DEP, s, t) for s, t in inst.data_deps]
    enc = []
    for c in inst.classes:
        enc += [(enc_id(c, m), ENC_METHOD, c, m) for m in inst.methods]
        enc += [(enc_id(c, a), ENC_ATTRIBUTE, c, a) for a in inst.attributes]
    container = TypedGraph.build(tg, nodes + [(c, CLASS) for c in inst.classes], deps + enc, f"{inst.name}_T")
    problem = SubgraphRef(container, [n for n, _ in nodes], [e for e, *_ in deps])
    return container, problem


def assignment(container: TypedGraph, problem: SubgraphRef, pairs) -> SubgraphRef:
    """The subgraph of ``container`` made of ``problem``, the classes used and the given ``(class, feature)`` edges."""
    edges = {enc_id(c, f) for c, f in pairs}
    classes = {c for c, _ in pairs}
    return SubgraphRef(container, problem.nodes | classes, problem.edges | edges)


def default_solution(container: TypedGraph, problem: SubgraphRef) -> SubgraphRef:
    """C1 holds M1, M2, A1, A2 and C2 holds M3, A3."""
    return assignment(container, problem, [("C1", "M1"), ("C1", "M2"), ("C1", "A1"), ("C1", "A2"),
                                           ("C2", "M3"), ("C2", "A3")])


# built-in constraints


def _graph(name, nodes, edges=()) -> TypedGraph:
    return TypedGraph.build(cra_typegraph(), nodes, edges, name)


def _incl(a: TypedGraph, b: TypedGraph) -> GraphMorphism:
    """The morphism that is the identity on shared IDs."""
    return GraphMorphism(a, b, {n: n for n in a.nodes}, {e: e for e in a.edges})


def lower_bound(kind: str = METHOD) -> Condition:
    """Every feature of the given kind is encapsulated by some class."""
    enc = ENC_METHOD if kind == METHOD else ENC_ATTRIBUTE
    v = "m" if kind == METHOD else "a"
    empty = empty_graph(cra_typegraph())
    one = _graph(v, [(v, kind)])
    owned = _graph(f"{v}_c", [(v, kind), ("c", CLASS)], [(f"enc(c,{v})", enc, "c", v)])
    return desugar(Forall(_incl(empty, one), Exists(_incl(one, owned), TRUE)))


def upper_bound() -> Condition:
    """No method is encapsulated by two classes."""
    empty = empty_graph(cra_typegraph())
    twice = _graph("m_c1_c2", [("m", METHOD), ("c1", CLASS), ("c2", CLASS)],
                   [("enc(c1,m)", ENC_METHOD, "c1", "m"), ("enc(c2,m)", ENC_METHOD, "c2", "m")])
    return Not(Exists(_incl(empty, twice), TRUE))


def private_attributes() -> Condition:
    """A method with a data dependency sits in every class that holds the attribute."""
    empty = empty_graph(cra_typegraph())
    nodes = [("m", METHOD), ("a", ATTRIBUTE), ("c", CLASS)]
    edges = [("dataDep(m,a)", DATA_DEP, "m", "a"), ("enc(c,a)", ENC_ATTRIBUTE, "c", "a")]
    held = _graph("m_a_c", nodes, edges)
    both = _graph("m_a_c_enc", nodes, edges + [("enc(c,m)", ENC_METHOD, "c", "m")])
    return desugar(Forall(_incl(empty, held), Exists(_incl(held, both), TRUE)))


def builtin_constraints(attributes: bool = False) -> dict[str, Condition]:
    """``c_lb``, ``c_ub`` and ``c_priv``; with ``attributes`` also the lower bound for attributes."""
    out = {"c_lb": lower_bound(METHOD), "c_ub": upper_bound(), "c_priv": private_attributes()}
    if attributes:
        out["c_lb_attr"] = lower_bound(ATTRIBUTE)
    return out


def check_routes(container: TypedGraph, solution: SubgraphRef,
                 constraints: dict[str, Condition]) -> list[tuple[str, bool, bool]]:
    """``(name, direct, instantiated)`` per constraint.

    ``direct`` evaluates the constraint on the solution graph itself;
    ``instantiated`` evaluates the normal form of its instantiation in the
    container at the solution subgraph. The two always agree.
    """
    empty = SubgraphRef(container)
    out = []
    for name, c in constraints.items():
        direct = satisfies_constraint(solution.graph, c)
        via = normalize(instantiate_constraint(c, container), empty).holds(solution)
        out.append((name, direct, via))
    return out
