"""Nested graph conditions over typed graphs and over the subgraph lattice of a container."""

from .conditions import (
    FALSE,
    TRUE,
    And,
    Condition,
    Exists,
    Falsum,
    Forall,
    Implies,
    Not,
    Or,
    desugar,
    explain,
    nesting_level,
    satisfies,
    satisfies_constraint,
    satisfies_sub,
    satisfies_sub_constraint,
    validate_condition,
)
from .errors import ConditionError, ContainerMismatchError, MorphismError, NestcondError, ParseError
from .flattening import ClauseKind, Literal, NormalFormCondition, flatten, normalize, simplify, to_cnf, to_dnf
from .graphs import (
    GraphMorphism,
    Inclusion,
    SubgraphRef,
    TypedGraph,
    TypeGraph,
    all_subgraphs,
    compose,
    image_factorize,
    join,
    meet,
    validate_morphism,
    validate_typed_graph,
)
from .instantiate import count_morphisms, estimate_size_bound, instantiate_condition, instantiate_constraint
from .morphisms import (
    Instantiation,
    enumerate_injective_morphisms,
    enumerate_instantiations,
    enumerate_morphism_instantiations,
    extend_to_container,
    instantiate_morphism,
)
