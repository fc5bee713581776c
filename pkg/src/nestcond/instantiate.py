"""Translate conditions over typed graphs into conditions over subgraphs of a container.

Every existential ``∃(a1: C0 -> C1, d)`` becomes a disjunction over all
ways of placing ``C1`` in the container compatibly with the placement of
``C0``; a negated existential becomes a conjunction of guarded clauses
``¬∃(b1) ∨ ∃(b1, Inst(¬d))``. Output order follows the deterministic
enumeration order, and no deduplication happens here.
"""

from __future__ import annotations

from math import comb, factorial

from .conditions import (
    FALSE,
    TRUE,
    And,
    Condition,
    ConditionError,
    Exists,
    Not,
    Or,
    Truth,
    desugar,
    morphisms,
    subconditions,
    top_roots,
)
from .graphs import GraphMorphism, TypedGraph, empty_graph, full_subgraph
from .morphisms import Instantiation, empty_instantiation, enumerate_morphism_instantiations


def instantiate_condition(c: Condition, mu0: Instantiation) -> Condition:
    """The condition over ``mu0.target`` that mirrors ``c`` (over ``mu0.pattern``) inside the container."""
    if not mu0.in_container:
        raise ConditionError("instantiate relative to an instantiation in the container")
    c = desugar(c)
    for m in morphisms(c):
        if not isinstance(m, GraphMorphism):
            raise ConditionError("instantiation translates conditions over typed graphs")
    return _inst(c, mu0)


def _inst(c: Condition, mu0: Instantiation) -> Condition:
    if isinstance(c, Truth):
        return TRUE
    if isinstance(c, And):
        return And(tuple(_inst(d, mu0) for d in c.children))
    if isinstance(c, Or):
        return Or(tuple(_inst(d, mu0) for d in c.children))
    if isinstance(c, Exists):
        js = enumerate_morphism_instantiations(c.morphism, mu0)
        if not js:
            return FALSE
        return Or(tuple(Exists(b1, _inst(c.body, mu1)) for b1, mu1 in js))
    if isinstance(c, Not):
        d = c.body
        if isinstance(d, Truth):
            return FALSE
        if isinstance(d, Or):
            return And(tuple(_inst(Not(e), mu0) for e in d.children))
        if isinstance(d, And):
            return Or(tuple(_inst(Not(e), mu0) for e in d.children))
        if isinstance(d, Not):
            return _inst(d.body, mu0)
        if isinstance(d, Exists):
            js = enumerate_morphism_instantiations(d.morphism, mu0)
            if not js:
                return TRUE
            return And(tuple(
                Or((Not(Exists(b1, TRUE)), Exists(b1, _inst(Not(d.body), mu1))))
                for b1, mu1 in js))
    raise TypeError(f"not a core condition: {c!r}")


def instantiate_constraint(c: Condition, container: TypedGraph) -> Condition:
    """Instantiate a constraint (a condition over the empty graph) in ``container``."""
    mu0 = empty_instantiation(empty_graph(container.typegraph), full_subgraph(container))
    c = desugar(c)
    if any(not r.is_empty() for r in top_roots(c)):
        raise ConditionError("a constraint must be a condition over the empty graph")
    return instantiate_condition(c, mu0)


def count_morphisms(c: Condition) -> int:
    """Number of existential morphisms occurring in ``c`` (counted per AST node)."""
    return sum(1 for _ in morphisms(c))


def estimate_size_bound(c: Condition, container: TypedGraph) -> int:
    """Upper bound on :func:`count_morphisms` of any instantiation of ``c`` in ``container``.

    Sums ``binom(|T|, |C|) * |C|!`` over the codomains ``C`` of the
    existentials of ``c`` (sizes count nodes plus edges) and doubles the
    result, since a negated existential emits its inclusion twice.
    """
    n = container.size
    total = 0
    for d in subconditions(desugar(c)):
        if isinstance(d, Exists):
            k = d.morphism.codomain.size
            total += comb(n, k) * factorial(k)
    return 2 * total
