from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import SMALL_CONTAINERS, sub_conditions
from nestcond.conditions import FALSE, TRUE, And, Exists, Not, Or, desugar, nesting_level, satisfies_sub
from nestcond.errors import ConditionError
from nestcond.flattening import (
    LIT_FALSE,
    LIT_TRUE,
    ClauseKind,
    Literal,
    classify_clause,
    flatten,
    merge_positive_conjunction,
    normalize,
    simplify,
    to_cnf,
    to_dnf,
)
from nestcond.graphs import Inclusion, SubgraphRef, all_subgraphs, full_subgraph, identity_inclusion, join_all

T = SMALL_CONTAINERS[4]
EMPTY = SubgraphRef(T)
B1 = SubgraphRef(T, {"a1"})
B21 = SubgraphRef(T, {"a1", "b1"}, {"h1"})
B22 = SubgraphRef(T, {"a1", "b1"}, {"h2"})
LOOP = SubgraphRef(T, {"a1"}, {"e1"})


def up(a, b):
    return Inclusion(a, b)


def between(container, low):
    return [g for g in all_subgraphs(container) if low.nodes <= g.nodes and low.edges <= g.edges]


def sat(b0, g, c):
    return satisfies_sub(Inclusion(b0, g), desugar(c), check=False)


def test_lower_bound_shape_flattens_verbatim():
    c = Or((Not(Exists(up(EMPTY, B1))), Exists(up(EMPTY, B1), Or((Exists(up(B1, B21)), Exists(up(B1, B22)))))))
    raw = flatten(identity_inclusion(EMPTY), c)
    assert raw == Or((
        And((Exists(up(EMPTY, EMPTY)), Not(Exists(up(EMPTY, B1))))),
        Or((Exists(up(EMPTY, B21)), Exists(up(EMPTY, B22)))),
    ))
    assert simplify(raw) == Or((Not(Exists(up(EMPTY, B1))), Exists(up(EMPTY, B21)), Exists(up(EMPTY, B22))))
    nf = normalize(c, EMPTY)
    assert len(nf.classes) == 1
    cls = nf.classes[0]
    assert cls.kind is ClauseKind.MIXED
    assert cls.premise == B1 and cls.conclusions == (B21, B22)


def test_flat_of_false_is_raw_then_collapses():
    b0 = up(EMPTY, B1)
    assert flatten(b0, FALSE) == Exists(b0, FALSE)
    assert simplify(flatten(b0, FALSE)) == FALSE


def test_flat_of_nested_positive_composes():
    c = Exists(up(B1, B21), Exists(up(B21, full_subgraph(T))))
    assert flatten(identity_inclusion(B1), c) == Exists(up(B1, full_subgraph(T)))


def test_flatten_rejects_graph_conditions_and_wrong_root():
    with pytest.raises(ConditionError):
        flatten(identity_inclusion(EMPTY), Exists(up(B1, B21)))
    other = SMALL_CONTAINERS[3]
    with pytest.raises(ConditionError):
        flatten(identity_inclusion(EMPTY), Exists(up(SubgraphRef(other), full_subgraph(other))))


def test_simplify_examples():
    e = Exists(up(EMPTY, B1))
    assert simplify(Not(Not(e))) == e
    assert simplify(And((TRUE, e))) == e
    assert simplify(Or((FALSE, e, TRUE))) == TRUE
    assert simplify(Exists(up(B1, B1), e)) == e
    assert simplify(And(())) == TRUE and simplify(Or(())) == FALSE


def test_true_normalizes_to_trivial():
    nf = normalize(TRUE, EMPTY)
    assert [c.kind for c in nf.classes] == [ClauseKind.TRIVIAL]
    assert nf.classes[0].value is True
    nf = normalize(FALSE, EMPTY)
    assert nf.classes[0].kind is ClauseKind.TRIVIAL and nf.classes[0].value is False


def test_clause_classification():
    p, q, r = Literal(True, B21), Literal(True, B22), Literal(False, B1)
    s = Literal(False, LOOP)
    assert classify_clause((p, q)).kind is ClauseKind.PURELY_POSITIVE
    neg = classify_clause((r, s))
    assert neg.kind is ClauseKind.PURELY_NEGATIVE and neg.premise == join_all([B1, LOOP])
    mixed = classify_clause((r, p, q))
    assert mixed.kind is ClauseKind.MIXED and mixed.premise == B1 and mixed.conclusions == (B21, B22)
    assert classify_clause((p, LIT_TRUE)).value is True
    assert classify_clause((LIT_FALSE,)).value is False


def test_root_literal_is_constant_true():
    # ∃(B0 ⊆ B0) holds at every inclusion out of B0
    nf = normalize(Exists(up(B1, B1)), B1)
    assert nf.classes[0].kind is ClauseKind.TRIVIAL and nf.classes[0].value is True


def test_normal_form_is_sorted():
    c = And((Exists(up(EMPTY, B22)), Not(Exists(up(EMPTY, LOOP))), Or((Exists(up(EMPTY, B1)), Exists(up(EMPTY, B21))))))
    nf = normalize(c, EMPTY)
    keys = [tuple(lit.key for lit in clause) for clause in nf.clauses]
    assert keys == sorted(keys)
    for clause in nf.clauses:
        assert [lit.key for lit in clause] == sorted(lit.key for lit in clause)


@pytest.mark.parametrize("container", SMALL_CONTAINERS[2:], ids=lambda g: g.name)
def test_union_of_positive_literals(container):
    b0 = SubgraphRef(container)
    ups = between(container, b0)
    for k in (1, 2, 3):
        for ws in combinations_with_replacement(ups, k):
            merged = merge_positive_conjunction([Literal(True, w) for w in ws], b0)
            for g in ups:
                assert merged.holds(g) == all(Literal(True, w).holds(g) for w in ws)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_CONTAINERS[1:]), st.integers(0, 2**32))
def test_flattening_properties(container, seed):
    gen = sub_conditions(container, seed)
    subs = gen.subs
    b0 = gen.rng.choice(subs)
    c = gen.condition(b0, depth=3)
    flat = flatten(identity_inclusion(b0), c)
    assert nesting_level(flat) <= 1
    simple = simplify(flat)
    assert simplify(simple) == simple
    nf, dnf = normalize(c, b0), to_dnf(simple, b0)
    # flattening over an inclusion into b0 matches ∃(b, c) from below
    x = gen.rng.choice([s for s in subs if s.nodes <= b0.nodes and s.edges <= b0.edges])
    via = flatten(up(x, b0), c)
    assert nesting_level(via) <= 1
    for g in between(container, b0):
        expected = sat(b0, g, c)
        assert sat(b0, g, flat) == expected
        assert sat(b0, g, simple) == expected
        assert nf.holds(g) == expected and dnf.holds(g) == expected
        assert sat(x, g, via) == sat(x, g, Exists(up(x, b0), c))
    for g in between(container, x):
        assert sat(x, g, via) == sat(x, g, Exists(up(x, b0), c))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL_CONTAINERS[2:]), st.integers(0, 2**32))
def test_extracting_negation(container, seed):
    gen = sub_conditions(container, seed)
    b0 = gen.rng.choice(gen.subs)
    b1 = gen.rng.choice(gen.steps(b0))
    d = gen.condition(b1, depth=2)
    lhs = Exists(up(b0, b1), Not(d))
    rhs = And((Exists(up(b0, b1)), Not(Exists(up(b0, b1), d))))
    for g in between(container, b0):
        assert sat(b0, g, lhs) == sat(b0, g, rhs)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL_CONTAINERS[2:]), st.integers(0, 2**32))
def test_normalize_is_idempotent(container, seed):
    gen = sub_conditions(container, seed)
    b0 = gen.rng.choice(gen.subs)
    nf = normalize(gen.condition(b0, depth=3), b0)
    assert normalize(nf.to_condition(), b0).clauses == nf.clauses


def test_deep_normalize_rejects_nested_input():
    with pytest.raises(ConditionError):
        to_cnf(Exists(up(EMPTY, B1), Exists(up(B1, B21))), EMPTY)

