"""Nesting-free normal forms for conditions over subgraphs of a container.

Among subgraphs there is at most one inclusion between any two objects, so a
positive existential followed by a negated one can be pulled apart, and
nested existentials compose. :func:`flatten` exploits that to turn every
condition into a Boolean combination of literals ``∃(B0 ⊆ B1)`` and their
negations; :func:`normalize` then produces a sorted CNF (or DNF) whose
clauses are classified as trivial, purely positive, purely negative, or
implications ``∃(D) ⟹ ∃(B1) ∨ … ∨ ∃(Bt)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

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
    nesting_level,
    root_of,
    top_roots,
)
from .graphs import Inclusion, SubgraphRef, identity_inclusion, join_all, same_container


def _require_sub(c: Condition, root: SubgraphRef | None) -> None:
    for m in morphisms(c):
        if not isinstance(m, Inclusion):
            raise ConditionError("flattening applies to conditions over subgraphs only")
        if root is not None and not same_container(m.domain, root):
            raise ConditionError("condition lives in a different container")
    if root is not None:
        for r in top_roots(c):
            if r != root:
                raise ConditionError("condition is not over the codomain of the flattening morphism")


def flatten(b0: Inclusion, c: Condition) -> Condition:
    """Flatten ``c`` (a condition over ``b0.codomain``) over the inclusion ``b0``.

    The result is a condition over ``b0.domain`` equivalent to
    ``∃(b0, c)``, with nesting level at most one. No simplification is
    applied; see :func:`simplify`.
    """
    c = desugar(c)
    _require_sub(c, b0.codomain)
    return _flat(b0, c)


def flatten_condition(c: Condition, root: SubgraphRef | None = None) -> Condition:
    """Flatten over the identity of the graph ``c`` is a condition over."""
    root = root if root is not None else root_of(c)
    if root is None:
        raise ConditionError("cannot infer the graph the condition is over; pass root")
    return flatten(identity_inclusion(root), c)


def _flat(b0: Inclusion, c: Condition) -> Condition:
    if isinstance(c, Truth):
        return Exists(b0, TRUE)
    if isinstance(c, Exists):
        return _flat(b0.then(c.morphism), c.body)
    if isinstance(c, (And, Or)):
        parts = tuple(_flat(b0, d) for d in c.children)
        if not parts and isinstance(c, And):
            # empty conjunction is true; ∃(b0, true) keeps the equivalence with ∃(b0, c)
            return Exists(b0, TRUE)
        return type(c)(parts)
    if isinstance(c, Not):
        d = c.body
        if isinstance(d, Truth):
            return Exists(b0, FALSE)
        if isinstance(d, Not):
            return _flat(b0, d.body)
        if isinstance(d, Exists):
            return And((Exists(b0, TRUE), Not(_flat(b0.then(d.morphism), d.body))))
        if isinstance(d, (And, Or)):
            dual = Or if isinstance(d, And) else And
            parts = tuple(_flat(b0, Not(e)) for e in d.children)
            if not parts and dual is And:
                return Exists(b0, TRUE)
            return dual(parts)
    raise TypeError(f"not a core condition: {c!r}")


def _is_false(c: Condition) -> bool:
    return isinstance(c, Not) and isinstance(c.body, Truth)


def simplify(c: Condition) -> Condition:
    """Remove identity existentials, double negations and Boolean constants.

    Equivalent under satisfaction among subgraphs; idempotent.
    """
    c = desugar(c)
    if isinstance(c, Truth):
        return c
    if isinstance(c, Exists):
        body = simplify(c.body)
        if isinstance(c.morphism, Inclusion) and c.morphism.is_identity():
            return body
        if _is_false(body):
            return FALSE
        return Exists(c.morphism, body)
    if isinstance(c, Not):
        body = simplify(c.body)
        if isinstance(body, Not):
            return body.body
        return Not(body)
    if isinstance(c, (And, Or)):
        is_and = isinstance(c, And)
        unit, zero = (TRUE, FALSE) if is_and else (FALSE, TRUE)
        parts = []
        for d in map(simplify, c.children):
            if d == unit:
                continue
            if d == zero:
                return zero
            if type(d) is type(c):
                parts.extend(d.children)
            else:
                parts.append(d)
        if not parts:
            return unit
        if len(parts) == 1:
            return parts[0]
        return type(c)(tuple(parts))
    raise TypeError(f"not a condition: {c!r}")


@dataclass(frozen=True)
class Literal:
    """``∃(B0 ⊆ witness)`` when ``positive``, its negation otherwise.

    A literal without witness is a constant: ``true`` when positive,
    ``false`` when negative.
    """

    positive: bool
    witness: SubgraphRef | None = None

    @property
    def is_constant(self) -> bool:
        return self.witness is None

    @property
    def key(self) -> tuple:
        if self.witness is None:
            return (0, (), (), (), not self.positive)
        return (1,) + self.witness.key + (not self.positive,)

    def negated(self) -> Literal:
        return Literal(not self.positive, self.witness)

    def __str__(self):
        if self.witness is None:
            return "true" if self.positive else "false"
        return ("" if self.positive else "¬") + f"∃{self.witness}"

    def to_condition(self, root: SubgraphRef) -> Condition:
        if self.witness is None:
            return TRUE if self.positive else FALSE
        e = Exists(Inclusion(root, self.witness), TRUE)
        return e if self.positive else Not(e)

    def holds(self, g: SubgraphRef) -> bool:
        if self.witness is None:
            return self.positive
        inside = self.witness.nodes <= g.nodes and self.witness.edges <= g.edges
        return inside == self.positive


LIT_TRUE = Literal(True)
LIT_FALSE = Literal(False)

Clause = tuple[Literal, ...]


class ClauseKind(enum.Enum):
    TRIVIAL = "trivial"
    PURELY_POSITIVE = "positive"
    PURELY_NEGATIVE = "negative"
    MIXED = "mixed"


@dataclass(frozen=True)
class ClauseClass:
    """How a disjunctive clause presents itself.

    ``premise`` is the union ``D`` of the negated witnesses (negative and
    mixed clauses), ``conclusions`` the positive witnesses (positive and mixed
    clauses), ``value`` the truth value of a trivial clause.
    """

    kind: ClauseKind
    premise: SubgraphRef | None = None
    conclusions: tuple[SubgraphRef, ...] = ()
    value: bool | None = None

    def to_condition(self, root: SubgraphRef) -> Condition:
        if self.kind is ClauseKind.TRIVIAL:
            return TRUE if self.value else FALSE
        pos = [Exists(Inclusion(root, b), TRUE) for b in self.conclusions]
        if self.kind is ClauseKind.PURELY_POSITIVE:
            return Or(tuple(pos))
        neg = Not(Exists(Inclusion(root, self.premise), TRUE))
        if self.kind is ClauseKind.PURELY_NEGATIVE:
            return neg
        return Or((neg, *pos))

    def __str__(self):
        if self.kind is ClauseKind.TRIVIAL:
            return "true" if self.value else "false"
        rhs = " ∨ ".join(f"∃{b}" for b in self.conclusions)
        if self.kind is ClauseKind.PURELY_POSITIVE:
            return rhs
        if self.kind is ClauseKind.PURELY_NEGATIVE:
            return f"¬∃{self.premise}"
        return f"∃{self.premise} ⟹ {rhs}"


def merge_positive_conjunction(literals: Sequence[Literal], root: SubgraphRef | None = None) -> Literal:
    """A single positive literal equivalent to the conjunction of positive ``literals``.

    Its witness is the union of all witnesses: all of them are included in a
    subgraph exactly when their union is.
    """
    for lit in literals:
        if not lit.positive or lit.is_constant:
            raise ConditionError("only positive, non-constant literals can be merged")
    if not literals:
        if root is None:
            raise ConditionError("merging no literals needs the root")
        return Literal(True, root)
    witnesses = [lit.witness for lit in literals]
    if root is not None:
        witnesses.append(root)
    return Literal(True, join_all(witnesses))


def classify_clause(clause: Sequence[Literal]) -> ClauseClass:
    if LIT_TRUE in clause:
        return ClauseClass(ClauseKind.TRIVIAL, value=True)
    clause = [lit for lit in clause if not lit.is_constant]
    if not clause:
        return ClauseClass(ClauseKind.TRIVIAL, value=False)
    pos = tuple(lit.witness for lit in clause if lit.positive)
    neg = [lit.witness for lit in clause if not lit.positive]
    if not neg:
        return ClauseClass(ClauseKind.PURELY_POSITIVE, conclusions=pos)
    premise = join_all(neg)
    if not pos:
        return ClauseClass(ClauseKind.PURELY_NEGATIVE, premise=premise)
    return ClauseClass(ClauseKind.MIXED, premise=premise, conclusions=pos)


@dataclass(frozen=True)
class NormalFormCondition:
    """A CNF (conjunction of disjunctive clauses) or DNF over literals rooted at ``root``."""

    root: SubgraphRef | None
    form: str
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.form not in ("cnf", "dnf"):
            raise ValueError(f"unknown normal form {self.form!r}")
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))

    @cached_property
    def classes(self) -> tuple[ClauseClass, ...]:
        if self.form != "cnf":
            return ()
        return tuple(classify_clause(c) for c in self.clauses)

    def literals(self) -> list[Literal]:
        return [lit for c in self.clauses for lit in c]

    def to_condition(self) -> Condition:
        if any(not lit.is_constant for lit in self.literals()) and self.root is None:
            raise ConditionError("normal form without root")
        inner, outer = (Or, And) if self.form == "cnf" else (And, Or)
        parts = []
        for clause in self.clauses:
            lits = tuple(lit.to_condition(self.root) for lit in clause)
            parts.append(lits[0] if len(lits) == 1 else inner(lits))
        return parts[0] if len(parts) == 1 else outer(tuple(parts))

    def holds(self, g: SubgraphRef) -> bool:
        """Evaluate at the inclusion ``root ⊆ g``."""
        if self.form == "cnf":
            return all(any(lit.holds(g) for lit in c) for c in self.clauses)
        return any(all(lit.holds(g) for lit in c) for c in self.clauses)

    def __str__(self):
        inner, outer = (" ∨ ", " ∧\n") if self.form == "cnf" else (" ∧ ", " ∨\n")
        return outer.join("(" + inner.join(map(str, c)) + ")" for c in self.clauses)


# Clause sets: frozenset of frozensets of literals. In CNF the outer level is
# a conjunction; in DNF a disjunction. Only the constants differ.


def _reduce(clauses: Iterable[frozenset]) -> frozenset:
    kept = [c for c in set(clauses) if not any(lit.negated() in c for lit in c)]
    kept.sort(key=len)
    out: list[frozenset] = []
    for c in kept:
        if not any(o <= c for o in out):
            out.append(c)
    return frozenset(out)


def _cross(a: frozenset, b: frozenset) -> frozenset:
    return _reduce(x | y for x in a for y in b)


def _const_value(c: Condition) -> bool:
    if isinstance(c, Truth):
        return True
    if isinstance(c, Not):
        return not _const_value(c.body)
    if isinstance(c, And):
        return all(map(_const_value, c.children))
    if isinstance(c, Or):
        return any(map(_const_value, c.children))
    raise ConditionError("nesting level above one")


def _clause_sets(c: Condition, root: SubgraphRef | None, cnf: bool) -> frozenset:
    true_set = frozenset() if cnf else frozenset([frozenset()])
    false_set = frozenset([frozenset()]) if cnf else frozenset()

    def conj(parts):
        if cnf:
            return _reduce(x for p in parts for x in p)
        out = true_set
        for p in parts:
            out = _cross(out, p)
        return out

    def disj(parts):
        if not cnf:
            return _reduce(x for p in parts for x in p)
        out = false_set
        for p in parts:
            out = _cross(out, p)
        return out

    def go(c, pos):
        if isinstance(c, Truth):
            return true_set if pos else false_set
        if isinstance(c, Not):
            return go(c.body, not pos)
        if isinstance(c, Exists):
            w = c.morphism.codomain
            if not _const_value(c.body):
                return false_set if pos else true_set
            if root is not None and w == root:
                return true_set if pos else false_set
            return frozenset([frozenset([Literal(pos, w)])])
        if isinstance(c, (And, Or)):
            parts = [go(d, pos) for d in c.children]
            return conj(parts) if isinstance(c, And) == pos else disj(parts)
        raise TypeError(f"not a core condition: {c!r}")

    return go(c, True)


def _to_normal_form(c: Condition, root: SubgraphRef | None, form: str) -> NormalFormCondition:
    c = desugar(c)
    if nesting_level(c) > 1:
        raise ConditionError("normal forms need a condition of nesting level at most one")
    _require_sub(c, root)
    if root is None:
        root = root_of(c)
    cnf = form == "cnf"
    sets = _clause_sets(c, root, cnf)
    if not sets:
        clauses = [(LIT_TRUE,)] if cnf else [(LIT_FALSE,)]
    elif frozenset() in sets:
        clauses = [(LIT_FALSE,)] if cnf else [(LIT_TRUE,)]
    else:
        clauses = sorted((tuple(sorted(s, key=lambda lit: lit.key)) for s in sets),
                         key=lambda cl: [lit.key for lit in cl])
    return NormalFormCondition(root, form, tuple(clauses))


def to_cnf(c: Condition, root: SubgraphRef | None = None) -> NormalFormCondition:
    return _to_normal_form(c, root, "cnf")


def to_dnf(c: Condition, root: SubgraphRef | None = None) -> NormalFormCondition:
    return _to_normal_form(c, root, "dnf")


def normalize(c: Condition, root: SubgraphRef | None = None, form: str = "cnf") -> NormalFormCondition:
    """Flatten over the identity, simplify, and convert to a sorted normal form.

    The returned CNF carries per-clause classifications in ``.classes``.
    """
    c = desugar(c)
    root = root if root is not None else root_of(c)
    if root is not None:
        c = simplify(flatten(identity_inclusion(root), c))
    else:
        _require_sub(c, None)
        c = simplify(c)
        if nesting_level(c) > 0:
            raise ConditionError("cannot infer the graph the condition is over; pass root")
    return _to_normal_form(c, root, form)
