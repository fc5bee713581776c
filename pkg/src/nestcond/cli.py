"""Command-line interface.

Exit codes: 0 success, 1 the checked property does not hold, 2 bad input,
3 the two evaluation routes of ``check`` disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import serialize as io
from .conditions import (
    Exists,
    Not,
    And,
    Or,
    explain,
    nesting_level,
    satisfies,
    satisfies_sub,
    validate_condition,
)
from .cra import CraInstance, build_cra_container, builtin_constraints, check_routes
from .errors import NestcondError, ParseError
from .flattening import flatten, normalize, simplify
from .graphs import GraphMorphism, Inclusion, SubgraphRef, TypedGraph, identity_inclusion, validate_typed_graph
from .instantiate import instantiate_constraint
from .morphisms import iter_injective_morphisms

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_graph(path) -> TypedGraph:
    doc = io.load_json(path)
    if doc.get("kind", "graph") != "graph":
        raise ParseError(f"{path}: expected a graph document, got {doc.get('kind')!r}")
    return io.parse_graph(doc)


def _load_condition(path, container: TypedGraph | None = None):
    doc = io.load_json(path)
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return io.parse_condition(doc, container)


def _container(args) -> TypedGraph:
    if not args.container:
        raise InputError("this command needs --container")
    return _load_graph(args.container)


def _require_sub(root, what: str):
    if not isinstance(root, SubgraphRef):
        raise InputError(f"{what} expects a condition over subgraphs of the container")


def _emit(doc) -> None:
    sys.stdout.write(io.dumps(doc))


# subcommands


def cmd_validate(args) -> int:
    doc = io.load_json(args.file)
    if not isinstance(doc, dict):
        raise ParseError(f"{args.file}: expected a JSON object")
    kind = doc.get("kind", "graph")
    if kind == "graph":
        report = validate_typed_graph(io.parse_graph(doc))
    elif kind == "condition":
        container = _load_graph(args.container) if args.container else None
        c, root = io.parse_condition(doc, container)
        report = validate_condition(c, root)
    else:
        raise ParseError(f"cannot validate documents of kind {kind!r}")
    if report.ok:
        print("ok")
        return EXIT_OK
    for v in report.violations:
        print(v)
    return EXIT_FALSE


def cmd_nl(args) -> int:
    c, _ = _load_condition(args.condition, _load_graph(args.container) if args.container else None)
    print(nesting_level(c))
    return EXIT_OK


def _sub_trace(nodes, edges, c, depth, lines):
    pad = "  " * depth
    if isinstance(c, Exists):
        b1 = c.morphism.codomain
        present = b1.nodes <= nodes and b1.edges <= edges
        lines.append(f"{pad}{'present' if present else 'absent'}: {b1}")
        if present:
            _sub_trace(nodes, edges, c.body, depth + 1, lines)
    elif isinstance(c, Not):
        _sub_trace(nodes, edges, c.body, depth, lines)
    elif isinstance(c, (And, Or)):
        for d in c.children:
            _sub_trace(nodes, edges, d, depth, lines)


def cmd_satisfy(args) -> int:
    graph = _load_graph(args.graph)
    container = _load_graph(args.container) if args.container else None
    c, root = _load_condition(args.condition, container)
    category = args.category or ("sub" if isinstance(root, SubgraphRef) else "tg")
    if category == "sub":
        _require_sub(root, "satisfy --category sub")
        g = io.subgraph_from_graph(graph, root.container)
        if not (root.nodes <= g.nodes and root.edges <= g.edges):
            raise InputError(f"the graph does not contain the condition's root {root}")
        result = satisfies_sub(Inclusion(root, g), c)
        lines: list[str] = []
        _sub_trace(g.nodes, g.edges, c, 0, lines)
    else:
        if isinstance(root, SubgraphRef):
            raise InputError("a condition over subgraphs needs --category sub")
        if not set(root.nodes) <= set(graph.nodes) or not set(root.edges) <= set(graph.edges):
            raise InputError("the graph does not contain the condition's root graph")
        g = GraphMorphism(root, graph, {n: n for n in root.nodes}, {e: e for e in root.edges})
        result = satisfies(g, c)
        _, lines = explain(g, c)
    print("true" if result else "false")
    for line in lines:
        print(line)
    return EXIT_OK if result else EXIT_FALSE


def cmd_flatten(args) -> int:
    c, root = _load_condition(args.condition, _container(args))
    _require_sub(root, "flatten")
    out = flatten(identity_inclusion(root), c)
    if not args.no_simplify:
        out = simplify(out)
    _emit(io.print_condition(out, root))
    return EXIT_OK


def _report(nf) -> str:
    lines = [f"form: {nf.form}", f"root: {nf.root if nf.root is not None else '-'}",
             f"clauses: {len(nf.clauses)}"]
    if nf.form == "cnf":
        for i, cls in enumerate(nf.classes, 1):
            lines.append(f"{i}. [{cls.kind.value}] {cls}")
    else:
        for i, clause in enumerate(nf.clauses, 1):
            lines.append(f"{i}. " + " ∧ ".join(map(str, clause)))
    return "\n".join(lines) + "\n"


def _emit_nf(nf, container, fmt) -> None:
    if fmt == "text":
        sys.stdout.write(_report(nf))
    else:
        _emit(io.print_normal_form(nf, container))


def cmd_normalize(args) -> int:
    container = _container(args)
    c, root = _load_condition(args.condition, container)
    _require_sub(root, "normalize")
    _emit_nf(normalize(c, root, args.form), container, args.format)
    return EXIT_OK


def cmd_instantiate(args) -> int:
    container = _container(args)
    c, root = _load_condition(args.constraint)
    if isinstance(root, SubgraphRef):
        raise InputError("instantiate expects a constraint over typed graphs")
    if root.size:
        raise InputError("instantiate expects a constraint (a condition over the empty graph)")
    if root.typegraph != container.typegraph:
        raise InputError("constraint and container are typed over different type graphs")
    out = instantiate_constraint(c, container)
    empty = SubgraphRef(container)
    if args.then_normalize:
        _emit_nf(normalize(out, empty, args.form), container, args.format)
    else:
        _emit(io.print_condition(out, empty))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    pattern, host = _load_graph(args.pattern), _load_graph(args.host)
    if pattern.typegraph != host.typegraph:
        raise InputError("pattern and host are typed over different type graphs")
    for q in iter_injective_morphisms(pattern, host):
        print(json.dumps(io.print_morphism(q), ensure_ascii=False))
    return EXIT_OK


def _load_instance(path) -> CraInstance:
    return CraInstance.from_json(io.load_json(path))


def cmd_cra_gen(args) -> int:
    inst = _load_instance(args.instance)
    container, problem = build_cra_container(inst)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {"T.json": io.print_graph(container),
             "P.json": io.print_subgraph(problem)}
    empty = TypedGraph(container.typegraph, {}, {}, "empty")
    for name, c in builtin_constraints(args.attributes).items():
        files[f"{name}.json"] = io.print_condition(c, empty)
    for name, doc in files.items():
        (out / name).write_text(io.dumps(doc))
        print(out / name)
    return EXIT_OK


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    container, problem = build_cra_container(inst)
    solution = _load_graph(args.solution)
    s = io.subgraph_from_graph(solution, container)
    if not (problem.nodes <= s.nodes and problem.edges <= s.edges):
        print("warning: the solution does not contain the whole problem graph", file=sys.stderr)
    status = EXIT_OK
    print(f"{'constraint':<12} {'direct':<8} {'instantiated':<13} routes")
    for name, direct, via in check_routes(container, s, builtin_constraints(args.attributes)):
        agree = direct == via
        print(f"{name:<12} {_pf(direct):<8} {_pf(via):<13} {'agree' if agree else 'DISAGREE'}")
        if not agree:
            status = EXIT_DISAGREE
        elif not direct and status == EXIT_OK:
            status = EXIT_FALSE
    return status


def _pf(b: bool) -> str:
    return "pass" if b else "fail"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nestcond", description="Nested graph conditions over typed graphs and subgraph lattices.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a graph or condition file for well-formedness")
    s.add_argument("file")
    s.add_argument("--container")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("nl", help="print the nesting level of a condition")
    s.add_argument("condition")
    s.add_argument("--container")
    s.set_defaults(func=cmd_nl)

    s = sub.add_parser("satisfy", help="evaluate a condition on a graph")
    s.add_argument("graph")
    s.add_argument("condition")
    s.add_argument("--category", choices=["tg", "sub"])
    s.add_argument("--container")
    s.set_defaults(func=cmd_satisfy)

    s = sub.add_parser("flatten", help="flatten a condition over subgraphs")
    s.add_argument("condition")
    s.add_argument("--container")
    s.add_argument("--no-simplify", action="store_true")
    s.set_defaults(func=cmd_flatten)

    for name, func, arg in (("normalize", cmd_normalize, "condition"), ("instantiate", cmd_instantiate, "constraint")):
        s = sub.add_parser(name, help=f"{name} a {arg}")
        s.add_argument(arg)
        s.add_argument("--container")
        s.add_argument("--form", choices=["cnf", "dnf"], default="cnf")
        s.add_argument("--format", choices=["json", "text"], default="json")
        if name == "instantiate":
            s.add_argument("--then-normalize", action="store_true")
        s.set_defaults(func=func)

    s = sub.add_parser("enumerate", help="list all injective morphisms from pattern to host")
    s.add_argument("pattern")
    s.add_argument("host")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("cra-gen", help="write the container, problem graph and constraints for an instance")
    s.add_argument("instance")
    s.add_argument("--out-dir", default=".")
    s.add_argument("--attributes", action="store_true", help="also emit the lower bound for attributes")
    s.set_defaults(func=cmd_cra_gen)

    s = sub.add_parser("check", help="check a solution against the built-in constraints by both routes")
    s.add_argument("solution")
    s.add_argument("instance")
    s.add_argument("--attributes", action="store_true")
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NestcondError, InputError, ValueError, KeyError, TypeError, AttributeError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
