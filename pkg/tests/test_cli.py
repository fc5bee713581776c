import json
import subprocess
import sys
from pathlib import Path

import pytest

from generators import SMALL_CONTAINERS
from nestcond import cli
from nestcond import serialize as io
from nestcond.conditions import Exists, Not
from nestcond.cra import CLASS, ENC_METHOD, METHOD, cra_typegraph
from nestcond.graphs import Inclusion, SubgraphRef, TypedGraph

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    out = tmp_path_factory.mktemp("cra")
    assert cli.main(["cra-gen", str(CORPUS / "instance.json"), "--out-dir", str(out)]) == 0
    return out


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(path, doc):
    path.write_text(io.dumps(doc))
    return path


def test_cra_gen_writes_files(generated):
    assert sorted(p.name for p in generated.iterdir()) == ["P.json", "T.json", "c_lb.json", "c_priv.json", "c_ub.json"]


def test_cra_gen_is_deterministic(tmp_path, capsys):
    for d in ("one", "two"):
        run(capsys, "cra-gen", CORPUS / "instance.json", "--out-dir", tmp_path / d)
    for f in (tmp_path / "one").iterdir():
        assert f.read_bytes() == (tmp_path / "two" / f.name).read_bytes()


def test_check_corpus_solution(capsys):
    code, out, _ = run(capsys, "check", CORPUS / "solution.json", CORPUS / "instance.json")
    assert code == 0
    rows = out.splitlines()[1:]
    assert [r.split() for r in rows] == [[n, "pass", "pass", "agree"] for n in ("c_lb", "c_ub", "c_priv")]


def test_check_flags_violation(tmp_path, capsys):
    sol = io.load_json(CORPUS / "solution.json")
    sol["edges"] = [e for e in sol["edges"] if e["id"] != "enc(C1,M1)"]
    code, out, _ = run(capsys, "check", write(tmp_path / "s.json", sol), CORPUS / "instance.json")
    assert code == 1
    assert "c_lb         fail     fail          agree" in out


def test_check_disagreement_is_exit_3(monkeypatch, capsys):
    monkeypatch.setattr(cli, "check_routes", lambda *a: [("c_lb", True, False)])
    code, out, _ = run(capsys, "check", CORPUS / "solution.json", CORPUS / "instance.json")
    assert code == 3 and "DISAGREE" in out


def test_instantiate_then_normalize(generated, capsys):
    code, out, _ = run(capsys, "instantiate", generated / "c_lb.json", "--container", generated / "T.json",
                       "--then-normalize")
    assert code == 0
    doc = json.loads(out)
    assert [c["class"] for c in doc["clauses"]] == ["mixed"] * 3
    assert all(len(c["disjuncts"]) == 6 for c in doc["clauses"])


def test_instantiate_output_parses(generated, capsys):
    code, out, _ = run(capsys, "instantiate", generated / "c_ub.json", "--container", generated / "T.json")
    assert code == 0
    container = io.parse_graph(io.load_json(generated / "T.json"))
    c, root = io.parse_condition(json.loads(out), container)
    assert root == SubgraphRef(container) and len(c.children) == 90


def test_enumerate_methods(generated, tmp_path, capsys):
    pattern = TypedGraph.build(cra_typegraph(), [("m", METHOD)], name="m")
    code, out, _ = run(capsys, "enumerate", write(tmp_path / "m.json", io.print_graph(pattern)), generated / "T.json")
    assert code == 0
    assert [json.loads(line)["nodes"] for line in out.splitlines()] == [{"m": "M1"}, {"m": "M2"}, {"m": "M3"}]


def test_satisfy_with_trace(generated, tmp_path, capsys):
    code, out, _ = run(capsys, "satisfy", CORPUS / "solution.json", generated / "c_lb.json")
    assert code == 0 and out.startswith("true")
    sol = io.load_json(CORPUS / "solution.json")
    sol["edges"] = [e for e in sol["edges"] if e["id"] != "enc(C2,M3)"]
    code, out, _ = run(capsys, "satisfy", write(tmp_path / "s.json", sol), generated / "c_lb.json")
    assert code == 1
    assert out.splitlines()[:2] == ["false", "counter-witness: m at {M3}"]


def test_nesting_level(generated, capsys):
    assert run(capsys, "nl", generated / "c_priv.json")[:2] == (0, "2\n")
    assert run(capsys, "nl", generated / "c_ub.json")[:2] == (0, "1\n")


def test_validate(generated, tmp_path, capsys):
    assert run(capsys, "validate", generated / "T.json")[:2] == (0, "ok\n")
    assert run(capsys, "validate", generated / "c_lb.json")[:2] == (0, "ok\n")
    g = io.load_json(generated / "T.json")
    g["edges"].append({"id": "bad", "type": "dataDep", "src": "M1", "tar": "nowhere"})
    code, out, _ = run(capsys, "validate", write(tmp_path / "g.json", g))
    assert code == 1 and "dangling target 'nowhere'" in out


def test_input_errors_exit_2(tmp_path, capsys):
    (tmp_path / "junk.json").write_text("[1, 2")
    code, _, err = run(capsys, "validate", tmp_path / "junk.json")
    assert code == 2 and json.loads(err)["error"] == "ParseError"
    code, _, err = run(capsys, "nl", tmp_path / "missing.json")
    assert code == 2
    bad = {"kind": "cra_instance", "methods": ["M1"], "attributes": [], "classCount": 0}
    code, _, err = run(capsys, "cra-gen", write(tmp_path / "i.json", bad), "--out-dir", tmp_path)
    assert code == 2 and "classCount" in json.loads(err)["message"]


def _sub_condition(tmp_path):
    t = SMALL_CONTAINERS[3]
    empty, a1, loop = SubgraphRef(t), SubgraphRef(t, {"a1"}), SubgraphRef(t, {"a1"}, {"e1"})
    c = Not(Exists(Inclusion(empty, a1), Not(Exists(Inclusion(a1, loop)))))
    return write(tmp_path / "t.json", io.print_graph(t)), write(tmp_path / "c.json", io.print_condition(c, empty))


def test_flatten_and_normalize(tmp_path, capsys):
    container, cond = _sub_condition(tmp_path)
    code, out, _ = run(capsys, "flatten", cond, "--container", container)
    assert code == 0
    flat, _ = io.parse_condition(json.loads(out), io.parse_graph(io.load_json(container)))
    assert str(flat) == "¬(∃({a1}) ∧ ¬∃({a1,e1}))"
    code, out, _ = run(capsys, "normalize", cond, "--container", container, "--format", "text")
    assert code == 0
    assert out.splitlines()[-1] == "1. [mixed] ∃{a1} ⟹ ∃{a1,e1}"
    code, out, _ = run(capsys, "normalize", cond, "--container", container, "--form", "dnf")
    assert json.loads(out)["form"] == "dnf"


def test_flatten_needs_container(tmp_path, capsys):
    _, cond = _sub_condition(tmp_path)
    code, _, err = run(capsys, "flatten", cond)
    assert code == 2 and "--container" in err


def test_satisfy_sub_category(tmp_path, capsys):
    container, cond = _sub_condition(tmp_path)
    g = write(tmp_path / "g.json", io.print_graph(SubgraphRef(SMALL_CONTAINERS[3], {"a1", "b1"}, {"h1"}).graph))
    code, out, _ = run(capsys, "satisfy", g, cond, "--category", "sub", "--container", container)
    assert code == 1 and out.splitlines() == ["false", "present: {a1}", "  absent: {a1,e1}"]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nestcond.cli", "check", str(CORPUS / "solution.json"),
                           str(CORPUS / "instance.json")], capture_output=True, text=True)
    assert proc.returncode == 0 and "agree" in proc.stdout


def test_enumerate_pattern_type(tmp_path, capsys):
    owned = TypedGraph.build(cra_typegraph(), [("m", METHOD), ("c", CLASS)], [("k", ENC_METHOD, "c", "m")], "mc")
    other = SMALL_CONTAINERS[2]
    code, _, err = run(capsys, "enumerate", write(tmp_path / "p.json", io.print_graph(owned)),
                       write(tmp_path / "h.json", io.print_graph(other)))
    assert code == 2
