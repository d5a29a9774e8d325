import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from upbook import documents
from upbook.cli import main
from upbook.core import build_dag
from upbook.generators import GenSpec, generate
from upbook.layout import BookEmbedding


def test_graph_document_roundtrip():
    r = generate(GenSpec("cactus", 15, 3))
    doc = documents.graph_to_document(r.dag, r.embedding.outer_cycle)
    text = documents.dumps(doc)
    back = documents.graph_from_document(documents.loads(text))
    assert back == r.dag


def test_embedding_document_roundtrip():
    emb = BookEmbedding(("a", "b", "c"), {("a", "b"): 1, ("b", "c"): 2})
    doc = documents.embedding_to_document(emb, {"algorithm": "test"})
    back = documents.embedding_from_document(documents.loads(documents.dumps(doc)))
    assert back.order == emb.order and back.pages == emb.pages


def test_outer_face_mismatch_rejected():
    d = build_dag(["s", "a", "t"], [("s", "a"), ("a", "t"), ("s", "t")])
    doc = documents.graph_to_document(d, ("s", "a", "t"))
    doc["outer_face"] = ["a", "s", "t", "s"]
    from upbook.errors import DomainMismatch

    with pytest.raises(DomainMismatch):
        documents.graph_from_document(doc)


def test_dot_output_spine_order():
    d = build_dag(["a", "b"], [("a", "b")])
    emb = BookEmbedding(("a", "b"), {("a", "b"): 1})
    text = documents.to_dot(d, emb)
    assert text.startswith("digraph")
    assert text.index('"a";') < text.index('"b";')
    assert "color=" in text


def _run(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    return result


def test_cli_embed_verify_cycle(tmp_path):
    runner = CliRunner()
    g = tmp_path / "g.json"
    e = tmp_path / "e.json"
    res = _run(runner, ["gen", "--family", "st_fan", "--n", "6", "--seed", "3",
                        "--out", str(g)])
    assert res.exit_code == 0
    res = _run(runner, ["embed", "--class", "fan", "--in", str(g), "--out", str(e)])
    assert res.exit_code == 0
    assert "bound=2" in res.output
    res = _run(runner, ["verify", "--graph", str(g), "--embedding", str(e),
                        "--max-pages", "2"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["topological_ok"] and not report["crossings"]


def test_cli_verify_rejects_bad_embedding(tmp_path):
    runner = CliRunner()
    g = tmp_path / "g.json"
    e = tmp_path / "e.json"
    dag = build_dag(["a", "b", "c", "d"], [("a", "c"), ("b", "d")])
    g.write_text(documents.dumps(documents.graph_to_document(dag)))
    emb = BookEmbedding(("a", "b", "c", "d"), {("a", "c"): 1, ("b", "d"): 1})
    e.write_text(documents.dumps(documents.embedding_to_document(emb)))
    res = _run(runner, ["verify", "--graph", str(g), "--embedding", str(e)])
    assert res.exit_code == 1
    report = json.loads(res.output)
    assert report["crossings"]


def test_cli_family_mismatch_exit_2(tmp_path):
    runner = CliRunner()
    g = tmp_path / "g.json"
    _run(runner, ["gen", "--family", "one_sided", "--n", "8", "--seed", "1",
                  "--out", str(g)])
    res = runner.invoke(main, ["embed", "--class", "outerpath", "--in", str(g),
                               "--out", str(tmp_path / "x.json")])
    assert res.exit_code == 2


def test_cli_io_error_exit_3(tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["embed", "--class", "fan",
                               "--in", str(tmp_path / "missing.json"),
                               "--out", str(tmp_path / "x.json")])
    assert res.exit_code == 3


def test_cli_exact_and_decide(tmp_path):
    runner = CliRunner()
    g = tmp_path / "g.json"
    doc = documents.graph_to_document(
        build_dag(["a", "b", "c", "d"],
                  [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    )
    g.write_text(documents.dumps(doc))
    res = _run(runner, ["exact", "--in", str(g), "--max-pages", "3"])
    assert "ubt=2" in res.output
    res = _run(runner, ["decide", "--in", str(g), "--k", "2",
                        "--witness-out", str(tmp_path / "w.json")])
    assert "answer=yes" in res.output
    res = _run(runner, ["decide", "--in", str(g), "--k", "1"])
    assert "answer=no" in res.output


def test_cli_gadget_sizes(tmp_path):
    runner = CliRunner()
    g = tmp_path / "g.json"
    doc = documents.graph_to_document(
        build_dag(["x", "y", "z"], [("x", "y"), ("y", "z")])
    )
    g.write_text(documents.dumps(doc))
    res = _run(runner, ["gadget", "--in", str(g), "--k", "1",
                        "--out", str(tmp_path / "gp.json")])
    assert "vertices=15" in res.output


def test_cli_byte_determinism_subprocess(tmp_path):
    cmd = [
        sys.executable, "-m", "upbook.cli", "gen", "--family", "cactus",
        "--n", "30", "--seed", "5", "--out",
    ]
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    subprocess.run(cmd + [str(out1)], check=True, capture_output=True)
    subprocess.run(cmd + [str(out2)], check=True, capture_output=True)
    assert out1.read_bytes() == out2.read_bytes()

    emb1 = tmp_path / "ea.json"
    emb2 = tmp_path / "eb.json"
    base = [sys.executable, "-m", "upbook.cli", "embed", "--class", "cactus",
            "--in", str(out1), "--out"]
    subprocess.run(base + [str(emb1)], check=True, capture_output=True)
    subprocess.run(base + [str(emb2)], check=True, capture_output=True)
    assert emb1.read_bytes() == emb2.read_bytes()


def test_cli_dot_export(tmp_path):
    runner = CliRunner()
    g = tmp_path / "g.json"
    e = tmp_path / "e.json"
    _run(runner, ["gen", "--family", "st_fan", "--n", "5", "--seed", "2", "--out", str(g)])
    _run(runner, ["embed", "--class", "fan", "--in", str(g), "--out", str(e)])
    d = tmp_path / "g.dot"
    res = _run(runner, ["dot", "--graph", str(g), "--embedding", str(e), "--out", str(d)])
    assert res.exit_code == 0
    assert d.read_text().startswith("digraph")
