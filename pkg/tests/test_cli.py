import io
import json
import os
import subprocess
import sys

import pytest

from taxograph.cli import EXIT_GOLDEN, EXIT_INVALID, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main
from taxograph.formats import dumps_document, export_edges, loads_document


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), io.StringIO(stdin), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def dcase_file(tmp_path, dcase):
    path = tmp_path / "t.json"
    path.write_text(dumps_document(dcase.graph), encoding="utf-8")
    return path


def test_init_writes_document(tmp_path, dcase):
    target = tmp_path / "t.json"
    code, out, err = run("init", "--dcase", "--out", str(target))
    assert code == EXIT_OK, err
    assert out == ""
    assert loads_document(target.read_text()) == dcase.graph


def test_init_edges_to_stdout(dcase):
    code, out, _ = run("init", "--dcase", "--format", "edges")
    assert code == EXIT_OK
    assert out == export_edges(dcase.graph)


def test_init_without_records_is_golden_mismatch():
    code, _, err = run("init", "--dcase", "--no-records")
    assert code == EXIT_GOLDEN
    assert "golden mismatch" in err


def test_cut_context_vector():
    code, out, _ = run("cut", "--kind", "context", "--vector")
    assert code == EXIT_OK
    assert out.split() == ["meeting", "office", "shopping"]


def test_vector_of_file(dcase_file, dcase):
    code, out, _ = run("vector", str(dcase_file))
    assert code == EXIT_OK
    assert out.splitlines() == sorted(dcase.graph.texts)


def test_validate_fresh_graph(dcase_file):
    code, out, _ = run("validate", str(dcase_file))
    assert code == EXIT_OK
    assert "0 errors" in out


def test_validate_reports_errors(tmp_path):
    doc = {
        "format": "taxograph",
        "format_version": 1,
        "labels": [{"text": "a", "kind": "untagged", "subsets": [], "clusters": ["s"]}],
        "clusters": [{"name": "s", "members": ["a"]}],
        "cross_edges": [],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run("validate", str(path))
    assert code == EXIT_INVALID
    assert "MISSING_SUBSET_KIND" in out


def test_add_speech_is_duplicate(dcase_file):
    code, out, _ = run("add", "speech", "--cluster", "d13t2", "--kind", "event", "--graph", str(dcase_file))
    assert code == EXIT_OK
    assert "'speech': duplicate" in out


def test_add_writes_new_document_without_touching_input(tmp_path, dcase_file):
    before = dcase_file.read_bytes()
    target = tmp_path / "new.json"
    code, out, _ = run("add", "Frying pan", "--cluster", "kitchen", "--kind", "event", "--graph", str(dcase_file), "--out", str(target))
    assert code == EXIT_OK
    assert dcase_file.read_bytes() == before
    graph = loads_document(target.read_text())
    assert {"frying", "pan"} <= graph.texts


def test_add_document_to_stdout_report_to_stderr():
    code, out, err = run("add", "zither", "--cluster", "strings", "--kind", "event", "--empty", "--out", "-")
    assert code == EXIT_OK
    assert loads_document(out).texts == {"zither"}
    assert "'zither': added" in err


def test_merge_file(tmp_path):
    labels = tmp_path / "labels.txt"
    labels.write_text("# kitchen\nglass jingling\nwashing dishes\n")
    code, out, _ = run("merge", str(labels), "--cluster", "kitchen", "--kind", "event", "--empty")
    assert code == EXIT_OK
    assert "4 added" in out


def test_merge_with_error_exits_invalid(tmp_path):
    labels = tmp_path / "labels.txt"
    labels.write_text("(nothing)\n")
    code, out, _ = run("merge", str(labels), "--cluster", "kitchen", "--kind", "event", "--empty")
    assert code == EXIT_INVALID
    assert "EmptyLabel" in out


def test_union_and_diff(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run("add", "cough", "--cluster", "x", "--kind", "event", "--empty", "--out", str(a))
    run("add", "coughing", "--cluster", "y", "--kind", "environment", "--empty", "--out", str(b), "--thesaurus", os.devnull)
    code, out, _ = run("union", str(a), str(b))
    assert code == EXIT_OK
    assert loads_document(out).texts == {"cough"}
    code, out, _ = run("diff", str(a), str(b))
    assert code == EXIT_INVALID
    assert "- cough" in out and "+ coughing" in out
    assert run("diff", str(a), str(a))[0] == EXIT_OK


def test_edges_round_trip_through_cli(tmp_path, dcase_file):
    edges = tmp_path / "t.edges"
    assert run("export-edges", str(dcase_file), "--out", str(edges))[0] == EXIT_OK
    code, out, _ = run("import-edges", str(edges))
    assert code == EXIT_OK
    assert loads_document(out) == loads_document(dcase_file.read_text())


def test_import_from_stdin():
    code, out, _ = run("import-edges", "-", stdin="#taxograph-edges v1\n@cluster s\na [event]\n")
    assert code == EXIT_OK
    assert loads_document(out).texts == {"a"}


def test_parse_error_exit(tmp_path):
    bad = tmp_path / "bad.edges"
    bad.write_text("#taxograph-edges v1\n@cluster s\nA [event]\n")
    code, _, err = run("import-edges", str(bad))
    assert code == EXIT_PARSE
    assert ":3" in err or "line 3" in err


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["add", "x"], ["cut", "--mode", "xor", "--kind", "event"], ["cut"]])
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_thesaurus_env_var(tmp_path, monkeypatch):
    thes = tmp_path / "thes.txt"
    thes.write_text("zither | cithara\n")
    monkeypatch.setenv("TAXOGRAPH_THESAURUS", str(thes))
    code, out, _ = run("add", "cithara", "--cluster", "strings", "--kind", "event", "--empty")
    assert code == EXIT_OK
    assert "cithara -> zither" in out


def test_export_data(tmp_path):
    code, out, _ = run("export-data", str(tmp_path / "data"))
    assert code == EXIT_OK
    assert (tmp_path / "data" / "thesaurus.txt").exists()
    code, _, _ = run("init", "--dcase", "--data-dir", str(tmp_path / "data"))
    assert code == EXIT_OK


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "taxograph", "cut", "--kind", "context", "--vector"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "meeting\noffice\nshopping\n"
