import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from hypercubical.cli import run

CORPUS = Path(__file__).parent / "corpus"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_presentations_verify_builtin():
    code, out, _ = call("presentations", "verify")
    assert code == 0
    assert out.count("order: 8 (expected 8) ok") == 4
    assert "x->i, y->j, z->-k" in out


def test_presentations_verify_json():
    code, out, _ = call("presentations", "verify", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert [r["order"] for r in doc["results"]] == [8, 8, 8, 8]


def test_presentations_corrupted_file(tmp_path):
    f = tmp_path / "rels.txt"
    f.write_text("# quaternion presentations\ngood: <i, j | i=jij, j=iji>\nbroken: <i, j | i=jij, j=ij>\n")
    code, out, _ = call("presentations", "verify", "--file", str(f))
    assert code == 1
    assert "broken" in out and "order: 2 (expected 8) FAILED" in out
    assert "offending relation: j=ij" in out


def test_presentations_unparsable_file(tmp_path):
    f = tmp_path / "rels.txt"
    f.write_text("<i, j | i=q>\n")
    assert call("presentations", "verify", "--file", str(f))[0] == 2
    assert call("presentations", "verify", "--file", str(tmp_path / "missing.txt"))[0] == 2


def test_presentations_budget(tmp_path, monkeypatch):
    monkeypatch.setenv("HYPERCUBICAL_MAX_COSETS", "100")
    f = tmp_path / "rels.txt"
    f.write_text("<i, j | i^2, j^2>\n")
    assert call("presentations", "verify", "--file", str(f))[0] == 3


def test_complex_build_round_trip(tmp_path):
    code, out, _ = call("complex", "build", "--hm-skeleton", "3", "--format", "json")
    assert code == 0
    path = tmp_path / "hm.json"
    path.write_text(out)
    code, text, _ = call("homology", "--input", str(path))
    assert code == 0
    assert text == "H_0 = Z\nH_1 = Z/2 ⊕ Z/2\nH_2 = 0\nH_3 = Z\n"
    # the CLI output and the corpus copy describe the same complex
    assert json.loads(out)["squares"] == json.loads((CORPUS / "hm.json").read_text())["squares"]


def test_complex_build_tesseract_outputs(tmp_path):
    code, out, _ = call("complex", "build", "--tesseract", "--output", str(tmp_path / "t.txt"))
    assert code == 0 and out == ""
    assert (tmp_path / "t.txt").read_text().startswith("counts: 16, 32, 24, 8")
    code, dot, _ = call("complex", "build", "--tesseract", "--format", "dot")
    assert code == 0 and dot.startswith("digraph tesseract {") and dot.count("->") == 32


def test_cover_check_tesseract():
    code, out, _ = call("cover", "--hm-skeleton", "3", "--check-tesseract")
    assert code == 0
    assert "isomorphic: true" in out and "counts: 16, 32, 24, 8" in out
    code, out, _ = call("cover", "--hm-skeleton", "2", "--check-tesseract")
    assert code == 1 and "isomorphic: false" in out
    code, out, _ = call("cover", "--hm-skeleton", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["counts"] == [16, 32, 0, 0] and "a.i-" in doc["complex"]["vertices"]


def test_homology_sources():
    assert call("homology", "--hm")[1] == "H_0 = Z\nH_1 = Z/2 ⊕ Z/2\nH_2 = 0\nH_3 = Z\n"
    assert call("homology", "--tesseract")[1] == "H_0 = Z\nH_1 = 0\nH_2 = 0\nH_3 = Z\n"
    assert call("homology", "--cover-hm")[1] == "H_0 = Z\nH_1 = 0\nH_2 = 0\nH_3 = Z\n"


def test_homology_of_chain_complex_json(tmp_path):
    path = tmp_path / "rp2.json"
    path.write_text(json.dumps({"ranks": [1, 1, 1], "boundaries": [[[0]], [[2]]]}))
    assert call("homology", "--input", str(path))[1] == "H_0 = Z\nH_1 = Z/2\nH_2 = 0\n"
    path.write_text(json.dumps({"ranks": [1, 1], "boundaries": [[[1]], [[1]]]}))
    assert call("homology", "--input", str(path))[0] == 2


@pytest.mark.parametrize("path", sorted(CORPUS.glob("invalid_*.json")), ids=lambda p: p.stem)
def test_homology_invalid_input_exit_2(path):
    code, _, err = call("homology", "--input", str(path))
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize("path", sorted(p for p in CORPUS.glob("*.json") if not p.stem.startswith("invalid")), ids=lambda p: p.stem)
def test_homology_valid_corpus_exit_0(path):
    assert call("homology", "--input", str(path))[0] == 0


def test_cayley():
    code, out, _ = call("cayley", "--check-subquotient")
    assert code == 0
    assert "8 vertices, 16 edges" in out and "isomorphic: true" in out
    code, dot, _ = call("cayley", "--check-subquotient", "--format", "dot")
    assert dot.count("->") == 16


def test_resolution():
    code, out, _ = call("resolution", "--n", "2", "--group-homology", "6")
    assert code == 0
    assert "exactness range: 6 (expected 6)" in out
    assert "H_3 = Z/8" in out
    code, out, _ = call("resolution", "--n", "1", "--format", "json", "--emit-matrices")
    doc = json.loads(out)
    assert doc["zg_ranks"] == [2, 4, 3, 1] and doc["z_ranks"] == [16, 32, 24, 8]
    assert len(doc["complex"]["boundaries"]) == 3


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["complex", "build"],
        ["complex", "build", "--hm-skeleton", "5"],
        ["complex", "build", "--hm-skeleton", "1", "--tesseract"],
        ["homology"],
        ["resolution", "--n", "0"],
        ["resolution", "--n", "2", "--group-homology", "-1"],
        ["resolution", "--n", "2", "--format", "dot"],
        ["resolution", "--n", "1", "--group-homology", "3"],
        ["presentations", "check"],
    ],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hypercubical", "homology", "--hm", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["schema"] == 1 and doc["homology"][1]["torsion"] == [2, 2]
