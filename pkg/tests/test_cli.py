import io
import json
import os
import subprocess
import sys

import pytest

from gradedvna.cli import main
from gradedvna.linalg import get_tolerances
from gradedvna.presets import build_preset, serialize_algebra


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_process(*argv):
    env = dict(os.environ, PYTHONIOENCODING="utf-8")
    return subprocess.run(
        [sys.executable, "-m", "gradedvna", *argv], capture_output=True, text=True, env=env, timeout=300
    )


def test_report_sp2():
    code, text = run("report", "--preset", "sp:2")
    assert code == 0
    assert text.splitlines()[0] == "sp:2: type I_2 ⊕ I_2, central, balanced, not a factor"
    assert "center dim 2 (even 1, odd 1)" in text


def test_report_mf21():
    code, text = run("report", "--preset", "mf:2,1")
    assert code == 0
    assert "type I_3, central, not balanced, a factor" in text


def test_report_json():
    code, text = run("report", "--preset", "sp:1", "--json")
    doc = json.loads(text)
    assert code == 0
    assert doc["type"] == "I_1 ⊕ I_1" and doc["balanced"] and not doc["factor"]
    assert doc["summands"] == [[1, 1], [1, 1]]


def test_report_from_file(tmp_path):
    path = tmp_path / "c2.json"
    path.write_text(serialize_algebra(build_preset("clifford:2"), "c2"), encoding="utf-8")
    code, text = run("report", str(path))
    assert code == 0 and "type I_2, central, balanced, a factor" in text


def test_tensor_doubling():
    code, text = run("tensor", "--preset", "sp:2", "--preset", "sp:3")
    assert code == 0
    assert "graded:   I_12, factor" in text
    assert "ordinary: I_6 ⊕ I_6 ⊕ I_6 ⊕ I_6, not a factor" in text
    assert "2mn rule: 2·2·3 = 12" in text


def test_tensor_factor_case():
    code, text = run("tensor", "--preset", "mf:1,1", "--preset", "mf:1,1")
    assert code == 0
    assert "graded:   I_4, factor" in text and "ordinary: I_4, factor" in text
    assert "2mn" not in text


def test_tensor_json_mixes_files_and_presets(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(serialize_algebra(build_preset("sp:1")), encoding="utf-8")
    code, text = run("tensor", str(path), "--preset", "sp:1", "--json")
    doc = json.loads(text)
    assert code == 0
    assert doc["inputs"] == [str(path), "sp:1"]
    assert doc["graded"]["summands"] == [[2, 2]]
    assert doc["doubling"] == {"holds": True, "index": 2, "m": 1, "n": 1}


def test_presets_listing():
    code, text = run("presets")
    assert code == 0 and "sp:n" in text and "clifford:k" in text
    code, text = run("presets", "--json")
    assert {d["syntax"] for d in json.loads(text)} >= {"mf:p,q", "sp:n"}


def test_table():
    code, text = run("table")
    assert code == 0
    assert "I_m (m finite)   ⊗̂ I_n (n finite)   -> I_mn" in text
    assert "I_m (m finite)   ⊗̂ I_n (n finite)   -> I_2mn" in text
    assert "out of scope (infinite-dimensional)" in text


def test_table_witness_json():
    code, text = run("table", "--witness", "--json")
    doc = json.loads(text)
    assert code == 0
    cells = [c for r in doc["rows"] for c in r["cells"].values()]
    assert cells.count("I_mn") == 1 and cells.count("I_2mn") == 1
    for w in doc["witnesses"]:
        assert set(w["type"].split(" ⊕ ")) == {w["expected"]}


def test_verify_single_case():
    code, text = run("verify", "--case", "12")
    assert code == 0
    assert text.startswith("PASS  12-clifford")
    assert text.rstrip().endswith("all passed")


@pytest.mark.parametrize(
    "argv",
    [
        ("report",),
        ("report", "--preset", "sp:1", "--preset", "sp:2"),
        ("tensor", "--preset", "sp:1"),
        ("report", "--preset", "nope:1"),
        ("report", "--preset", "sp:0"),
        ("report", "/does/not/exist.json"),
        ("frobnicate",),
        ("report", "--preset", "sp:1", "--seed", "xyz"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, _ = run(*argv)
    assert code == 2


def test_bad_document_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x"}', encoding="utf-8")
    code, _ = run("report", str(path))
    assert code == 2
    assert "missing field" in capsys.readouterr().err


def test_tolerances_restored_after_run():
    before = get_tolerances()
    run("report", "--preset", "sp:1", "--tol-eq", "1e-6", "--tol-rank", "1e-8")
    assert get_tolerances() == before


def test_verification_failure_exits_1():
    # at 1e-15 the constructed symmetries no longer pass their own unitarity check
    proc = run_process("verify", "--case", "14", "--tol-eq", "1e-15")
    assert proc.returncode == 1
    assert "FAIL  14-balance" in proc.stdout


def test_numerical_inconsistency_exits_3():
    # a rank tolerance this loose merges distinct spectral clusters
    proc = run_process("report", "--preset", "sp:3", "--tol-rank", "0.9")
    assert proc.returncode == 3
    assert "numerical inconsistency" in proc.stderr


def test_module_entry_point_seed_is_hex():
    proc = run_process("report", "--preset", "sp:1", "--seed", "0xC1F0", "--json")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["type"] == "I_1 ⊕ I_1"
