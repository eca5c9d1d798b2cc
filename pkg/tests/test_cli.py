import json
import subprocess
import sys

import pytest

from asaut import analyzer
from asaut.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def test_enumerate_json_schema(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, data, _ = run_json(capsys, "enumerate", "--n", "1", "--field-deg", "2", "--dump-automorphisms")
    assert code == 0
    assert not list(tmp_path.iterdir())
    assert {"n", "curve", "field_degree", "modulus", "modulus_bits", "count", "stabilized", "settled_by",
            "counts", "group_report", "automorphisms"} <= set(data)
    assert data["count"] == len(data["automorphisms"]) == 24
    assert data["modulus_bits"] == "111"
    assert set(data["automorphisms"][0]) == {"alpha", "beta", "gammas"}
    assert data["group_report"]["alias"] == "A_4"


def test_enumerate_stabilize_and_dump_file(capsys, tmp_path):
    path = tmp_path / "auts.json"
    code, out, err = run(capsys, "enumerate", "--n", "2", "--field-deg", "1", "--coeffs", "a_1=1", "--stabilize",
                         "--dump-automorphisms", str(path))
    assert code == 0
    assert "32 automorphisms" in out and "group structure verified" in out
    assert "[oracle] GF(2^12)" in err
    assert len(json.loads(path.read_text())) == 32


def test_analyze_text_and_json(capsys):
    code, out, _ = run(capsys, "analyze", "--n", "2")
    assert code == 0
    assert "Z_2^4 x| Z_5  #Aut=160  if a_1 = 0" in out
    code, data, _ = run_json(capsys, "analyze", "--n", "4", "--set", "a_3=0")
    assert code == 0 and data["presets"] == {"a_3": 0}
    assert sorted(s["aut_order"] for s in data["strata"]) == [128, 384, 1152]


def test_unipotent(capsys):
    code, data, _ = run_json(capsys, "unipotent", "--n", "2")
    assert code == 0
    assert data["beta_data"] == ["beta^16 + beta^8*a_1^4 + beta^2*a_1^2 + beta"]
    assert [s["l"] for s in data["beta_strata"]] == [4]


def test_classify_agrees_with_oracle(capsys):
    code, data, _ = run_json(capsys, "classify", "--n", "6", "--coeffs", "a_5=1")
    assert code == 0
    assert data["ra"] == "Z_2" and data["aut_order"] == 4 and data["agreement"] is True


def test_sz(capsys):
    code, data, _ = run_json(capsys, "sz", "--genus", "8", "--coeffs", "c_3=0")
    assert code == 0 and data["aut_order"] == 8704 and data["agreement"] is True
    code, out, _ = run(capsys, "sz", "--genus", "9")
    assert code == 0 and "Z_19" in out


@pytest.mark.parametrize("g", [3, 7])
def test_sz_none_rows(capsys, g):
    code, _, err = run(capsys, "sz", "--genus", str(g))
    assert code == 1
    assert "'none'" in err


@pytest.mark.parametrize("argv", [["bogus"], ["analyze"], ["enumerate", "--n", "1", "--field-deg", "17"],
                                  ["classify", "--n", "2", "--coeffs", "a_9=1"], ["sz", "--genus", "10"],
                                  ["analyze", "--n", "2", "--set", "beta=1"]])
def test_usage_errors_exit_1(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_budget_exit_2(capsys, monkeypatch):
    monkeypatch.setenv("ASAUT_LIMITS", "pairs=50")
    code, _, err = run(capsys, "analyze", "--n", "6", "--order", "lex", "--method", "direct")
    assert code == 2
    assert "limit exceeded" in err and "pairs=" in err
    monkeypatch.setenv("ASAUT_LIMITS", "nonsense=1")
    assert main(["analyze", "--n", "1"]) == 1


def test_table_and_golden_mismatch(capsys, monkeypatch):
    code, data, _ = run_json(capsys, "table", "--theorem", "3")
    assert code == 0 and data["mismatches"] == []
    rows = [dict(r) for r in analyzer.golden_table(3)]
    rows[0] = dict(rows[0], strata=[dict(rows[0]["strata"][0], aut_order=48)])
    monkeypatch.setattr(analyzer, "golden_table", lambda which: rows)
    code, out, _ = run(capsys, "table", "--theorem", "3")
    assert code == 3 and "mismatches" in out


def test_experiment_u2k(capsys):
    code, data, _ = run_json(capsys, "experiment-u2k", "--m", "2")
    assert code == 0
    assert data["patterns"]["powers_of_two"]["strata"][0]["U"] == "Z_2^6"


def test_console_entry_points():
    for cmd in (["asaut"], [sys.executable, "-m", "asaut"]):
        proc = subprocess.run(cmd + ["sz", "--genus", "7"], capture_output=True, text=True)
        assert proc.returncode == 1
        proc = subprocess.run(cmd + ["enumerate", "--n", "1", "--field-deg", "1"], capture_output=True, text=True)
        assert proc.returncode == 0 and "2 automorphisms" in proc.stdout
