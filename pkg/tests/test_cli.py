import json
import subprocess
import sys

import pytest

from einstein_sp.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ricci_all_ones(capsys):
    code, out, _ = call(capsys, "ricci", "--fibration", "flag", "--n", "3", "--p", "2", "--metric", "1,1,1,1")
    assert code == EXIT_OK
    assert out.splitlines() == ["r0 = 1/4", "r1 = 1/4", "r2 = 11/32", "r3 = 1/4"]


def test_ricci_json(capsys):
    code, out, _ = call(capsys, "ricci", "--fibration", "wallach", "--k", "1,1,1", "--metric", "1,1,1,1,1",
                        "--json")
    doc = json.loads(out)
    assert out.endswith("\n")
    assert doc["ricci"] == {"1": "1/4", "2": "1/4", "12": "1/4", "13": "11/32", "23": "11/32"}


def test_roots_of_stored_h(capsys):
    code, out, _ = call(capsys, "roots", "--poly", "data/h_111.poly", "--positive", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["degree"] == 30
    approx = [r["approx"] for r in doc["roots"]]
    assert approx == pytest.approx([0.568723, 0.595776, 1.67848, 1.75833], abs=1e-5)


def test_system_symbolic_flag(capsys):
    code, out, _ = call(capsys, "system", "--fibration", "flag", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["vars"] == ["u0", "u1", "u2", "n", "p"] and len(doc["polys"]) == 3


def test_solve_flag_json_and_determinism(capsys):
    argv = ["solve", "--fibration", "flag", "--n", "4", "--p", "3", "--json"]
    first = call(capsys, *argv)
    second = call(capsys, *argv)
    assert first == second
    doc = json.loads(first[1])
    assert doc["count"] == len(doc["solutions"]) >= 2
    for rec in doc["solutions"]:
        assert set(rec) == {"spec", "branch", "coords", "lambda", "residual_bound", "class", "symmetry_partner"}
        for c in rec["coords"].values():
            lo, hi = c["interval"]
            assert isinstance(lo, str) and isinstance(hi, str)


def test_solve_wallach_json(capsys, wallach_111):
    code, out, _ = call(capsys, "solve", "--fibration", "wallach", "--k", "1,1,1", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["count"] == 8
    assert sorted(r["class"] for r in doc["solutions"]) == ["ADN"] * 2 + ["Jensen"] * 2 + ["New"] * 4


def test_groebner_file(tmp_path, capsys):
    f = tmp_path / "ideal.poly"
    f.write_text("vars: x, y\nx^2 - 1\nx*y - 1\n")
    code, out, _ = call(capsys, "groebner", "--input", str(f), "--order", "lex", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert sorted(doc["polys"]) == ["x - y", "y^2 - 1"]
    assert "seconds" not in doc["stats"]


def test_verify_point(capsys):
    code, out, _ = call(capsys, "verify-theorem-b", "--n", "4", "--p", "3")
    assert code == EXIT_OK
    assert out.strip().endswith("all claims verified")


@pytest.mark.parametrize("argv", [
    ["solve", "--bogus"],
    ["solve", "--fibration", "flag", "--n", "3", "--p", "3"],
    ["ricci", "--fibration", "flag", "--n", "3", "--p", "2", "--metric", "1,1"],
    ["roots", "--poly", "no/such/file.poly"],
    ["solve", "--fibration", "wallach", "--k", "1,1,1", "--digits", "40"],
    [],
])
def test_invalid_input_exits_1(capsys, argv):
    assert call(capsys, *argv)[0] == EXIT_INPUT


def test_budget_exhaustion_exits_2(capsys):
    code, _, err = call(capsys, "solve", "--fibration", "wallach", "--k", "1,2,1", "--max-pairs", "3")
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_budget_env(monkeypatch, capsys):
    monkeypatch.setenv("EINSTEIN_SP_BUDGET_SECONDS", "0.000001")
    code, _, _ = call(capsys, "solve", "--fibration", "wallach", "--k", "2,1,1")
    assert code == EXIT_BUDGET


def test_module_entry_point():
    argv = [sys.executable, "-m", "einstein_sp", "ricci", "--fibration", "flag", "--n", "3", "--p", "2",
            "--metric", "1,1,1,1"]
    a = subprocess.run(argv, capture_output=True, text=True, check=True)
    b = subprocess.run(argv, capture_output=True, text=True, check=True)
    assert a.stdout == b.stdout
    assert "r2 = 11/32" in a.stdout
