import json
import subprocess
import sys

import pytest

from bakerforge.cli import SCHEMA, dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_example_integers(capsys):
    code, out, _ = run(capsys, "example", "integers", "--m", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == SCHEMA and doc["ok"] is True
    assert all(doc["report"]["checks"].values())


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--alpha", "0,1,2")
    doc = json.loads(out)
    assert code == 0
    rep = doc["report"]
    assert rep["g"]["g1"] == 1 and "capA" in rep["theorem"]


def test_output_is_deterministic(capsys):
    a = run(capsys, "compare", "--alpha", "0,1,2", "--corpus", "20")[1]
    b = run(capsys, "compare", "--alpha", "0,1,2", "--corpus", "20")[1]
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["constants"],
        ["nosuchcommand"],
        ["constants", "--alpha", "0,1,2", "--precision", "8"],
        ["constants", "--alpha", "0,1,2", "--precision", "99999"],
        ["pade", "build", "--alpha", "0,1,2"],
        ["constants", "--alpha", "0,1,1"],
        ["constants", "--alpha", "0,1"],
        ["constants", "--alpha", "0,1,2", "--field", "Q(sqrt(-4))"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_pade_build_then_forms_eval(capsys, tmp_path):
    path = tmp_path / "sys.json"
    code, _, _ = run(capsys, "pade", "build", "--alpha", "0,1,2", "--l", "3,3", "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "forms", "eval", "--system", str(path), "--precision", "256")
    doc = json.loads(out)
    assert code == 0 and doc["report"]["raw_bounds"]["all"] is True
    assert all(doc["report"]["forms"]["checks"].values())


def test_forms_eval_inline(capsys):
    code, out, _ = run(capsys, "forms", "eval", "--alpha", "0,i,1+i", "--field", "Q(i)", "--l", "2,2")
    assert code == 0 and json.loads(out)["ok"]


def test_siegel_solve(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([[{"a": 3, "b": 0}, {"a": 5, "b": 0}]]))
    code, out, _ = run(capsys, "siegel", "solve", "--matrix", str(path))
    doc = json.loads(out)
    assert code == 0 and doc["report"]["solution"]["max_norm"] == 25


def test_z_of(capsys):
    code, out, _ = run(capsys, "z-of", "--y", "100", "--format", "text")
    assert code == 0 and "ok: True" in out


def test_bound_variants(capsys):
    for argv in (
        ["bound", "thm", "--alpha", "0,1,2", "--log-H", "exp(442)"],
        ["bound", "cor22", "--alpha", "0,1,2", "--log-H", "exp(442)"],
        ["bound", "cor23", "--alpha", "0,1,2"],
        ["bound", "cor24", "--gamma", "0,1,2"],
    ):
        code, out, _ = run(capsys, *argv)
        assert code == 0, argv
        assert json.loads(out)["schema"] == SCHEMA


def test_check_csv_table(capsys):
    code, out, _ = run(capsys, "check", "--alpha", "0,1", "--box", "1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 + 8 and "beta" in lines[0]


def test_example_gaussian_and_harmonic(capsys):
    assert run(capsys, "example", "gaussian_disk", "--r", "sqrt(2)")[0] == 0
    assert run(capsys, "example", "harmonic", "--m", "3")[0] == 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "bakerforge", "z-of", "--y", "10"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["ok"]


def test_selftest_quick(capsys):
    code, out, err = run(capsys, "selftest", "--quick")
    doc = json.loads(out)
    assert code == 0 and doc["report"]["ok"] is True
    assert "timings" in err
