from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from qsieve.cli import main
from qsieve.exceptional import format_table, load_table


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalan_text(capsys):
    code, out, _ = run(capsys, "catalan", "A", "4", "5")
    assert code == 0
    assert "verdict: pass" in out
    code, out, _ = run(capsys, "catalan", "A", "4", "5", "--format=json")
    obj = json.loads(out)
    items = {i["key"]: i["value"] for i in obj["items"]}
    assert items["Cat(q=1)"] == 14


def test_catalan_not_very_good_is_usage_error(capsys):
    code, _, err = run(capsys, "catalan", "B", "2", "4")
    assert code == 2
    assert "very good" in err


def test_catalan_exceptional_json_schema(capsys):
    code, out, _ = run(capsys, "catalan", "G2", "-", "5", "--format=json")
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"command", "parameters", "verdict", "items", "elapsed_ms"}
    assert obj["command"] == "catalan" and obj["verdict"] == "pass"
    for item in obj["items"]:
        assert set(item) == {"key", "value", "status"}
    polys = [i["value"] for i in obj["items"] if isinstance(i["value"], list)]
    assert polys and all(len(pair) == 2 for pair in polys[0])


def test_kreweras_examples(capsys):
    code, out, _ = run(capsys, "kreweras", "A", "4", "[3,1]", "5")
    assert code == 0 and "q^7 + q^8 + q^9 + q^10" in out
    code, out, _ = run(capsys, "kreweras", "D", "4", "[3,3,1,1]", "9", "--format=json")
    obj = json.loads(out)
    polys = [i["value"] for i in obj["items"] if isinstance(i["value"], list)]
    assert [[14, 2], [16, 4], [18, 6], [20, 7], [22, 5], [24, 3], [26, 1]] in polys


def test_kreweras_bad_partition(capsys):
    code, _, _ = run(capsys, "kreweras", "A", "4", "[3,1", "5")
    assert code == 2
    code, _, _ = run(capsys, "kreweras", "B", "2", "[2,2]", "3")
    assert code == 2


def test_narayana_and_sieve(capsys):
    assert run(capsys, "narayana", "A", "4", "5", "1")[0] == 0
    assert run(capsys, "narayana", "D", "4", "5", "1")[0] == 2
    code, out, _ = run(capsys, "sieve", "A", "4", "[2,2]", "1", "2", "--format=json")
    assert code == 0
    assert any(i["value"] == 2 for i in json.loads(out)["items"])


def test_csp_lists_all_divisors(capsys):
    code, out, _ = run(capsys, "csp", "A", "4", "1", "--format=csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value,status"
    for d in (1, 2, 4):
        assert any(f"d={d}," in ln for ln in lines)
    assert all(ln.endswith("pass") for ln in lines[1:])


def test_csp_guard_is_usage_error(capsys):
    code, _, err = run(capsys, "csp", "A", "15", "1")
    assert code == 2 and "guard" in err


def test_nilcount(capsys):
    code, out, _ = run(capsys, "nilcount", "A", "2", "3", "--format=json")
    assert code == 0
    items = {i["key"]: i["value"] for i in json.loads(out)["items"]}
    assert items["rank 1"] == 8
    assert run(capsys, "nilcount", "D", "4", "3")[0] == 2


def test_exceptional_and_selftest(capsys):
    assert run(capsys, "exceptional", "G2", "5", "7")[0] == 0
    assert run(capsys, "exceptional", "H3")[0] == 2
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "verdict: pass" in out


def test_corrupted_table_exits_one(capsys, tmp_path):
    text = format_table(load_table()).replace("q^{2m-2}", "q^{2m-1}", 1)
    bad = tmp_path / "t.txt"
    bad.write_text(text, encoding="utf-8")
    code, out, _ = run(capsys, "exceptional", "G2", "5", "--table", str(bad))
    assert code == 1 and "verdict: fail" in out


def test_malformed_table_exits_two(capsys, tmp_path):
    bad = tmp_path / "t.txt"
    bad.write_text("G2 | A1 | 1 | 1 | [m-1\n", encoding="utf-8")
    assert run(capsys, "exceptional", "G2", "5", "--table", str(bad))[0] == 2
    assert run(capsys, "exceptional", "G2", "5", "--table", str(tmp_path / "missing"))[0] == 2


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["catalan", "A"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])
    assert run(capsys, "catalan", "X", "3", "5")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["csp", "B", "2", "1"],
        ["kreweras", "C", "3", "[2,2,1,1]", "7"],
        ["exceptional", "F4", "5"],
    ],
)
def test_json_is_deterministic(capsys, argv):
    first = run(capsys, *argv, "--format=json", "--no-timing")
    second = run(capsys, *argv, "--format=json", "--no-timing")
    assert first == second
    assert json.loads(first[1])["elapsed_ms"] == 0


@pytest.mark.skipif(shutil.which("qsieve") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["qsieve", "catalan", "A", "4", "5"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "verdict: pass" in proc.stdout
