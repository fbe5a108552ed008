import json
import shlex
import subprocess
import sys

import pytest

from diophantus.cli import EXIT_DEGENERATE, EXIT_ERROR, EXIT_USAGE, main

RECORD_FIELDS = {"command", "family", "n", "d", "status", "witness", "certificate", "place", "local_reports", "elapsed_ms"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    records = [json.loads(line) for line in out.splitlines() if line.strip()]
    return code, records, err


def strip_time(record):
    return {k: v for k, v in record.items() if k != "elapsed_ms"}


# ---------------------------------------------------------------- decide


def test_decide_d34_solvable(capsys):
    code, [rec], _ = run(capsys, "decide", "--family", "d34", "--n", "2")
    assert code == 0
    assert rec["status"] == "Solvable" and rec["witness"] == [6, 1]
    assert set(rec) == RECORD_FIELDS


def test_decide_d34_obstructed(capsys):
    code, [rec], _ = run(capsys, "decide", "--family", "d34", "--n", "-1")
    assert code == 1
    assert rec["status"] == "Unsolvable"
    assert rec["certificate"]["character"] == "Theta" and rec["certificate"]["value"] == -1


def test_decide_negpell(capsys):
    code, [rec], _ = run(capsys, "decide", "--family", "negpell", "--d", "34")
    assert code == 1 and rec["status"] == "Unsolvable"
    code, [rec], _ = run(capsys, "decide", "--family", "negpell", "--d", "2")
    assert code == 0 and rec["witness"] == [1, 1]


def test_decide_locally_unsolvable_exits_one(capsys):
    code, [rec], _ = run(capsys, "decide", "--family", "gauss64", "--n", "5")
    assert code == 1 and rec["status"] == "LocallyUnsolvable" and rec["place"] == 2
    code, [rec], _ = run(capsys, "decide", "--family", "gauss64", "--n", "3")
    assert code == 1 and rec["place"] == 3


def test_decide_split_and_x2dy2(capsys):
    code, [rec], _ = run(capsys, "decide", "--family", "split", "--d", "4", "--n", "5")
    assert code == 0
    x, y = rec["witness"]
    assert x * x - 4 * y * y == 5
    code, [rec], _ = run(capsys, "decide", "--family", "x2dy2prime", "--d", "64", "--n", "73")
    assert code == 0
    x, y = rec["witness"]
    assert x * x + 64 * y * y == 73


def test_schema_is_the_same_across_families(capsys):
    cases = [
        ("gauss64", "--n", "17"),
        ("d34", "--n", "33"),
        ("multinorm534", "--n", "16"),
        ("x2dy2prime", "--d", "64", "--n", "17"),
        ("negpell", "--d", "13"),
    ]
    for family, *rest in cases:
        _, [rec], _ = run(capsys, "decide", "--family", family, *rest)
        assert set(rec) == RECORD_FIELDS, family
        assert rec["family"] == family


@pytest.mark.parametrize(
    "argv",
    [
        ["decide", "--family", "d34", "--n", "2"],
        ["decide", "--family", "gauss64", "--n", "1"],
        ["decide", "--family", "multinorm534", "--n", "-1"],
        ["profile", "--family", "d34", "--n", "33"],
        ["local", "--eq", "1,0,-34,0,0,0", "--n", "-1"],
        ["witness", "--d", "34", "--n", "33", "--count", "3"],
    ],
)
def test_record_command_reproduces_record(capsys, argv):
    code, records, _ = run(capsys, *argv)
    again_argv = shlex.split(records[0]["command"])[1:]
    code2, again, _ = run(capsys, *again_argv)
    assert code == code2
    assert [strip_time(r) for r in records] == [strip_time(r) for r in again]


# ---------------------------------------------------------------- errors


def test_usage_errors(capsys):
    assert run(capsys, "decide", "--family", "nope", "--n", "1")[0] == EXIT_USAGE
    assert run(capsys, "decide", "--family", "d34")[0] == EXIT_USAGE
    assert run(capsys, "decide", "--family", "d34", "--n", "abc")[0] == EXIT_USAGE
    assert run(capsys, "decide", "--family", "split", "--d", "5", "--n", "1")[0] == EXIT_USAGE
    assert run(capsys, "local", "--eq", "1,2", "--n", "1")[0] == EXIT_USAGE
    code, records, err = run(capsys, "frobnicate")
    assert code == EXIT_USAGE and not records and err


def test_degenerate_exit(capsys):
    code, records, err = run(capsys, "local", "--eq", "1,2,1,0,0,0", "--n", "3")
    assert code == EXIT_DEGENERATE and not records and "degenerate" in err


def test_domain_errors_exit_above_two(capsys):
    assert run(capsys, "decide", "--family", "gauss64", "--n", "0")[0] == EXIT_ERROR
    assert run(capsys, "decide", "--family", "negpell", "--d", "9")[0] == EXIT_ERROR
    assert run(capsys, "decide", "--family", "x2dy2prime", "--d", "64", "--n", "15")[0] == EXIT_ERROR


# ---------------------------------------------------------------- verify


def test_verify_ranges(capsys):
    code, [rec], _ = run(capsys, "verify", "--family", "d34", "--range", "-5000:5000")
    assert code == 0 and rec["mismatches"] == 0 and rec["tested"] == 10000
    code, [rec], _ = run(capsys, "verify", "--family", "d34", "--range", "0:0")
    assert code == 0 and rec["tested"] == 0


def test_verify_workers_do_not_change_output(capsys):
    _, [one], _ = run(capsys, "verify", "--family", "gauss64", "--range", "1:3000")
    _, [four], _ = run(capsys, "verify", "--family", "gauss64", "--range", "1:3000", "--workers", "3")
    drop = lambda r: {k: v for k, v in r.items() if k not in ("elapsed_ms", "command")}
    assert drop(one) == drop(four)


@pytest.mark.slow
def test_verify_gauss64_full_range(capsys):
    code, [rec], _ = run(capsys, "verify", "--family", "gauss64", "--range", "1:100000")
    assert code == 0 and rec["tested"] == 100000


def test_verify_wrong_oracle(capsys):
    code, _, _ = run(capsys, "verify", "--family", "d34", "--range", "1:10", "--oracle", "brute")
    assert code == EXIT_ERROR


# ---------------------------------------------------------------- profile and local


def test_profile_minus_one(capsys):
    code, records, _ = run(capsys, "profile", "--family", "d34", "--n", "-1")
    assert code == 1
    entries, final = records[:-1], records[-1]
    assert any(e["place"] == 2 and e["character"] == "Theta" and e["value"] == -1 and not e["free_sign"] for e in entries)
    assert final["combinable"] is False


def test_profile_free_signs(capsys):
    code, records, _ = run(capsys, "profile", "--family", "d34", "--n", "33")
    assert code == 0
    assert sum(r.get("free_sign", False) for r in records[:-1]) == 2
    assert records[-1]["combinable"] is True
    code, records, _ = run(capsys, "profile", "--family", "d34", "--n", "2")
    assert code == 0
    assert all(r["value"] == 1 for r in records[:-1])


def test_profile_locally_unsolvable(capsys):
    code, [rec], _ = run(capsys, "profile", "--n", "3")
    assert code == 1 and rec["status"] == "LocallyUnsolvable"


def test_local_records(capsys):
    code, records, _ = run(capsys, "local", "--eq", "1,0,-34,0,0,0", "--n", "-1")
    assert code == 0 and all(r["solvable"] for r in records)
    code, records, _ = run(capsys, "local", "--eq", "1,0,16,0,16,4", "--n", "3")
    assert code == 1
    # 3 also fails there: x^2 + 4(2y+1)^2 never hits 3 mod 9
    assert [r["place"] for r in records if not r["solvable"]] == [2, 3]
    code, records, _ = run(capsys, "local", "--eq", "1,0,1,0,0,0", "--n", "-1")
    assert code == 1
    # -1 = 7 mod 8 is not a sum of two 2-adic squares either
    assert [r["place"] for r in records if not r["solvable"]] == ["inf", 2]


# ---------------------------------------------------------------- table precedence


def _write_table(path, poly):
    path.write_text("# d coefficients\n64 " + " ".join(map(str, poly)) + "\n")
    return str(path)


def test_table_flag_beats_environment(capsys, tmp_path, monkeypatch):
    # x^4 - 2 is the right polynomial; x^4 - 3 gives wrong answers, which makes the source visible
    good = _write_table(tmp_path / "good.txt", (-2, 0, 0, 0, 1))
    bad = _write_table(tmp_path / "bad.txt", (-3, 0, 0, 0, 1))
    # 73 = 3^2 + 64 * 1^2; x^4 = 3 has no root mod 73
    args = ["decide", "--family", "x2dy2prime", "--d", "64", "--n", "73"]
    monkeypatch.setenv("DIOPHANTUS_TABLE", bad)
    assert run(capsys, *args)[1][0]["status"] == "Unsolvable"
    assert run(capsys, *args, "--table", good)[1][0]["status"] == "Solvable"
    monkeypatch.delenv("DIOPHANTUS_TABLE")
    assert run(capsys, *args)[1][0]["status"] == "Solvable"


def test_missing_table_is_an_error(capsys, tmp_path):
    args = ["decide", "--family", "x2dy2prime", "--d", "64", "--n", "73", "--table", str(tmp_path / "none.txt")]
    assert run(capsys, *args)[0] == EXIT_ERROR


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "diophantus", "decide", "--family", "d34", "--n", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["witness"] == [6, 1]
