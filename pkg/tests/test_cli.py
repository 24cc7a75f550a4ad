import json
import subprocess
import sys

import pytest

from moufang.cli import (EXIT_GUARD, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, loop_to_json,
                         parse_loop_text, read_loop, run, table_hash)
from moufang.construct import paige_loop


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None), out


@pytest.fixture(scope="module")
def paige_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("loops") / "paige-q2.json"
    assert run(["construct", "paige-q2", "-o", str(path)]) == EXIT_OK
    return path


def test_round_trip_hash(paige_file):
    L = paige_loop(2)
    assert table_hash(read_loop(str(paige_file)).table) == table_hash(L.table)


def test_tsv_round_trip(tmp_path):
    L = paige_loop(2)
    path = tmp_path / "m2.tsv"
    path.write_text("\n".join("\t".join(map(str, r)) for r in L.table.tolist()))
    assert table_hash(read_loop(str(path)).table) == table_hash(L.table)


def test_pipe_construct_into_check():
    exe = [sys.executable, "-m", "moufang.cli"]
    loop = subprocess.run(exe + ["construct", "paige-q2"], capture_output=True, check=True).stdout
    res = subprocess.run(exe + ["check", "-"], input=loop, capture_output=True)
    assert res.returncode == EXIT_OK
    rep = json.loads(res.stdout)
    assert rep["results"]["moufang"] is True and rep["results"]["order"] == 120
    assert rep["results"]["associative"] is False


def test_check_reports_non_moufang(tmp_path, capsys):
    path = tmp_path / "five.json"
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    path.write_text(json.dumps({"order": 5, "table": t}))
    code, rep, _ = _run(capsys, "check", str(path))
    assert code == EXIT_NEGATIVE
    assert rep["results"]["moufang"] is False and len(rep["results"]["moufang_witness"]) == 3


def test_check_reports_non_latin(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"table": [[0, 1], [1, 1]]}))
    code, rep, _ = _run(capsys, "check", str(path))
    assert code == EXIT_NEGATIVE and rep["results"]["latin"] is False


def test_sylow_non_sylow_prime(paige_file, capsys):
    code, rep, _ = _run(capsys, "sylow", str(paige_file), "-p", "5")
    assert code == EXIT_NEGATIVE
    assert rep["results"]["verdict"] == "non-sylow" and rep["results"]["witness_q"] == [2]


def test_sylow_success_and_quasi(paige_file, capsys):
    code, rep, _ = _run(capsys, "sylow", str(paige_file), "-p", "2")
    assert code == EXIT_OK and rep["results"]["subloop_order"] == 8
    code, rep, _ = _run(capsys, "sylow", str(paige_file), "-p", "5", "--quasi")
    assert code == EXIT_OK and rep["results"]["quasi_order"] == 1


def test_series_and_radical(paige_file, capsys):
    code, rep, _ = _run(capsys, "series", str(paige_file))
    assert code == EXIT_OK
    assert rep["results"]["chain_orders"] == [1, 120]
    assert rep["results"]["factors"][0][0]["kind"] == "Paige"
    code, rep, _ = _run(capsys, "radical", str(paige_file), "--gr")
    assert rep["results"]["order"] == 1
    code, rep, _ = _run(capsys, "radical", str(paige_file), "--grp", "2")
    assert rep["results"]["order"] == 120


def test_mlt(paige_file, capsys):
    code, rep, _ = _run(capsys, "mlt", str(paige_file))
    assert code == EXIT_OK and rep["results"]["order"] == 174_182_400
    code, rep, _ = _run(capsys, "mlt", str(paige_file), "--inner")
    assert rep["results"]["order"] == 1_451_520


def test_psinn(tmp_path, capsys):
    path = tmp_path / "c.json"
    run(["construct", "chein-d4", "-o", str(path)])
    code, rep, _ = _run(capsys, "psinn", str(path))
    assert code == EXIT_OK and rep["results"]["order"] == 128


def test_psinn_budget_guard(paige_file, capsys, monkeypatch):
    monkeypatch.setenv("MOUFANG_BUDGET", "1000")
    code, rep, _ = _run(capsys, "psinn", str(paige_file))
    assert code == EXIT_GUARD and rep is None


def test_triality_extract(capsys):
    code, rep, _ = _run(capsys, "triality", "zpzp-5", "--extract-loop")
    assert code == EXIT_OK
    assert rep["results"]["loop"]["order"] == 5
    assert len(rep["results"]["embedding"]) == 5


def test_triality_unknown_archetype(capsys):
    assert run(["triality", "zz"]) == EXIT_USAGE


def test_modules(capsys):
    code, rep, _ = _run(capsys, "modules", "--chi", "3")
    assert code == EXIT_OK
    rows = rep["results"]["rows"]
    assert len(rows) == 6 and rep["results"]["all_agree"]
    assert [r["triality"] for r in rows] == [True] * 5 + [False]


def test_usage_errors(capsys):
    assert run([]) == EXIT_USAGE
    assert run(["sylow"]) == EXIT_USAGE
    assert run(["modules", "--chi", "5"]) == EXIT_USAGE
    assert run(["construct", "monster"]) == EXIT_USAGE
    assert run(["check", "/nonexistent/loop.json"]) == EXIT_USAGE


def test_large_construct_writes_descriptor(capsys):
    code, d, _ = _run(capsys, "construct", "paige-q4")
    assert code == EXIT_OK
    assert d == {"name": "paige-q4", "order": 16320,
                 "descriptor": {"construction": "paige", "q": 4}}


def test_descriptor_input_is_guarded(tmp_path, capsys):
    path = tmp_path / "big.json"
    run(["construct", "paige-q5", "-o", str(path)])
    assert run(["check", str(path)]) == EXIT_GUARD


def test_loop_to_json_guard():
    from moufang.errors import TableTooLarge

    class Big:
        order = 5000
    with pytest.raises(TableTooLarge):
        loop_to_json(Big())


def test_reports_are_byte_stable(paige_file, capsys):
    outs = []
    for _ in range(2):
        run(["--seed", "3", "check", str(paige_file)])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert "timing_s" not in outs[0]


def test_timing_flag(paige_file, capsys):
    code, rep, _ = _run(capsys, "--timing", "series", str(paige_file))
    assert "timing_s" in rep


def test_report_fields(paige_file, capsys):
    code, rep, _ = _run(capsys, "series", str(paige_file))
    assert set(rep) == {"command", "version", "results", "input"}
    assert rep["input"]["order"] == 120


def test_parse_order_mismatch():
    from moufang.errors import NotLatinSquare
    with pytest.raises(NotLatinSquare):
        parse_loop_text(json.dumps({"order": 3, "table": [[0, 1], [1, 0]]}))
