import json
import subprocess
import sys

import pytest

from aswcartier.cli import main, run


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_anumber_one_point(capsys):
    code, out, _ = call(capsys, "anumber", "--f", "x")
    assert code == 0 and json.loads(out) == {"a": 3, "g": 6, "rank": 3}


def test_anumber_sampled_profile(capsys):
    code, out, _ = call(capsys, "anumber", "--profile", "0,1,0,0", "--infinity-order", "2")
    assert code == 0 and json.loads(out)["a"] == 7


def test_formats(capsys):
    _, out, _ = call(capsys, "anumber", "--f", "x", "--format", "csv")
    assert out == "g,rank,a\n6,3,3\n"
    _, out, _ = call(capsys, "anumber", "--f", "x", "--format", "table")
    assert out.splitlines()[1].split() == ["6", "3", "3"]
    _, out, _ = call(capsys, "matrix", "--f", "x", "--format", "csv")
    assert out.splitlines()[4].startswith("y1^2*dx,1,0")


@pytest.mark.parametrize("argv,code_name", [
    (["anumber", "--f", "x^^"], "parse_error"),
    (["anumber"], "bad_input"),
    (["anumber", "--h", "x"], "bad_input"),
    (["sample", "--profile", "1,2"], "bad_input"),
    (["verify", "--trials", "0"], "bad_input"),
    (["anumber", "--f", "x", "--p", "4"], "not_prime"),
    (["anumber", "--f", "1/x + x", "--h", "x^-5 - (x-1)^-1"], "non_standard_form"),
])
def test_rejected_input_exits_2(capsys, argv, code_name):
    code, out, err = call(capsys, *argv)
    assert code == 2 and not out
    assert json.loads(err)["error"] == code_name


def test_info_on_non_minimal_example(capsys):
    code, out, _ = call(capsys, "info", "--f", "1/x + x", "--h", "x^-5 - (x-1)^-1")
    obj = json.loads(out)
    assert code == 0
    assert obj["genus"] == obj["basis_size"] == 32
    assert obj["valid"] and not obj["minimal"] and obj["basis_regular"] is False


def test_sample_and_cover_file_round_trip(capsys, tmp_path):
    code, out, _ = call(capsys, "sample", "--profile", "1,1,1,0", "--seed", "3")
    assert code == 0
    path = tmp_path / "cover.json"
    path.write_text(out)
    _, a1, _ = call(capsys, "anumber", "--cover", str(path))
    _, a2, _ = call(capsys, "anumber", "--profile", "1,1,1,0", "--seed", "3")
    assert a1 == a2 and json.loads(a1)["a"] == 10


def test_bad_cover_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, _, err = call(capsys, "info", "--cover", str(path))
    assert code == 2 and json.loads(err)["error"] == "bad_input"


def test_keyterms_command(capsys):
    code, out, _ = call(capsys, "keyterms", "--f", "x^2")
    obj = json.loads(out)
    assert code == 0 and obj["K"] == 9 and obj["hypothesis_ok"]


def test_tables_match(capsys):
    code, out, _ = call(capsys, "tables")
    obj = json.loads(out)
    assert code == 0 and obj["ok"] and len(obj["comparison"]) == 6


def test_verify_small_run(capsys):
    code, out, _ = call(capsys, "verify", "--trials", "4", "--seed", "2")
    obj = json.loads(out)
    assert code == 0 and obj["ok"]
    assert obj["summary"]["a_formula"] == "4/4"


def test_verify_other_prime(capsys):
    code, out, _ = call(capsys, "verify", "--p", "5", "--trials", "2", "--seed", "1", "--k", "1")
    assert code == 0 and "a_formula" not in json.loads(out)["summary"]


def test_probe_image(capsys):
    code, out, _ = call(capsys, "probe-image", "--seed", "1")
    obj = json.loads(out)
    assert code == 0 and obj["found"]


def test_runs_are_deterministic():
    argv = ["verify", "--trials", "3", "--seed", "11"]
    assert run(argv) == run(argv)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "aswcartier.cli", "anumber", "--f", "x^2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["a"] == 7
