import json
import subprocess
import sys

import pytest

from lladic.cli import run

PREC = ["--precision", "12"]


def _emit(tmp_path, name, *argv):
    out = tmp_path / f"{name}.json"
    code = run(list(argv) + PREC + ["--out", str(out)])
    return code, out


def _strip_timing(text):
    data = json.loads(text)
    data.pop("timing_ms")
    return data


@pytest.mark.parametrize("argv,expected", [
    (["ring", "info", "cyc(Q7)"], 0),
    (["pairing", "construct", "--group", "Q2"], 0),
    (["pairing", "construct", "--group", "mu5xC2"], 0),
    (["pairing", "construct", "--group", "Q2xmu5"], 3),
    (["stabilize"], 0),
    (["reduce"], 0),
    (["reduce", "--real"], 3),
    (["sharpness", "verify", "--kind", "prop61"], 0),
    (["sharpness", "verify", "--kind", "thm62"], 0),
    (["sharpness", "verify", "--kind", "thm62", "--control"], 0),
    (["sharpness", "verify", "--kind", "cor64", "--b", "1"], 0),
    (["sharpness", "verify", "--kind", "thm65"], 0),
    (["sharpness", "verify", "--kind", "thm66"], 0),
    (["abvar", "--p", "3"], 0),
])
def test_exit_codes_and_roundtrip(tmp_path, argv, expected):
    code, out = _emit(tmp_path, "cert", *argv)
    assert code == expected
    cert = json.loads(out.read_text())
    assert cert["schema_version"] == "1" and cert["verified"] is (expected == 0)
    check = run(["check", "certificate", str(out)])
    assert check == (0 if expected == 0 else 2)


@pytest.mark.parametrize("argv,expected", [
    (["frobnicate"], 64),
    (["sharpness", "verify"], 64),
    (["sharpness", "verify", "--kind", "thm99"], 64),
    (["pairing", "construct", "--group", "S3"], 64),
    (["ring", "info", "Z[x]"], 64),
    (["abvar", "--p", "5"], 3),
    (["sharpness", "verify", "--kind", "thm62", "--prime", "9"], 3),
    (["check", "certificate", "/nonexistent.json"], 64),
    ([], 64),
])
def test_error_exit_codes(argv, expected, capsys):
    assert run(argv) == expected


def test_output_is_deterministic(tmp_path):
    _, a = _emit(tmp_path, "a", "sharpness", "verify", "--kind", "thm62")
    _, b = _emit(tmp_path, "b", "sharpness", "verify", "--kind", "thm62")
    assert _strip_timing(a.read_text()) == _strip_timing(b.read_text())


def test_stdout_matches_file(tmp_path, capsys):
    _, a = _emit(tmp_path, "a", "sharpness", "verify", "--kind", "thm66")
    capsys.readouterr()
    run(["sharpness", "verify", "--kind", "thm66"] + PREC)
    assert _strip_timing(capsys.readouterr().out) == _strip_timing(a.read_text())


def _tamper(path, edit):
    cert = json.loads(path.read_text())
    edit(cert)
    path.write_text(json.dumps(cert))
    return run(["check", "certificate", str(path)])


def test_tampered_cell_is_rejected(tmp_path):
    _, out = _emit(tmp_path, "t", "sharpness", "verify", "--kind", "thm62")

    def edit(c):
        c["result"]["table"][1]["exponents"] = ["0"] * 8

    assert _tamper(out, edit) == 2


def test_tampered_form_is_rejected(tmp_path):
    _, out = _emit(tmp_path, "t", "sharpness", "verify", "--kind", "thm62")

    def edit(c):
        c["result"]["form"][0][1]["coeffs"] = ["2"]

    assert _tamper(out, edit) == 2


def test_tampered_residue_is_rejected(tmp_path):
    _, out = _emit(tmp_path, "t", "sharpness", "verify", "--kind", "thm65")

    def edit(c):
        c["result"]["solution_dim"] = "0"

    assert _tamper(out, edit) == 2


def test_dropped_verdict_is_rejected(tmp_path):
    _, out = _emit(tmp_path, "t", "pairing", "construct")
    assert _tamper(out, lambda c: c.update(verified=False)) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "lladic", "ring", "info", "Q5", "--precision", "8"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["claim"] == "ring-info"
