import json
import subprocess
import sys

import pytest

from plcircle.cli import main
from plcircle.codec import map_from_json
from plcircle.plmap import equals


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_two_break(capsys):
    code, out, _ = run(capsys, "construct", "boshernitzan", "--r", "1", "--l1", "2", "--l2", "1/3")
    d = json.loads(out)
    assert code == 0 and d["pieces"][1]["left"] == "2/5"
    assert equals(map_from_json(d), map_from_json(json.loads(json.dumps(d))))


def test_finite_order_not_realizable(capsys):
    code, _, err = run(capsys, "construct", "finite-order", "--m", "3", "--r", "1", "--q", "2")
    assert code == 3 and "NotRealizable" in err


def test_stein_family(capsys):
    code, out, _ = run(capsys, "construct", "stein-family", "--basis", "2,3", "--k", "1")
    maps = json.loads(out)["maps"]
    assert code == 0 and [m["circumference"] for m in maps] == ["5", "5"]


def test_float_rejected(capsys):
    code, _, err = run(capsys, "construct", "rotation", "--r", "1", "--a", "0.5")
    assert code == 2 and "ValidationError" in err


def _write(tmp_path, capsys, name, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    path = tmp_path / name
    path.write_text(out)
    return str(path)


def test_rho_modes(tmp_path, capsys):
    rot = _write(tmp_path, capsys, "rot.json", "construct", "rotation", "--r", "1", "--a", "1/3")
    irr_map = _write(tmp_path, capsys, "g.json", "construct", "boshernitzan", "--l1", "2", "--l2", "1/3")
    assert json.loads(run(capsys, "rho", rot)[1]) == {"kind": "rational", "p": "1", "q": "3"}
    assert json.loads(run(capsys, "rho", irr_map, "--mode", "symbolic")[1]) == \
        {"kind": "logratio", "alpha": "2", "beta": "6"}
    d = json.loads(run(capsys, "rho", irr_map, "--depth", "40")[1])
    assert d["kind"] == "absent" and d["reason"] == "DepthExhausted"
    d = json.loads(run(capsys, "rho", irr_map, "--mode", "interval", "--iters", "100")[1])
    assert d["kind"] == "interval"


def test_map_commands(tmp_path, capsys):
    g = _write(tmp_path, capsys, "g.json", "construct", "boshernitzan", "--l1", "2", "--l2", "1/3")
    inv = _write(tmp_path, capsys, "inv.json", "invert", g)
    code, out, _ = run(capsys, "compose", g, inv)
    assert json.loads(out)["pieces"] == [{"left": "0", "slope": "1"}] and json.loads(out)["f0"] == "0"
    assert json.loads(run(capsys, "eval", g, "--x", "2/5")[1])["value"] == "0"
    assert json.loads(run(capsys, "member", g, "--basis", "2,3")[1])["member"] is False
    assert json.loads(run(capsys, "dcheck", g)[1])["verdict"] == "Yes"
    assert json.loads(run(capsys, "linearize", g)[1])["verified"] is True
    assert json.loads(run(capsys, "power", g, "--n", "0")[1])["f0"] == "0"


def test_bs_witness_and_transport(tmp_path, capsys):
    w = _write(tmp_path, capsys, "w.json", "bs-witness", "--l", "3", "--lp", "1", "--basis", "3")
    rot = _write(tmp_path, capsys, "r.json", "construct", "rotation", "--r", "3", "--a", "1")
    code, out, _ = run(capsys, "transport", rot, "--witness", w)
    assert code == 0 and json.loads(out)["circumference"] == "1"
    code, _, err = run(capsys, "bs-witness", "--l", "1", "--lp", "2", "--basis", "3")
    assert code == 3


def test_malformed_map(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"circumference": "1", "f0": "0", "pieces": [{"left": "0", "slope": "2"}]}')
    code, _, err = run(capsys, "rho", str(p))
    assert code == 2 and "LengthMismatch" in err


def test_suite_exit_codes(tmp_path, capsys):
    assert run(capsys, "suite", "nosuch")[0] == 2
    out = tmp_path / "rep.json"
    code, stdout, _ = run(capsys, "suite", "thm2", "--bases", "2,3", "--k", "1", "--out", str(out))
    assert code == 0 and json.loads(out.read_text())["summary"]["fail"] == 0
    assert json.loads(stdout)["suite"] == "thm2"


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"m": "2", "r": "1..2", "q": "1..3"}))
    code, out, _ = run(capsys, "--config", str(cfg), "suite", "thm1", "--q", "4")
    d = json.loads(out)
    assert code == 0
    assert {c["params"]["q"] for c in d["cases"]} == {4}
    assert {c["params"]["r"] for c in d["cases"]} == {1, 2}


def test_export_staircase(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, stdout, _ = run(capsys, "export-staircase", "--samples", "5", "--out", str(out))
    assert code == 0 and json.loads(stdout)["rows"] == 5
    lines = out.read_text().splitlines()
    assert lines[0] == "param,lo,hi,exact" and len(lines) == 6


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "plcircle", "construct", "rotation", "--a", "1/2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["f0"] == "1/2"
