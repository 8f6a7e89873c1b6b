import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from covspde.cli import canonical_json, main, run, validate

DOCS = sorted((Path(__file__).resolve().parent.parent / "docs").glob("*.json"))


def call(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_canonical_json_format():
    text = canonical_json({"b": 0.1, "a": [1, complex(1, -2)], "c": float("nan")})
    assert text == '{"a": [1, {"im": -2, "re": 1}], "b": 0.10000000000000001, "c": null}\n'


def test_spectrum_higgs3(capsys):
    code, out = call(["spectrum", "--family", "higgs3", "--params", "a=1,b=2,c=0,m0=0.5,m1=1.5"], capsys)
    assert code == 0
    res = out["result"]
    assert {"C", "masses2", "admissible"} <= set(res)
    assert res["admissible"] is True
    assert abs(res["masses2"][0]["re"] - 0.375) < 1e-12


def test_cov_solve_and_reflection(capsys):
    code, out = call(["cov-solve", "--rep", "D0+D1"], capsys)
    assert code == 0 and out["result"]["dimension"] == 3
    code, out = call(["cov-solve", "--rep", "D0+D1", "--reflection", "1,-1"], capsys)
    assert code == 0 and out["result"]["reflection"]["dimension"] == 2
    code, out = call(["cov-solve", "--rep", "D1+D1", "--reflection", "-1"], capsys)
    assert code == 0 and out["result"]["reflection"]["dimension"] == 0


def test_green_at_flag(capsys):
    code, out = call(["green", "--family", "higgs3", "--at", "0.3,-0.2,0.5", "--at", "1,0,0"], capsys)
    assert code == 0


def test_empty_config_exit_2(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text("{}")
    code, out = call(["spectrum", "--config", str(path)], capsys)
    assert code == 2 and out["diagnostics"]


def test_single_diagnostic_for_bad_lattice():
    cfg = {"version": 1, "model": {"family": "klein_gordon", "params": {"m": 1.0}},
           "noise": {"A": [[1.0]]}, "lattice": {"D": 3, "L": 1}, "mc": {"seed": 1, "samples": 200}}
    diags = validate(cfg, "mc-verify")
    assert len(diags) == 1 and "L" in diags[0].path + diags[0].message


def test_asymmetric_atoms_notice():
    cfg = {"version": 1, "model": {"family": "klein_gordon", "params": {"m": 1.0}},
           "noise": {"atoms": [{"weight": 0.3, "alpha": [2.0]}]}, "lattice": {"D": 3, "L": 8}}
    code, payload = run("moments", cfg)
    assert code == 0 and payload["notices"]


def test_unknown_option_and_missing_seed():
    base = {"version": 1, "model": {"family": "klein_gordon", "params": {"m": 1.0}},
            "lattice": {"D": 3, "L": 8}, "noise": {"A": [[1.0]]}}
    assert run("mc-verify", base)[0] == 2
    assert run("moments", {**base, "options": {"bogus": 1}})[0] == 2


def test_non_admissible_exit_3():
    cfg = {"version": 1, "model": {"family": "higgs3", "params": {"c": 0.5}},
           "noise": {"A": [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]},
           "lattice": {"D": 3, "L": 8}, "mc": {"seed": 1, "samples": 200}}
    code, payload = run("mc-verify", cfg)
    assert code == 3 and payload["error"] == "numeric"


def test_mc_verify_byte_identical(tmp_path):
    cfg = json.loads((Path(DOCS[0]).parent / "mc_two_point_kg.json").read_text())
    cfg["mc"]["samples"] = 200
    cfg["lattice"]["L"] = 8
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    outs = []
    for i in range(2):
        target = tmp_path / f"o{i}.json"
        assert main(["mc-verify", "--config", str(path), "--out", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("path", DOCS, ids=lambda p: p.stem)
def test_docs_configs_validate_and_run(path, capsys):
    assert main(["validate", "--config", str(path)]) == 0
    capsys.readouterr()
    cfg = json.loads(path.read_text())
    t0 = time.perf_counter()
    code, out = call([cfg["command"], "--config", str(path)], capsys)
    assert code == 0, out
    assert time.perf_counter() - t0 < 60


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "covspde.cli", "model", "--family", "spinor", "--emit", "det"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "model"
