import json
import subprocess
import sys

import pytest

from scatplane import (
    LPParams,
    LinearizedPoly,
    build_field,
    equivalence_fast,
    lp_census,
    lp_poly,
    spread_from_poly,
    stabilizer_order,
    verify_planar,
)
from scatplane.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, run

F43 = {"p": 2, "e": 2, "t": 3}
F45 = {"p": 2, "e": 2, "t": 5}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)
    return write


def invoke(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def coeffs(T, s, b=None):
    f = lp_poly(T, LPParams(b, s)) if b is not None else LinearizedPoly.monomial(T, s)
    return f.to_json()


def test_scattered(capsys, files):
    T = build_field(p=2, e=2, t=5)
    code, rep, _ = invoke(capsys, ["scattered", "--field", files("f.json", F45), "--poly", files("p.json", coeffs(T, 1))])
    assert code == EXIT_OK
    assert rep["results"]["scattered"] is True
    assert rep["passed"] is True
    assert rep["command"]["command"] == "scattered"
    code, rep, _ = invoke(capsys, ["scattered", "--field", json.dumps(F45), "--poly", json.dumps({"coeffs": ["1", "0", "0", "0", "0"]})])
    assert code == EXIT_FAIL and rep["results"]["scattered"] is False


def test_equiv(capsys, files):
    T = build_field(p=2, e=2, t=5)
    f = files("f.json", F45)
    p1, p2, p4 = (files(f"p{s}.json", coeffs(T, s)) for s in (1, 2, 4))
    code, rep, _ = invoke(capsys, ["equiv", "--field", f, "--poly", p1, "--poly", p2])
    assert code == EXIT_FAIL
    assert rep["results"] == {"equivalent": False, "witness": None}
    code, rep, _ = invoke(capsys, ["equiv", "--field", f, "--poly", p1, "--poly", p4])
    assert code == EXIT_OK
    lam = equivalence_fast(LinearizedPoly.monomial(T, 1), LinearizedPoly.monomial(T, 4))
    assert rep["results"] == {"equivalent": True, "witness": lam.to_json(T)}


def test_stab(capsys, files):
    T = build_field(p=2, e=2, t=5)
    b = T.gpow(1)
    code, rep, _ = invoke(capsys, ["stab", "--field", files("f.json", F45), "--poly", files("lp.json", coeffs(T, 1, b)), "--group", "GL"])
    assert code == EXIT_OK
    assert rep["results"]["order"] == 1023
    assert rep["command"]["group"] == "GL"
    code, rep, _ = invoke(capsys, ["stab", "--field", json.dumps(F45), "--b", "g^1", "--s", "1", "--group", "GammaL"])
    assert rep["results"]["order"] == stabilizer_order(lp_poly(T, LPParams(b, 1)), "GammaL")


def test_spread_matches_library(capsys):
    T = build_field(p=2, e=2, t=3)
    f = lp_poly(T, LPParams(T.gpow(1), 1))
    code, rep, _ = invoke(capsys, ["spread", "--field", json.dumps(F43), "--poly", json.dumps(f.to_json())])
    S = spread_from_poly(f)
    assert code == EXIT_OK
    assert rep["results"] == {**S.report(), "witness": None}
    assert rep["results"]["components"] == 65 and rep["results"]["replaced"] == 21
    code, rep, _ = invoke(capsys, ["spread", "--field", json.dumps(F43)])
    assert rep["results"]["desarguesian"] == 65


def test_quasifield(capsys):
    code, rep, _ = invoke(capsys, ["quasifield", "--field", json.dumps(F43), "--b", "g^1"])
    assert code == EXIT_OK
    r = rep["results"]
    assert (r["loop"], r["left_distributive"], r["solvability"], r["kernel_order"]) == (True, True, True, 4)
    assert r["right_distributive"] is False and r["associative"] is False
    assert r["kernel_is_subfield"] is True
    code, rep, _ = invoke(capsys, ["quasifield", "--field", json.dumps(F43), "--poly", json.dumps({"coeffs": ["0", "1", "0"]})])
    assert code == EXIT_OK  # x^q has 1 in its linear set; the command normalizes first
    assert rep["results"]["normalizing_map"]["matrix"] != [["1", "0"], ["0", "1"]]


def test_plane(capsys):
    F = {"p": 2, "e": 2, "t": 2}
    code, rep, _ = invoke(capsys, ["plane", "--field", json.dumps(F), "--b", "g^1", "--mode", "direct"])
    assert code == EXIT_OK
    r = rep["results"]
    assert (r["points"], r["lines"], r["affine_axioms"], r["mode"]) == (256, 272, "pass", "direct")
    assert r["collineation_order_GL"] % 15 == 0
    code, rep, _ = invoke(capsys, ["plane", "--field", json.dumps(F43), "--b", "g^1"])
    assert rep["results"]["points"] == 4096 and rep["results"]["lines"] == 4160
    assert rep["results"]["mode"] == "structural"


def test_lp_census_matches_library(capsys):
    code, rep, _ = invoke(capsys, ["lp-census", "--field", json.dumps(F45), "--s", "1"])
    assert code == EXIT_OK
    T = build_field(p=2, e=2, t=5)
    assert rep["results"] == json.loads(json.dumps(lp_census(T, 1)))
    assert rep["results"]["classes"] == 1 and rep["results"]["theorem_count"] == 1


def test_andre_check(capsys):
    code, rep, _ = invoke(capsys, ["andre-check", "--field", json.dumps(F43)])
    assert code == EXIT_OK
    assert rep["results"]["checked"] == 42 and rep["results"]["identical"] is True
    code, rep, _ = invoke(capsys, ["andre-check", "--field", json.dumps(F43), "--b", "g^1", "--s", "2"])
    assert code == EXIT_OK and rep["results"]["checked"] == 1


def test_pseudoregulus_class(capsys):
    code, rep, _ = invoke(capsys, ["pseudoregulus-class", "--field", json.dumps(F45)])
    assert code == EXIT_OK
    assert rep["results"]["partition"] == [[1, 4], [2, 3]]
    assert rep["results"]["classes"] == 2


def test_usage_errors(capsys, files, tmp_path):
    T = build_field(p=2, e=2, t=3)
    f = files("f.json", F43)
    p = files("p.json", coeffs(T, 1))
    cases = [
        ["bogus", "--field", f],
        ["scattered"],
        ["scattered", "--field", f],
        ["equiv", "--field", f, "--poly", p],
        ["scattered", "--field", f, "--poly", files("short.json", {"coeffs": ["0", "1"]})],
        ["scattered", "--field", f, "--poly", files("neg.json", {"coeffs": ["g^-1", "1", "0"]})],
        ["scattered", "--field", files("bad.json", {"p": 2, "e": 2}), "--poly", p],
        ["scattered", "--field", str(tmp_path / "missing.json"), "--poly", p],
        ["scattered", "--field", '{"p": 2, "e": 2, "t": 3', "--poly", p],
        ["scattered", "--field", json.dumps({"p": 2, "e": 2, "t": 3, "modulus": [1, 0, 0, 0, 0, 0, 1]}), "--poly", p],
        ["stab", "--field", f, "--poly", p, "--group", "SL"],
        ["scattered", "--field", f, "--poly", p, "--workers", "0"],
        ["quasifield", "--field", json.dumps({"p": 2, "e": 1, "t": 5}), "--b", "g^1"],
        ["stab", "--field", f, "--poly", files("id.json", {"coeffs": ["1", "0", "0"]})],
    ]
    for argv in cases:
        code, rep, err = invoke(capsys, argv)
        assert code == EXIT_USAGE, argv
        assert rep is None and "error" in err


def test_parse_diagnostics(capsys):
    code, _, err = invoke(capsys, ["scattered", "--field", '{"p": 2,\n "e": 2 "t": 3}', "--poly", "{}"])
    assert code == EXIT_USAGE and "line 2" in err
    code, _, err = invoke(capsys, ["scattered", "--field", json.dumps(F43), "--poly", '{"coeffs": ["0", "1"]}'])
    assert "--poly #1" in err and "t=3" in err


def test_guard_requires_force(capsys):
    F = {"p": 5, "e": 1, "t": 5}
    argv = ["equiv", "--field", json.dumps(F), "--poly", json.dumps({"coeffs": ["0", "1", "0", "0", "0"]}),
            "--poly", json.dumps({"coeffs": ["0", "0", "1", "0", "0"]})]
    code, rep, err = invoke(capsys, argv)
    assert code == EXIT_USAGE and "guard" in err


def test_default_modulus_is_echoed_without_modulus(capsys):
    code, rep, _ = invoke(capsys, ["scattered", "--field", json.dumps(F43), "--poly", '{"coeffs": ["0", "1", "0"]}'])
    assert rep["command"]["field"] == F43


def test_output_file_and_determinism(capsys, tmp_path):
    argv = ["spread", "--field", json.dumps(F43), "--b", "g^1"]
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(out1)]) == EXIT_OK
    assert main(argv + ["--out", str(out2)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert out1.read_bytes() == out2.read_bytes()
    text = out1.read_text()
    assert text == json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n"
    main(argv)
    assert capsys.readouterr().out == text


def test_unwritable_output(capsys, tmp_path):
    code = main(["spread", "--field", json.dumps(F43), "--out", str(tmp_path / "no" / "such" / "dir.json")])
    assert code == EXIT_USAGE
    assert "cannot write" in capsys.readouterr().err


def test_timing_is_opt_in():
    code, rep = run(["spread", "--field", json.dumps(F43)])
    assert "timing_ms" not in rep.to_json()
    code, rep = run(["spread", "--field", json.dumps(F43), "--timing"])
    assert rep.to_json()["timing_ms"] >= 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "scatplane", "scattered", "--field", json.dumps(F43), "--poly", '{"coeffs": ["0", "1", "0"]}'],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["scattered"] is True
    proc = subprocess.run([sys.executable, "-m", "scatplane", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2
