import json
import subprocess
import sys

import pytest

from lagspec import cli, spectral
from lagspec.errors import AmbiguityError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_13(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-n", "13")
    body = json.loads(out)
    assert code == 0
    assert [(p["n"], p["m"]) for p in body["pairs"]] == [(5, 2), (7, 4), (11, 2), (11, 8),
                                                         (13, 4), (13, 10)]


def test_enumerate_empty(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-n", "4")
    assert code == 0 and json.loads(out)["pairs"] == []


def test_enumerate_csv(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-n", "7", "--format", "csv")
    rows = out.splitlines()
    assert code == 0 and rows[0].startswith("n,m,b") and len(rows) == 3


def test_enumerate_zero_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["enumerate", "--max-n", "0"])
    assert exc.value.code == 2


def test_missing_field_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["index", "--n", "5"])
    assert exc.value.code == 2


def test_inadmissible_pair(capsys):
    code, _, err = run(capsys, "verify", "--n", "9", "--m", "6")
    assert code == 2 and "gcd(n,m)=3" in err


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--n", "5", "--m", "2")
    p = json.loads(out)["params"]
    assert code == 0 and p["q2"] == 0.6 and "version" in json.loads(out)


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n", "5", "--m", "2", "--grid", "512")
    body = json.loads(out)
    assert code == 0 and body["passed"]
    names = {c["name"] for c in body["checks"]}
    assert {"unit_lift", "horizontality", "lagrangian", "wellposedness", "minimality",
            "ode_residual", "su3_eigen"} <= names


def test_verify_coarse_grid_flagged(capsys):
    code, out, _ = run(capsys, "verify", "--n", "5", "--m", "2", "--grid", "64")
    body = json.loads(out)
    assert code != 0 and not body["passed"]
    failing = {c["name"] for c in body["checks"] if not c["pass"]}
    assert failing <= {"minimality", "su3_eigen"} and failing


def test_index_report(capsys):
    code, out, _ = run(capsys, "index", "--n", "5", "--m", "2")
    body = json.loads(out)
    assert code == 0
    assert body["ind0"] >= 6 and body["ind"] >= 8 and body["multSix"] >= 7
    assert body["gridN"] >= 1024 and "tolerance" in body and body["nadirashvili"]


def test_index_ambiguity_exit_code(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise AmbiguityError("eigenvalue too close to 6")

    monkeypatch.setattr(spectral, "index_report", boom)
    code, _, err = run(capsys, "index", "--n", "5", "--m", "2")
    assert code == 3 and "close to 6" in err


def test_benchmarks(capsys):
    code, out, _ = run(capsys, "benchmarks")
    b = json.loads(out)["benchmarks"]
    assert code == 0
    assert [b["RP2"][k] for k in ("beta1", "ind0", "ind1", "ind")] == [0, 0, 3, 3]
    assert b["S2"]["ind"] == 6 and b["Clifford"]["ind"] == 2


def test_nodal(capsys):
    code, out, _ = run(capsys, "nodal", "--n", "5", "--m", "2")
    assert code == 0 and json.loads(out)["counts"] == [3, 8, 8, 6, 6, 4, 4]


def test_nodal_pgm(tmp_path, capsys):
    target = tmp_path / "g2.pgm"
    code, _, _ = run(capsys, "nodal", "--n", "5", "--m", "2", "--format", "pgm",
                     "--nx", "128", "--ny", "128", "-o", str(target))
    assert code == 0 and target.read_bytes().startswith(b"P5\n128 128\n")


def test_area(capsys):
    code, out, _ = run(capsys, "area", "--n", "7", "--m", "4")
    body = json.loads(out)
    assert code == 0 and body["relDiff"] <= 1e-8


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "5", "--m", "2", "--grid", "512",
                       "--format", "csv")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "lambda,j,xParity,tauParity,mult,errorBar"
    lam, rest = rows[1].split(",", 1)
    assert abs(float(lam)) <= 1e-9 and rest.startswith("0,even,plus,1,")


def test_fa_csv(tmp_path, capsys):
    target = tmp_path / "fa.csv"
    code, _, _ = run(capsys, "fa", "--n", "5", "--m", "2", "--grid", "32", "-o", str(target))
    assert code == 0 and target.read_text().startswith("x,y,value")
    code, _, err = run(capsys, "fa", "--n", "5", "--m", "2", "--generator", "8")
    assert code == 1 and "generator" in err


def test_subprocess_determinism(tmp_path):
    cmd = [sys.executable, "-m", "lagspec", "index", "--n", "5", "--m", "2"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True,
                            env={"LAGSPEC_THREADS": "1", "PATH": ""}).stdout
    assert first == second and first.endswith(b"\n")
