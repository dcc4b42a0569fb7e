import io
import json
import subprocess
import sys

import pytest

from heatcone.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_terms_circle():
    code, txt = run("terms", "--cross-section", "circle", "--sin-alpha", "1/2", "--m", "2")
    doc = json.loads(txt)
    assert code == 0
    assert doc["c"]["value"] == {"num": "0", "den": "1", "pi_half": 0}
    assert doc["b"]["value"] == {"num": "1", "den": "8", "pi_half": 0}
    assert doc["verdict"] == "ACTUAL"


def test_terms_lens_and_sphere():
    _, txt = run("terms", "--cross-section", "lens", "--k", "2", "--m", "4")
    doc = json.loads(txt)
    assert doc["b"]["value"]["den"] == "32" and doc["verdict"] == "ACTUAL"
    _, txt = run("terms", "--cross-section", "sphere", "--n", "3", "--kappa", "1")
    doc = json.loads(txt)
    assert doc["c"]["value"]["num"] == "0" and doc["b"]["value"]["num"] == "0"
    assert doc["verdict"] == "APPARENT_CANDIDATE"


def test_terms_torus_text():
    code, txt = run("terms", "--cross-section", "torus", "--n", "3", "--format", "text")
    assert code == 0
    assert "c = -1/64·π^-2 (exact)" in txt
    assert "b = unavailable" in txt


def test_poly():
    _, txt = run("poly", "--n", "5", "--roots")
    doc = json.loads(txt)
    assert doc["coeffs"] == ["1", "-4", "5", "-2"]
    assert [(r["value"], r["mult"]) for r in doc["roots"]] == [(1.0, 2), (2.0, 1)]
    _, txt = run("poly", "--n", "7", "--roots", "--format", "text")
    assert "(225 + 36√5)/109" in txt and "(225 - 36√5)/109" in txt


def test_coeffs_formats():
    _, txt = run("coeffs", "--cross-section", "sphere", "--n", "5", "--max-j", "3")
    doc = json.loads(txt)
    assert len(doc["coeffs"]) == 4
    assert doc["coeffs"][1] == {"num": "10", "den": "3", "pi_half": 6}
    _, txt = run("coeffs", "--cross-section", "sphere", "--n", "3", "--max-j", "2", "--format", "csv")
    assert txt.splitlines()[0] == "j,value,num,den,pi_half"
    assert txt.splitlines()[3].endswith(",1,1,4")


def test_zeta_and_spectrum():
    _, txt = run("zeta", "--cross-section", "sphere", "--n", "3", "--s=-1/2")
    assert json.loads(txt)["value"] == {"num": "1", "den": "120", "pi_half": 0}
    _, txt = run("zeta", "--cross-section", "circle", "--sin-alpha", "1/2", "--residue", "1/2", "--convention", "zeta")
    assert json.loads(txt)["residue"]["num"] == "1"
    _, txt = run("spectrum", "--cross-section", "sphere", "--n", "3", "--cutoff", "10")
    assert txt == "lambda,multiplicity\n0.0,1\n3.0,4\n8.0,9\n"


@pytest.mark.parametrize(
    "argv",
    [
        ["terms", "--cross-section", "sphere"],
        ["terms", "--cross-section", "circle", "--sin-alpha", "2"],
        ["poly", "--n", "4"],
        ["zeta", "--cross-section", "sphere", "--n", "3", "--s", "3/2"],
        ["spectrum", "--cross-section", "lens", "--k", "3", "--cutoff", "10"],
        ["bogus"],
        ["terms", "--cross-section", "nope"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == 2


def test_verify_exact_suite(tmp_path):
    path = tmp_path / "report.json"
    code, txt = run("verify", "--suite", "exact", "--report", str(path))
    assert code == 0
    doc = json.loads(txt)
    assert doc["failed"] == 0
    assert all(c["anchor"] for c in doc["checks"])
    assert json.loads(path.read_text()) == doc


def test_byte_identical_runs():
    argv = ["poly", "--n", "7", "--roots"]
    assert run(*argv) == run(*argv)
    argv = ["terms", "--cross-section", "rpn", "--n", "5", "--format", "text"]
    assert run(*argv) == run(*argv)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "heatcone", "poly", "--n", "3"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["coeffs"] == ["1", "-2", "1"]
