import json
import subprocess
import sys
from fractions import Fraction

import pytest

from entropy_cert.certify import load_certificate
from entropy_cert.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def kv(out):
    return dict(line.split("=", 1) for line in out.splitlines() if "=" in line)


def test_verify_three_halves(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, out = run(capsys, "verify", "--k", "3", "--r", "2", "--out", str(path))
    assert code == 0
    d = kv(out)
    assert d["VERDICT"] == "CERTIFIED" and d["CERTIFICATE"] == str(path)
    lo, hi = Fraction(d["ROOT1_LO"]), Fraction(d["ROOT1_HI"])
    assert lo <= Fraction("0.204863") <= hi
    assert Fraction(d["ROOT2_LO"]) <= Fraction("0.74186") <= Fraction(d["ROOT2_HI"])
    assert load_certificate(path)["verdict"] == "CERTIFIED"


def test_verify_known_and_trivial(capsys):
    assert run(capsys, "verify", "--k", "2", "--r", "1")[0] == 0
    code, out = run(capsys, "verify", "--k", "2", "--r", "2")
    assert code == 0 and kv(out)["EXPONENT"] == "1/1"


def test_verify_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "verify", "--k", "3", "--r", "2", "--out", str(a))
    run(capsys, "verify", "--k", "3", "--r", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_verify_batch(capsys, tmp_path):
    pairs = tmp_path / "pairs.txt"
    pairs.write_text("# exponent list\n2 1\n3/2\n4,1\n")
    out_dir = tmp_path / "certs"
    code, out = run(capsys, "verify", "--pairs", str(pairs), "--out", str(out_dir), "--jobs", "2")
    assert code == 0
    assert out.count("VERDICT=CERTIFIED") == 3
    assert sorted(p.name for p in out_dir.iterdir()) == ["cert_2_1.json", "cert_3_2.json", "cert_4_1.json"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--k", "x", "--r", "1"],
        ["verify", "--k", "1", "--r", "2"],
        ["verify", "--k", "3"],
        ["verify", "--k", "0", "--r", "0"],
        ["frobnicate"],
        ["identities", "--suite", "nonsense"],
        ["asymptotics", "--k", "2"],
        ["alpha", "--k", "2", "--r", "2"],
    ],
)
def test_usage_errors_exit_one(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 1


def test_hpoly(capsys):
    assert json.loads(run(capsys, "hpoly", "--k", "4", "--r", "4")[1]) == ["1/1", "31/1", "31/1", "1/1"]
    assert json.loads(run(capsys, "hpoly", "--k", "4", "--r", "2")[1]) == ["1/1", "7/2", "-2/3", "1/6"]
    assert json.loads(run(capsys, "hpoly", "--k", "1", "--r", "1")[1]) == ["1/1"]
    csv_out = run(capsys, "hpoly", "--k", "4", "--r", "2", "--format", "csv")[1]
    assert csv_out.splitlines()[0] == "k,r,j,value"
    assert csv_out.splitlines()[2] == "4,2,1,7/2"


def test_alpha(capsys):
    d = kv(run(capsys, "alpha", "--k", "3", "--r", "2", "--width", "1e-6")[1])
    lo, hi = Fraction(d["ALPHA_LO"]), Fraction(d["ALPHA_HI"])
    assert hi - lo <= Fraction(1, 10 ** 6)
    assert lo - Fraction(1, 10 ** 6) <= Fraction("0.754878") <= hi + Fraction(1, 10 ** 6)
    d = kv(run(capsys, "alpha", "--k", "2")[1])
    lo, hi = Fraction(d["ALPHA_LO"]), Fraction(d["ALPHA_HI"])
    # (sqrt 5 - 1)/2 in [lo, hi]
    assert (2 * lo + 1) ** 2 <= 5 <= (2 * hi + 1) ** 2
    assert d["ALPHA_DECIMAL"].startswith("[0.618033988")


def test_identities(capsys):
    code, out = run(capsys, "identities", "--suite", "finite-diff", "--kmax", "10")
    assert code == 0 and kv(out)["FAILED"] == "0"
    code, out = run(capsys, "identities", "--suite", "cor7", "--kmax", "8")
    assert code == 0
    assert "CHECK=PASS cor7 k=8" in out


def test_asymptotics(capsys):
    code, out = run(capsys, "asymptotics", "--k", "1000", "--precision-bits", "128")
    assert code == 0 and kv(out)["WITHIN_5_SCALE"] == "true"


def test_lagrange(capsys):
    d = kv(run(capsys, "lagrange", "--k", "3", "--N", "1", "--z", "1/4", "--terms", "60")[1])
    assert d["DIVERGING"] == "false"
    lo, hi = Fraction(d["BISECTION_X_POW_N_LO"]), Fraction(d["BISECTION_X_POW_N_HI"])
    assert abs(Fraction(d["PARTIAL_SUM"]) - lo) < Fraction(1, 10 ** 12)
    assert hi - lo < Fraction(1, 10 ** 12)
    d = kv(run(capsys, "lagrange", "--k", "2", "--N", "1", "--z", "1/1", "--terms", "40")[1])
    assert d["DIVERGING"] == "true"


def test_precision_environment(capsys, monkeypatch):
    monkeypatch.setenv("ENTROPY_CERT_PRECISION", "64")
    d = kv(run(capsys, "asymptotics", "--k", "100")[1])
    assert Fraction(d["B_K_HI"]) - Fraction(d["B_K_LO"]) <= Fraction(1, 2 ** 64)
    assert Fraction(d["B_K_HI"]) - Fraction(d["B_K_LO"]) > Fraction(1, 2 ** 100)
    d = kv(run(capsys, "asymptotics", "--k", "100", "--precision-bits", "128")[1])
    assert Fraction(d["B_K_HI"]) - Fraction(d["B_K_LO"]) <= Fraction(1, 2 ** 128)
    monkeypatch.setenv("ENTROPY_CERT_PRECISION", "lots")
    assert main(["asymptotics", "--k", "100"]) == 1


def test_scan_report(capsys, tmp_path):
    out_path = tmp_path / "scan.json"
    code, out = run(capsys, "scan", "--k", "2", "--r", "1", "--grid", "32", "--precision-bits", "64",
                    "--out", str(out_path))
    assert code == 0
    report = json.loads(out_path.read_text())
    assert report["grid"] == 32 and report["zero_cells"][0] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "entropy_cert", "hpoly", "--k", "2", "--r", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout) == ["1/1", "1/1"]
