from __future__ import annotations

import json

import pytest

from expdioph.certificate import load, verify
from expdioph.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, read_spec_file
from expdioph.cli import UsageError

GAMMA = "log(3)/log((1+sqrt(5))/2)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cfrac(capsys):
    code, out, _ = run(capsys, "cfrac", GAMMA, "3")
    assert code == EXIT_OK
    assert out.strip() == "2, 7/3, 9/4, 16/7"


def test_cfrac_writes_certificate(capsys, tmp_path):
    path = tmp_path / "c.json"
    assert run(capsys, "cfrac", "sqrt(2)", "4", "--json", str(path))[0] == EXIT_OK
    d = json.loads(path.read_text())
    assert d["result"]["quotients"] == ["1", "2", "2", "2", "2"]
    assert verify(d) == []


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "2")
    assert code == EXIT_OK
    assert out.splitlines() == ["(1, 1, 0, 0)", "(2, 1, 0, 0)", "(2, 2, 0, 0)"]
    assert run(capsys, "enumerate", "0")[0] == EXIT_USAGE


def test_reduce(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "reduce", "--gamma", GAMMA, "--mu", "log(sqrt(5))/log((1+sqrt(5))/2)",
                       "--A", "14", "--B", "((1+sqrt(5))/2)/2^(9/20)", "--M", str(9 * 10**30), "--json", str(path))
    assert code == EXIT_OK
    assert "m_bound = 480" in out
    assert load(path).result["k"] == "63"


def test_reduce_with_nonpositive_eps(capsys):
    code, out, _ = run(capsys, "reduce", "--gamma", GAMMA, "--mu", "1", "--A", "14", "--B", "2",
                       "--M", "1000", "--retries", "3")
    assert code == EXIT_FAIL
    assert "epsilon_nonpositive" in out or "nonpositive" in out.lower()


def test_matveev(capsys):
    code, out, _ = run(capsys, "matveev", "--t", "3", "--D", "2", "--A", "2.2", "0.5", "1.7", "--B", "100")
    assert code == EXIT_OK
    coef = float(out.split("coefficient = ")[1].split()[0])
    assert abs(coef / 1.8e12 - 1) < 0.01
    assert run(capsys, "matveev", "--t", "3", "--D", "2", "--A", "2.2", "--B", "100")[0] == EXIT_USAGE


def test_scan_valuation_both_backends(capsys):
    outs = []
    for backend in ("python", "cython"):
        code, out, _ = run(capsys, "scan-valuation", "--n1-min", "101", "--n1-max", "120", "--gap-max", "20",
                           "--z1-max", "54", "--backend", backend)
        assert code == EXIT_OK
        outs.append(out.split("[")[0])
    assert outs[0] == outs[1]
    assert run(capsys, "scan-valuation", "--n1-min", "9", "--n1-max", "3", "--gap-max", "1", "--z1-max", "1")[0] == EXIT_USAGE


SPEC_TEXT = "P = 1\nQ = 1\nU0 = 0\nU1 = 1\nprimes = 2, 3\ncoefficients = 1, 1\nt = 2\n"


def test_bound_chain(capsys, tmp_path):
    spec = tmp_path / "fib.spec"
    spec.write_text(SPEC_TEXT)
    path = tmp_path / "b.json"
    code, out, _ = run(capsys, "bound-chain", str(spec), "--json", str(path))
    assert code == EXIT_OK and out.startswith("C")
    cert = load(path)
    assert int(cert.result["C"]) > 0
    assert verify(cert) == []


@pytest.mark.parametrize("text,msg", [
    (SPEC_TEXT.replace("t = 2\n", ""), "missing"),
    (SPEC_TEXT + "colour = red\n", "unknown"),
    (SPEC_TEXT.replace("Q = 1", "Q = 0"), "bad spec"),
    (SPEC_TEXT.replace("primes = 2, 3", "primes = 2, x"), "bad spec"),
    ("not a key value file", "cannot read"),
])
def test_bad_spec_files(tmp_path, text, msg):
    spec = tmp_path / "bad.spec"
    spec.write_text(text)
    with pytest.raises(UsageError, match=msg):
        read_spec_file(spec)


def test_spec_file_epsilon(tmp_path):
    spec = tmp_path / "e.spec"
    spec.write_text(SPEC_TEXT + "epsilon = 1/3  # tighter\n")
    assert str(read_spec_file(spec).epsilon) == "1/3"


def test_bound_chain_exit_codes(capsys, tmp_path):
    assert run(capsys, "bound-chain", str(tmp_path / "missing.spec"))[0] == EXIT_USAGE


def test_solve_and_verify(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, out, _ = run(capsys, "solve-fib23", "--json", str(path), "--timings")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 20
    assert "timings" in json.loads(path.read_text())
    code, out, _ = run(capsys, "verify", str(path))
    assert code == EXIT_OK and out.strip().endswith("verified")
    assert run(capsys, "verify", str(path), "--no-replay")[0] == EXIT_OK


def test_verify_flags_a_tampered_file(capsys, tmp_path):
    path = tmp_path / "e.json"
    run(capsys, "enumerate", "12", "--json", str(path))
    d = json.loads(path.read_text())
    d["solutions"].append([12, 1, 0, 5])
    path.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == EXIT_FAIL and "not a solution" in out


def test_verify_rejects_malformed_files(capsys, tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text("{ nope")
    assert run(capsys, "verify", str(junk))[0] == EXIT_USAGE
    junk.write_text(json.dumps({"tool": "other"}))
    code, _, err = run(capsys, "verify", str(junk))
    assert code == EXIT_USAGE and "malformed" in err


def test_low_precision_gives_partial_certificate(capsys, tmp_path):
    path = tmp_path / "p.json"
    code, _, err = run(capsys, "solve-fib23", "--precision-bits", "32", "--json", str(path))
    assert code == EXIT_FAIL and "proof incomplete" in err
    d = json.loads(path.read_text())
    assert d["status"] == "failed" and d["ledger"]


def test_usage_errors(capsys):
    assert run(capsys, "cfrac", "log(", "3")[0] == EXIT_USAGE
    assert run(capsys, "cfrac", GAMMA, "-1")[0] == EXIT_USAGE
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "cfrac", GAMMA, "3", "--precision-bits", "8")[0] == EXIT_USAGE
    assert run(capsys, "--version")[0] == EXIT_OK
