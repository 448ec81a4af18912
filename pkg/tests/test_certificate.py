from __future__ import annotations

import copy
import json

import jsonschema
import pytest

from expdioph.arith.real import Precision
from expdioph.certificate import Certificate, dumps, loads, problem_dict, problem_from_dict, schema, validate, verify
from expdioph.pipeline.theorem2 import SPEC


@pytest.fixture(scope="module")
def cert_dict(fib23_run):
    cert = Certificate.build("solve-fib23", Precision(), fib23_run.ledger, spec=SPEC, solutions=fib23_run.solutions)
    return cert.to_dict()


def step(d: dict, name: str) -> dict:
    return next(s for s in d["ledger"] if s["name"] == name)


def test_schema_is_valid_draft():
    jsonschema.Draft202012Validator.check_schema(schema())


def test_certificate_validates_and_round_trips(cert_dict):
    validate(cert_dict)
    text = dumps(cert_dict)
    assert text.endswith("\n")
    again = loads(text)
    assert dumps(again.to_dict()) == text
    assert again.precision == Precision()


def test_no_binary_floats_anywhere(cert_dict):
    def walk(x):
        if isinstance(x, float):
            raise AssertionError(f"float {x!r} in certificate")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(dumps(cert_dict)))


def test_problem_round_trip():
    assert problem_from_dict(problem_dict(SPEC)) == SPEC


def test_clean_certificate_verifies(cert_dict):
    assert verify(cert_dict) == []
    assert verify(cert_dict, replay=False) == []


def test_tampered_solution_is_caught(cert_dict):
    bad = copy.deepcopy(cert_dict)
    bad["solutions"][0] = [1, 1, 0, 1]
    assert any("not a solution" in p for p in verify(bad, replay=False))


def test_tampered_reduction_is_caught(cert_dict):
    bad = copy.deepcopy(cert_dict)
    step(bad, "lambda1_pos_reduction")["output"] = "300"
    assert any("lambda1_pos_reduction" in p for p in verify(bad))


def test_tampered_interval_output_is_caught(cert_dict):
    bad = copy.deepcopy(cert_dict)
    step(bad, "lambda1_neg_reduction")["output"] = {"mid": "400", "rad": "1"}
    assert any("lambda1_neg_reduction" in p for p in verify(bad))


def test_tampered_batch_is_caught(cert_dict):
    bad = copy.deepcopy(cert_dict)
    s = step(bad, "lambda2_neg_batch")
    some_gap = next(iter(s["constants"]["reductions"]))
    s["constants"]["reductions"][some_gap][1] = "1"
    assert any("lambda2_neg_batch" in p for p in verify(bad))


def test_tampered_scan_is_caught(cert_dict):
    bad = copy.deepcopy(cert_dict)
    step(bad, "valuation_scan")["output"] = "12"
    problems = verify(bad)
    assert any("valuation_scan" in p for p in problems)


def test_tampered_index_bound_is_caught(cert_dict):
    bad = copy.deepcopy(cert_dict)
    step(bad, "valuation_index_bound")["output"] = "30"
    assert any("valuation_index_bound" in p for p in verify(bad))


def test_reordered_ledger_is_caught(cert_dict):
    bad = copy.deepcopy(cert_dict)
    bad["ledger"].reverse()
    assert verify(bad, replay=False)


def test_schema_rejects_malformed(cert_dict):
    for mutate in (
        lambda d: d.pop("ledger"),
        lambda d: d.update(status="maybe"),
        lambda d: d.update(schema_version=2),
        lambda d: d["ledger"][0].update(agreement="close enough"),
        lambda d: d["problem"].update(epsilon=0.5),
    ):
        bad = copy.deepcopy(cert_dict)
        mutate(bad)
        with pytest.raises(jsonschema.ValidationError):
            validate(bad)


def test_failed_run_is_reported():
    cert = Certificate.build("solve-fib23", Precision(), error="PrecisionExhausted: too coarse")
    assert cert.status == "failed"
    assert verify(cert.to_dict(), replay=False) == ["certificate records a failed run: PrecisionExhausted: too coarse"]


def test_timings_are_rounded():
    cert = Certificate.build("cfrac", Precision(), timings={"x": 0.123456789})
    assert cert.timings == {"x": 0.123457}
    assert "timings" not in Certificate.build("cfrac", Precision()).to_dict()
