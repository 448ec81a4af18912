"""JSON certificates: build, serialize, validate and re-verify offline.

Numbers are never stored as binary floats.  Exact values are decimal or
rational strings and certified reals are ``{"mid", "rad"}`` pairs whose
enclosure ``[mid - rad, mid + rad]`` contains the true value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from expdioph import __version__
from expdioph.arith.cfrac import expand_source
from expdioph.arith.expr import parse_expr
from expdioph.arith.real import DEFAULT_PRECISION, Precision
from expdioph.pipeline.ledger import BoundLedger
from expdioph.recurrence import BinaryRecurrence, ProblemSpec
from expdioph.reduction import ReductionInstance, baker_davenport, direct_convergent_bound

SCHEMA_VERSION = 1
TOOL = "expdioph"


def schema() -> dict:
    text = resources.files("expdioph").joinpath("certificate.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def problem_dict(spec: ProblemSpec) -> dict:
    rec = spec.recurrence
    return {"P": rec.P, "Q": rec.Q, "U0": rec.U0, "U1": rec.U1, "primes": list(spec.primes),
            "coefficients": list(spec.coefficients), "t": spec.t, "epsilon": str(spec.epsilon)}


def problem_from_dict(d: dict) -> ProblemSpec:
    rec = BinaryRecurrence(d["P"], d["Q"], d["U0"], d["U1"])
    return ProblemSpec(rec, tuple(d["primes"]), tuple(d["coefficients"]), d["t"], Fraction(d["epsilon"]))


@dataclass
class Certificate:
    command: str
    precision: Precision = DEFAULT_PRECISION
    ledger: list = field(default_factory=list)  # encoded steps
    status: str = "ok"
    problem: dict | None = None
    solutions: list | None = None
    result: object = None
    error: str | None = None
    timings: dict | None = None

    @classmethod
    def build(cls, command: str, precision: Precision, ledger: BoundLedger | None = None, *,
              spec: ProblemSpec | None = None, solutions=None, result=None, error=None,
              timings=None) -> "Certificate":
        return cls(
            command=command,
            precision=precision,
            ledger=ledger.to_list() if ledger is not None else [],
            status="failed" if error else "ok",
            problem=problem_dict(spec) if spec is not None else None,
            solutions=[list(s) for s in solutions] if solutions is not None else None,
            result=result,
            error=error,
            timings={k: round(v, 6) for k, v in timings.items()} if timings else None,
        )

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "tool": TOOL,
            "version": __version__,
            "command": self.command,
            "status": self.status,
            "precision": {"start_bits": self.precision.start, "ceiling_bits": self.precision.ceiling},
            "ledger": self.ledger,
        }
        for key in ("problem", "solutions", "result", "error", "timings"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        validate(d)
        p = d["precision"]
        return cls(
            command=d["command"],
            precision=Precision(p["start_bits"], p["ceiling_bits"]),
            ledger=d["ledger"],
            status=d["status"],
            problem=d.get("problem"),
            solutions=d.get("solutions"),
            result=d.get("result"),
            error=d.get("error"),
            timings=d.get("timings"),
        )

    def dumps(self) -> str:
        return dumps(self.to_dict())

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")


def dumps(d: dict) -> str:
    # sorted keys and fixed indentation keep repeated runs byte-identical
    return json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Certificate:
    return Certificate.from_dict(json.loads(text))


def load(path: str | Path) -> Certificate:
    return loads(Path(path).read_text(encoding="utf-8"))


def validate(d: dict) -> None:
    """Raise :class:`jsonschema.ValidationError` if ``d`` is malformed."""
    jsonschema.validate(d, schema())


# -- offline re-verification ---------------------------------------------------


def _int(x) -> int:
    return int(Fraction(x))


def _replay_reduction(c: dict, mu: str, k: int, precision: Precision):
    inst = ReductionInstance(parse_expr(c["gamma"]), parse_expr(mu), Fraction(c["A"]), parse_expr(c["B"]), _int(c["M"]))
    return baker_davenport(inst, precision, convergent_index=k)


def _check_reduction(step: dict, precision: Precision) -> list[str]:
    c = step["constants"]
    out = _replay_reduction(c, c["mu"], _int(c["k"]), precision)
    problems = []
    if not out.ok:
        problems.append(f"{step['name']}: eps is not positive at k = {c['k']}")
    elif out.q != _int(c["q"]) or out.m_bound != _int(c["m_bound"]):
        problems.append(f"{step['name']}: replay gives q = {out.q}, m = {out.m_bound}")
    elif not _output_matches(step["output"], out):
        problems.append(f"{step['name']}: output does not follow from the replayed reduction")
    return problems


def _output_matches(output, out) -> bool:
    # integer outputs are m_bound - 1; interval outputs enclose log(A q / eps) / log B
    if isinstance(output, dict):
        mid, rad = Fraction(output["mid"]), Fraction(output["rad"])
        return mid - rad <= out.log_ratio.upper() and out.log_ratio.lower() <= mid + rad
    return _int(output) == out.m_bound - 1


def _check_batch(step: dict, precision: Precision) -> list[str]:
    c = step["constants"]
    problems = []
    worst = 0
    for g, (k, m) in c["reductions"].items():
        out = _replay_reduction(c, c["mu_template"].format(g=g), _int(k), precision)
        if not out.ok or out.m_bound != _int(m):
            problems.append(f"{step['name']}: gap {g} does not replay")
        worst = max(worst, _int(m))
    lo, hi = (_int(x) for x in c["gaps"])
    covered = {int(g) for g in c["reductions"]} | {_int(g) for g in c["nonpositive_gaps"]}
    if covered != set(range(lo, hi + 1)):
        problems.append(f"{step['name']}: gaps {lo}..{hi} are not all covered")
    if worst - 1 != _int(step["output"]):
        problems.append(f"{step['name']}: output is not max(m) - 1")
    return problems


def _check_direct(step: dict, precision: Precision) -> list[str]:
    c = step["constants"]
    k = _int(c["k"])
    cf = expand_source(parse_expr(c["gamma"]), k + 2, precision)
    if cf.q(k) != _int(c["q_k"]) or cf.q(k + 1) != _int(c["q_k1"]):
        return [f"{step['name']}: convergent denominators do not match"]
    bound = direct_convergent_bound(cf, k, Fraction(c["A"]), parse_expr(c["B"]), Fraction(c["multiplier_bound"]), precision)
    return [] if bound == _int(step["output"]) else [f"{step['name']}: replay gives {bound}"]


def _check_scan(step: dict, precision: Precision) -> list[str]:
    from expdioph.search import scan_details

    c = step["constants"]
    lo, hi = (_int(x) for x in c["n1"])
    res = scan_details(range(lo, hi + 1), _int(c["gap_max"]), _int(c["z1_max"]), 3)
    return [] if res.max_valuation == _int(step["output"]) else [f"{step['name']}: replay gives {res.max_valuation}"]


def _check_index_bound(step: dict, ledger: BoundLedger, precision: Precision) -> list[str]:
    from expdioph.search import valuation_to_index_bound

    v = _int(ledger[step["inputs"][0]].output)
    n = valuation_to_index_bound(v, precision=precision)
    return [] if n == _int(step["output"]) else [f"{step['name']}: replay gives {n}"]


def verify(cert: Certificate | dict, precision: Precision | None = None, replay: bool = True) -> list[str]:
    """Re-check a certificate; returns the problems found (empty means verified).

    Always checks the schema, the ledger's dependency order and every
    solution against the equation.  With ``replay`` each reduction,
    fallback bound, valuation scan and index bound is recomputed from the
    recorded constants.
    """
    if isinstance(cert, dict):
        cert = Certificate.from_dict(cert)
    precision = precision or cert.precision
    ledger = BoundLedger.from_list(cert.ledger)
    problems = list(ledger.check_consistency())
    if cert.problem is not None and cert.solutions is not None:
        spec = problem_from_dict(cert.problem)
        for sol in cert.solutions:
            if not spec.is_solution(sol[: spec.t], sol[spec.t:]):
                problems.append(f"{sol} is not a solution")
    if cert.status != "ok":
        problems.append(f"certificate records a failed run: {cert.error}")
    if not replay:
        return problems
    for step in cert.ledger:
        c = step["constants"]
        if "mu_template" in c:
            problems += _check_batch(step, precision)
        elif {"gamma", "mu", "k", "q"} <= c.keys():
            problems += _check_reduction(step, precision)
        elif {"gamma", "q_k", "q_k1"} <= c.keys():
            problems += _check_direct(step, precision)
        elif step["name"] == "valuation_scan":
            problems += _check_scan(step, precision)
        elif step["name"] == "valuation_index_bound":
            problems += _check_index_bound(step, ledger, precision)
    return problems
