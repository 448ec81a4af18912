"""An ordered, serializable record of every inequality a run relies on."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from expdioph.arith.real import CertifiedReal
from expdioph.errors import ConstantDrift

DIGITS = 30

# agreement labels for a recomputed upper bound against a published one
MATCH = "match"
SHARPER = "sharper"
ROUNDED_DOWN = "reference_rounded_down"
UNSUPPORTED = "reference_unsupported"

MATCH_TOL = Fraction(5, 1000)
DRIFT_TOL = Fraction(2, 100)


def encode(value):
    """JSON-safe, exact-or-enclosing encoding of a number."""
    if isinstance(value, CertifiedReal):
        mid, rad = value.to_decimal(DIGITS)
        return {"mid": mid, "rad": rad}
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"cannot encode {type(value).__name__}")


def _upper(value) -> Fraction:
    return value.upper() if isinstance(value, CertifiedReal) else Fraction(value)


def agreement(ours, reference, strict: bool = False) -> str:
    """Compare an upper bound we certified against a published one.

    ``strict`` marks constants that must not drift: a looser recomputation
    beyond 2% raises :class:`ConstantDrift` instead of being labelled.
    """
    ours_u, ref = _upper(ours), Fraction(reference)
    rel = (ours_u - ref) / ref
    if abs(rel) <= MATCH_TOL:
        return MATCH
    if rel < 0:
        if strict and -rel > DRIFT_TOL:
            raise ConstantDrift(f"recomputed {float(ours_u):.6g} is far below the published {float(ref):.6g}")
        return SHARPER
    if rel <= DRIFT_TOL:
        return ROUNDED_DOWN
    if strict:
        raise ConstantDrift(f"recomputed {float(ours_u):.6g} exceeds the published {float(ref):.6g} by {float(rel):.2%}")
    return UNSUPPORTED


@dataclass
class LedgerStep:
    name: str
    inequality: str
    anchor: str
    constants: dict = field(default_factory=dict)
    inputs: list = field(default_factory=list)
    output: object = None
    reference_value: str | None = None
    agreement: str | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "inequality": self.inequality,
            "anchor": self.anchor,
            "constants": encode(self.constants),
            "inputs": list(self.inputs),
            "output": encode(self.output),
        }
        for key in ("reference_value", "agreement", "note"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LedgerStep":
        return cls(
            d["name"], d["inequality"], d["anchor"], d.get("constants", {}), list(d.get("inputs", [])),
            d.get("output"), d.get("reference_value"), d.get("agreement"), d.get("note"),
        )


class BoundLedger:
    def __init__(self, steps=None):
        self.steps: list[LedgerStep] = list(steps or [])

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def names(self) -> list[str]:
        return [s.name for s in self.steps]

    def __getitem__(self, name: str) -> LedgerStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    def __contains__(self, name) -> bool:
        return any(s.name == name for s in self.steps)

    def add(self, name, inequality, anchor, *, constants=None, inputs=(), output=None,
            reference=None, strict=False, note=None) -> LedgerStep:
        if name in self:
            raise ValueError(f"duplicate ledger step {name!r}")
        missing = [i for i in inputs if i not in self]
        if missing:
            raise ValueError(f"step {name!r} consumes unknown steps {missing}")
        step = LedgerStep(name, inequality, anchor, dict(constants or {}), list(inputs), output)
        if reference is not None:
            step.reference_value = str(reference)
            if output is not None:
                step.agreement = agreement(output, Fraction(str(reference)), strict)
        step.note = note
        self.steps.append(step)
        return step

    def check_consistency(self) -> list[str]:
        """Problems found: forward references, or steps nobody consumes."""
        problems = []
        seen: set[str] = set()
        used: set[str] = set()
        for s in self.steps:
            for i in s.inputs:
                if i not in seen:
                    problems.append(f"{s.name} consumes {i} before it is defined")
                used.add(i)
            seen.add(s.name)
        for s in self.steps[:-1]:
            if s.name not in used:
                problems.append(f"{s.name} is never consumed")
        return problems

    def to_list(self) -> list[dict]:
        return [s.to_dict() for s in self.steps]

    @classmethod
    def from_list(cls, items) -> "BoundLedger":
        return cls(LedgerStep.from_dict(d) for d in items)
