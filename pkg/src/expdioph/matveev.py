"""Matveev's lower bound for non-vanishing linear forms in logarithms.

For ``Lambda = g_1^{b_1} ... g_t^{b_t} - 1 != 0`` with the ``g_j`` in a real
field of degree ``D``,

    log|Lambda| > -1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D) * (1 + log B) * A_1 ... A_t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from expdioph.arith.real import DEFAULT_PREC, CertifiedReal, certified_log, certified_sqrt
from expdioph.errors import HypothesisViolation

A_FLOOR = Fraction(16, 100)


def _real(v, prec: int) -> CertifiedReal:
    if isinstance(v, CertifiedReal):
        return v
    if isinstance(v, float):
        v = Fraction(str(v))
    return CertifiedReal.exact(v, prec)


@dataclass(frozen=True)
class LinearFormSpec:
    t: int
    D: int
    A: tuple
    B: object
    exponents: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if self.t < 1 or self.D < 1:
            raise HypothesisViolation("need t >= 1 and D >= 1")
        if len(self.A) != self.t:
            raise HypothesisViolation(f"expected {self.t} A-values, got {len(self.A)}")
        if self.exponents and len(self.exponents) != self.t:
            raise HypothesisViolation("one exponent per logarithm")


def matveev_coefficient(t: int, D: int, A: Sequence = (), prec: int = DEFAULT_PREC) -> CertifiedReal:
    """``1.4 * 30^(t+3) * t^4.5 * D^2 * (1+log D) * prod(A)``.

    Passing fewer than ``t`` A-values leaves the missing ones factored out,
    which is how a symbolic ``A_j`` (say one growing with ``log n``) is
    carried through a bound.
    """
    c = CertifiedReal.exact(Fraction(7, 5) * 30 ** (t + 3) * t**4 * D * D, prec)
    c = c * certified_sqrt(t, prec) * (1 + certified_log(D, prec))
    for a in A:
        c = c * _real(a, prec)
    return c


def check_inputs(lf: LinearFormSpec, prec: int = DEFAULT_PREC) -> None:
    for j, a in enumerate(lf.A, 1):
        if not _real(a, prec).certainly_ge(A_FLOOR):
            raise HypothesisViolation(f"A_{j} = {a} is below the 0.16 floor")
    B = _real(lf.B, prec)
    if not B.certainly_ge(1):
        raise HypothesisViolation(f"B = {lf.B} must be at least 1")
    for j, b in enumerate(lf.exponents, 1):
        if abs(b) > B.upper():
            raise HypothesisViolation(f"|b_{j}| = {abs(b)} exceeds B")


def lower_bound_exponent(lf: LinearFormSpec, prec: int = DEFAULT_PREC) -> CertifiedReal:
    """``E`` with ``|Lambda| >= exp(-E)``; use ``E.upper()`` in proofs."""
    check_inputs(lf, prec)
    B = _real(lf.B, prec)
    return matveev_coefficient(lf.t, lf.D, lf.A, prec) * (1 + certified_log(B))


def required_a(D: int, height, abs_log=None, prec: int = DEFAULT_PREC) -> CertifiedReal:
    """``max(D*h, |log g|, 0.16)`` as an interval."""
    from expdioph.recurrence import cmax

    parts = [D * _real(height, prec), CertifiedReal.exact(A_FLOOR, prec)]
    if abs_log is not None:
        parts.append(abs(_real(abs_log, prec)))
    return cmax(*parts)


def validate_hypotheses(lf: LinearFormSpec, heights: Sequence, prec: int = DEFAULT_PREC) -> bool:
    """True iff every ``A_j`` certainly dominates ``max(D h(g_j), |log g_j|, 0.16)``.

    ``heights`` holds either ``h(g_j)`` or pairs ``(h(g_j), log g_j)``.
    """
    if len(heights) != lf.t:
        return False
    for a, h in zip(lf.A, heights):
        h, lg = h if isinstance(h, tuple) else (h, None)
        if not _real(a, prec).certainly_ge(required_a(lf.D, h, lg, prec)):
            return False
    return True
