"""Real quadratic numbers and their absolute logarithmic heights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import TYPE_CHECKING, Sequence

from expdioph.arith.real import (
    DEFAULT_PREC,
    DEFAULT_PRECISION,
    CertifiedReal,
    Precision,
    certified_log,
    certified_sqrt,
    escalate,
)
from expdioph.errors import PrecisionExhausted, ZeroInput

if TYPE_CHECKING:
    from expdioph.recurrence import ProblemSpec

PINK_ZIEGLER_FLOOR = Fraction(24, 100)


def squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = f**2 * d`` with ``d`` squarefree; returns ``(f, d)``."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    f, d, p = 1, n, 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            f *= p
        p += 1 if p == 2 else 2
    return f, d


@dataclass(frozen=True)
class QuadraticNumber:
    """The number ``x + y*sqrt(d)`` with rational ``x, y`` and squarefree ``d >= 1``.

    ``d == 1`` (or ``y == 0``) means the number is rational.  Use
    :meth:`make` to normalise an arbitrary positive radicand.
    """

    x: Fraction
    y: Fraction = Fraction(0)
    d: int = 1

    @classmethod
    def make(cls, x, y=0, radicand: int = 1) -> "QuadraticNumber":
        x, y = Fraction(x), Fraction(y)
        f, d = squarefree_split(radicand)
        y *= f
        if d == 1:
            return cls(x + y, Fraction(0), 1)
        if y == 0:
            return cls(x, Fraction(0), 1)
        return cls(x, y, d)

    @classmethod
    def rational(cls, value) -> "QuadraticNumber":
        return cls(Fraction(value), Fraction(0), 1)

    @property
    def is_rational(self) -> bool:
        return self.y == 0

    @property
    def degree(self) -> int:
        return 1 if self.is_rational else 2

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def _field(self, other: "QuadraticNumber") -> int:
        if self.is_rational:
            return other.d
        if other.is_rational or other.d == self.d:
            return self.d
        raise ValueError(f"numbers live in different fields Q(sqrt {self.d}) and Q(sqrt {other.d})")

    def _lift(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber.rational(other)
        return NotImplemented

    def _norm_out(self, x, y, d) -> "QuadraticNumber":
        return QuadraticNumber(x, y, d) if y else QuadraticNumber(x, Fraction(0), 1)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return self._norm_out(self.x + o.x, self.y + o.y, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.x, -self.y, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return self._norm_out(self.x * o.x + d * self.y * o.y, self.x * o.y + self.y * o.x, d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._norm_out(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadraticNumber.rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def to_real(self, prec: int = DEFAULT_PREC) -> CertifiedReal:
        value = CertifiedReal.exact(self.x, prec)
        if self.y:
            value = value + CertifiedReal.exact(self.y, prec) * certified_sqrt(self.d, prec)
        return value

    def minimal_polynomial(self) -> tuple[int, ...]:
        """Primitive integer coefficients, leading one positive, highest degree first."""
        if self.is_rational:
            r = self.x
            return (r.denominator, -r.numerator)
        coeffs = [Fraction(1), -self.trace(), self.norm()]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        return tuple(c // g for c in ints)

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.x)
        return f"{self.x} + {self.y}*sqrt({self.d})"


def _log_max1(v: CertifiedReal) -> CertifiedReal:
    a = abs(v)
    if a.certainly_le(1):
        return CertifiedReal.exact(0, v.prec)
    if a.certainly_ge(1):
        return certified_log(a)
    top = certified_log(CertifiedReal(a.hi, a.hi, a.prec))
    return CertifiedReal.between(0, top.upper(), a.prec)


def log_height(q: QuadraticNumber, prec: int = DEFAULT_PREC) -> CertifiedReal:
    """Absolute logarithmic height, computed from the exact minimal polynomial."""
    if not q:
        raise ZeroInput("the height of 0 is not defined here")
    if q.is_rational:
        r = q.x
        return certified_log(max(abs(r.numerator), r.denominator), prec)
    lead = q.minimal_polynomial()[0]
    total = certified_log(lead, prec) + _log_max1(q.to_real(prec)) + _log_max1(q.conjugate().to_real(prec))
    return total / 2


def is_root_of_unity(q: QuadraticNumber) -> bool:
    # a real number is a root of unity only when it is +1 or -1
    return q.is_rational and abs(q.x) == 1


def pink_ziegler_floor(q: QuadraticNumber, precision: Precision = DEFAULT_PRECISION) -> bool:
    """True iff ``q`` is a root of unity or its height is at least 0.24."""
    if is_root_of_unity(q):
        return True

    def decide(prec: int) -> bool:
        h = log_height(q, prec)
        if h.certainly_ge(PINK_ZIEGLER_FLOOR):
            return True
        if h.certainly_lt(PINK_ZIEGLER_FLOOR):
            return False
        raise PrecisionExhausted("height too close to 0.24")

    return escalate(decide, precision)


def a_of_i(spec: "ProblemSpec", gaps: Sequence[int], prec: int = DEFAULT_PREC) -> CertifiedReal:
    """Upper bound for ``max(2h(g), |log g|)`` of ``g = a^-1 sqrt(Delta) (1 + alpha^-g2 + ...)^-1``.

    ``gaps`` are the non-negative differences ``n1 - n_j`` for ``j = 2..i``.
    The leading term is ``2h(a)``, which equals ``2 log|a|`` whenever ``a``
    is a rational integer of absolute value at least one.
    """
    if any(g < 0 for g in gaps):
        raise ValueError("gaps must be non-negative")
    rec = spec.recurrence
    i = len(gaps) + 1
    log_alpha = certified_log(abs(rec.alpha.to_real(prec)))
    return (
        2 * log_height(rec.a, prec)
        + certified_log(rec.delta, prec)
        + 2 * sum(gaps) * log_alpha
        + i * certified_log(4, prec)
    )
