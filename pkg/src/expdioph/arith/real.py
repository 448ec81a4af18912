"""Interval reals with outward rounding.

A :class:`CertifiedReal` is a closed interval ``[lo, hi]`` of binary
floating-point endpoints.  Every operation rounds the lower endpoint toward
``-inf`` and the upper endpoint toward ``+inf``, so the true value of any
composed expression stays inside the result.  Elementary functions are
evaluated with mpmath's directed-rounding kernels and then widened by one
extra ulp.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, TypeVar, Union

from mpmath import libmp as _m

from expdioph.errors import DomainError, PrecisionExhausted

DEFAULT_PREC = 192
MAX_PREC = 16384

_F = _m.round_floor
_C = _m.round_ceiling
_ZERO = _m.fzero

T = TypeVar("T")
Number = Union[int, Fraction]


@dataclass(frozen=True)
class Precision:
    """Working-precision policy: start at ``start`` bits, double up to ``ceiling``."""

    start: int = DEFAULT_PREC
    ceiling: int = MAX_PREC

    def __post_init__(self):
        if self.start < 16 or self.ceiling < self.start:
            raise ValueError(f"bad precision policy {self.start}..{self.ceiling}")

    def ladder(self) -> Iterator[int]:
        prec = self.start
        while True:
            yield prec
            if prec >= self.ceiling:
                return
            prec = min(2 * prec, self.ceiling)


DEFAULT_PRECISION = Precision()


def escalate(fn: Callable[[int], T], precision: Precision = DEFAULT_PRECISION) -> T:
    """Call ``fn(prec)`` on the precision ladder until it stops raising
    :class:`PrecisionExhausted`.  Re-raises at the ceiling."""
    last = None
    for prec in precision.ladder():
        try:
            return fn(prec)
        except PrecisionExhausted as exc:
            last = exc
    raise PrecisionExhausted(
        f"undecided at the precision ceiling of {precision.ceiling} bits: {last}"
    )


def _ulp(x, prec):
    if x == _ZERO:
        return _m.from_man_exp(1, -prec)
    _, _, exp, bc = x
    return _m.from_man_exp(1, exp + bc - prec)


def _down(x, prec):
    return _m.mpf_sub(x, _ulp(x, prec), prec, _F)


def _up(x, prec):
    return _m.mpf_add(x, _ulp(x, prec), prec, _C)


def _from_number(v: Number, prec: int, rnd):
    if isinstance(v, int):
        return _m.from_int(v)
    if v.denominator == 1:
        return _m.from_int(v.numerator)
    return _m.from_rational(v.numerator, v.denominator, prec, rnd)


def _to_fraction(x) -> Fraction:
    p, q = _m.to_rational(x)
    return Fraction(int(p), int(q))


def _lt(a, b) -> bool:
    return _m.mpf_lt(a, b)


def _le(a, b) -> bool:
    return _m.mpf_le(a, b)


class CertifiedReal:
    """Closed interval known to contain one real number."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec: int = DEFAULT_PREC):
        if _lt(hi, lo):
            raise ValueError("interval endpoints out of order")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "prec", int(prec))

    def __setattr__(self, name, value):
        raise AttributeError("CertifiedReal is immutable")

    def __reduce__(self):
        return (CertifiedReal, (self.lo, self.hi, self.prec))

    # -- construction ---------------------------------------------------

    @classmethod
    def exact(cls, value, prec: int = DEFAULT_PREC) -> "CertifiedReal":
        """Tightest enclosure of an int, Fraction, float or decimal string."""
        if isinstance(value, CertifiedReal):
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, (float, str)):
            value = Fraction(value)
        if isinstance(value, int):
            x = _m.from_int(value)
            return cls(x, x, prec)
        if isinstance(value, Fraction):
            return cls(_from_number(value, prec, _F), _from_number(value, prec, _C), prec)
        raise TypeError(f"cannot certify {type(value).__name__}")

    @classmethod
    def between(cls, lo: Number, hi: Number, prec: int = DEFAULT_PREC) -> "CertifiedReal":
        """Interval enclosing ``[lo, hi]`` for exact rational endpoints."""
        lo, hi = Fraction(lo), Fraction(hi)
        return cls(_from_number(lo, prec, _F), _from_number(hi, prec, _C), prec)

    def _coerce(self, other) -> "CertifiedReal":
        if isinstance(other, CertifiedReal):
            return other
        if isinstance(other, (int, Fraction)):
            return CertifiedReal.exact(other, self.prec)
        return NotImplemented

    # -- views ----------------------------------------------------------

    @property
    def midpoint(self) -> Fraction:
        return (self.lower() + self.upper()) / 2

    @property
    def radius(self) -> Fraction:
        """Half-width; exact, so ``midpoint ± radius`` is the interval itself."""
        return (self.upper() - self.lower()) / 2

    @property
    def width(self) -> Fraction:
        return self.upper() - self.lower()

    def lower(self) -> Fraction:
        return _to_fraction(self.lo)

    def upper(self) -> Fraction:
        return _to_fraction(self.hi)

    def __float__(self) -> float:
        return float(self.midpoint)

    def __repr__(self) -> str:
        mid, rad = self.to_decimal(20)
        return f"CertifiedReal({mid} ± {rad})"

    def to_decimal(self, digits: int = 40) -> tuple[str, str]:
        """Decimal midpoint string and a radius string rounded *up*, such that
        the true value lies within ``mid ± rad`` read as exact decimals."""
        m = self.midpoint
        mid_s = _m.to_str(_m.from_rational(m.numerator, m.denominator, self.prec + 4, _m.round_nearest), digits)
        if mid_s in ("0.0", "-0.0"):
            mid_s = "0.0"
        mid = Fraction(decimal.Decimal(mid_s))
        rad = max(self.upper() - mid, mid - self.lower(), Fraction(0))
        if rad == 0:
            return mid_s, "0"
        ctx = decimal.Context(prec=3, rounding=decimal.ROUND_CEILING)
        rad_d = ctx.divide(decimal.Decimal(rad.numerator), decimal.Decimal(rad.denominator))
        if Fraction(rad_d) < rad:  # pragma: no cover - ROUND_CEILING guarantees this
            rad_d = ctx.next_plus(rad_d)
        return mid_s, f"{rad_d:E}"

    # -- arithmetic -----------------------------------------------------

    def __neg__(self) -> "CertifiedReal":
        return CertifiedReal(_m.mpf_neg(self.hi), _m.mpf_neg(self.lo), self.prec)

    def __pos__(self) -> "CertifiedReal":
        return self

    def __abs__(self) -> "CertifiedReal":
        if _le(_ZERO, self.lo):
            return self
        if _le(self.hi, _ZERO):
            return -self
        top = _m.mpf_neg(self.lo)
        return CertifiedReal(_ZERO, self.hi if _lt(top, self.hi) else top, self.prec)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        return CertifiedReal(_m.mpf_add(self.lo, o.lo, p, _F), _m.mpf_add(self.hi, o.hi, p, _C), p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        return CertifiedReal(_m.mpf_sub(self.lo, o.hi, p, _F), _m.mpf_sub(self.hi, o.lo, p, _C), p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        lows = [_m.mpf_mul(a, b, p, _F) for a, b in pairs]
        highs = [_m.mpf_mul(a, b, p, _C) for a, b in pairs]
        return CertifiedReal(_min(lows), _max(highs), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not (_lt(_ZERO, o.lo) or _lt(o.hi, _ZERO)):
            if o.lo == _ZERO and o.hi == _ZERO:
                raise DomainError("division by zero")
            raise PrecisionExhausted("divisor interval contains zero")
        p = max(self.prec, o.prec)
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        lows = [_m.mpf_div(a, b, p, _F) for a, b in pairs]
        highs = [_m.mpf_div(a, b, p, _C) for a, b in pairs]
        return CertifiedReal(_min(lows), _max(highs), p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int) -> "CertifiedReal":
        if not isinstance(n, int):
            raise TypeError("only integer powers; use exp(y*log(x)) for real exponents")
        if n < 0:
            return CertifiedReal.exact(1, self.prec) / (self ** (-n))
        base = abs(self) if n % 2 == 0 else self
        result = CertifiedReal.exact(1, self.prec)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- decisions ------------------------------------------------------

    def is_positive(self) -> bool:
        return _lt(_ZERO, self.lo)

    def is_negative(self) -> bool:
        return _lt(self.hi, _ZERO)

    def is_nonnegative(self) -> bool:
        return _le(_ZERO, self.lo)

    def sign(self) -> int:
        if self.is_positive():
            return 1
        if self.is_negative():
            return -1
        if self.lo == _ZERO and self.hi == _ZERO:
            return 0
        raise PrecisionExhausted("sign undecided: interval contains zero")

    def certainly_lt(self, other) -> bool:
        o = self._coerce(other)
        return _lt(self.hi, o.lo)

    def certainly_le(self, other) -> bool:
        o = self._coerce(other)
        return _le(self.hi, o.lo)

    def certainly_gt(self, other) -> bool:
        o = self._coerce(other)
        return _lt(o.hi, self.lo)

    def certainly_ge(self, other) -> bool:
        o = self._coerce(other)
        return _le(o.hi, self.lo)

    def compare(self, other) -> int:
        """-1 or +1 when the order against ``other`` is certain."""
        if self.certainly_lt(other):
            return -1
        if self.certainly_gt(other):
            return 1
        raise PrecisionExhausted("comparison undecided at this precision")

    def contains(self, value) -> bool:
        if isinstance(value, CertifiedReal):
            return _le(self.lo, value.lo) and _le(value.hi, self.hi)
        v = Fraction(value)
        return self.lower() <= v <= self.upper()

    def overlaps(self, other: "CertifiedReal") -> bool:
        return _le(self.lo, other.hi) and _le(other.lo, self.hi)

    def floor(self) -> int:
        a = _m.to_int(_m.mpf_floor(self.lo))
        b = _m.to_int(_m.mpf_floor(self.hi))
        if a != b:
            raise PrecisionExhausted("floor undecided: interval straddles an integer")
        return int(a)

    def ceil(self) -> int:
        a = _m.to_int(_m.mpf_ceil(self.lo))
        b = _m.to_int(_m.mpf_ceil(self.hi))
        if a != b:
            raise PrecisionExhausted("ceiling undecided: interval straddles an integer")
        return int(a)

    def upper_ceil(self) -> int:
        """Smallest integer not below any point of the interval."""
        return int(_m.to_int(_m.mpf_ceil(self.hi)))

    def lower_floor(self) -> int:
        return int(_m.to_int(_m.mpf_floor(self.lo)))

    def with_prec(self, prec: int) -> "CertifiedReal":
        return CertifiedReal(self.lo, self.hi, prec)

    def intersect(self, other: "CertifiedReal") -> "CertifiedReal":
        """Common part of two enclosures of the same number."""
        lo = other.lo if _lt(self.lo, other.lo) else self.lo
        hi = other.hi if _lt(other.hi, self.hi) else self.hi
        if _lt(hi, lo):
            raise ValueError("disjoint enclosures cannot describe the same number")
        return CertifiedReal(lo, hi, max(self.prec, other.prec))

    def hull(self, other: "CertifiedReal") -> "CertifiedReal":
        lo = self.lo if _lt(self.lo, other.lo) else other.lo
        hi = self.hi if _lt(other.hi, self.hi) else other.hi
        return CertifiedReal(lo, hi, max(self.prec, other.prec))


def _min(xs):
    best = xs[0]
    for x in xs[1:]:
        if _lt(x, best):
            best = x
    return best


def _max(xs):
    best = xs[0]
    for x in xs[1:]:
        if _lt(best, x):
            best = x
    return best


RealLike = Union[CertifiedReal, int, Fraction]


def _as_real(x: RealLike, prec: int) -> CertifiedReal:
    if isinstance(x, CertifiedReal):
        return x
    return CertifiedReal.exact(x, prec)


def certified_log(x: RealLike, prec: int | None = None) -> CertifiedReal:
    """Natural logarithm; ``x`` must be certified positive."""
    prec = prec or getattr(x, "prec", DEFAULT_PREC)
    x = _as_real(x, prec)
    if not x.is_positive():
        if _le(x.hi, _ZERO):
            raise DomainError("log of a non-positive number")
        raise PrecisionExhausted("log argument not certified positive")
    p = max(prec, x.prec)
    one = _m.from_int(1)
    lo = _ZERO if x.lo == one else _down(_m.mpf_log(x.lo, p + 8, _F), p)
    hi = _ZERO if x.hi == one else _up(_m.mpf_log(x.hi, p + 8, _C), p)
    return CertifiedReal(lo, hi, p)


def certified_sqrt(x: RealLike, prec: int | None = None) -> CertifiedReal:
    prec = prec or getattr(x, "prec", DEFAULT_PREC)
    x = _as_real(x, prec)
    if _lt(x.hi, _ZERO):
        raise DomainError("sqrt of a negative number")
    if _lt(x.lo, _ZERO):
        raise PrecisionExhausted("sqrt argument not certified non-negative")
    p = max(prec, x.prec)
    lo = _ZERO if x.lo == _ZERO else _m.mpf_sqrt(x.lo, p, _F)
    hi = _m.mpf_sqrt(x.hi, p, _C)
    return CertifiedReal(lo, hi, p)


def certified_exp(x: RealLike, prec: int | None = None) -> CertifiedReal:
    prec = prec or getattr(x, "prec", DEFAULT_PREC)
    x = _as_real(x, prec)
    p = max(prec, x.prec)
    one = _m.from_int(1)
    lo = one if x.lo == _ZERO else _down(_m.mpf_exp(x.lo, p + 8, _F), p)
    hi = one if x.hi == _ZERO else _up(_m.mpf_exp(x.hi, p + 8, _C), p)
    if _lt(lo, _ZERO):
        lo = _ZERO
    return CertifiedReal(lo, hi, p)


def nearest_int_distance(x: CertifiedReal) -> CertifiedReal:
    """Distance from ``x`` to the nearest integer, as an interval in [0, 1/2].

    Raises :class:`PrecisionExhausted` when the interval reaches a
    half-integer, since the nearest integer is then not determined.
    """
    lo, hi = x.lower(), x.upper()
    if hi - lo >= Fraction(1, 4):
        raise PrecisionExhausted("radius too large for a nearest-integer decision")
    n = round((lo + hi) / 2)
    half = Fraction(1, 2)
    if lo < n - half or hi > n + half or (lo != hi and (lo == n - half or hi == n + half)):
        raise PrecisionExhausted("interval reaches a half-integer")
    if lo >= n:
        d = x - n
    elif hi <= n:
        d = n - x
    else:
        top = max(n - lo, hi - n)
        return CertifiedReal.between(0, top, x.prec)
    return d
