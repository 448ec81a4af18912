"""Continued fractions of certified reals.

The expansion runs on the exact rational endpoints of the interval, so a
partial quotient is only emitted when every real in the interval agrees on
it.  Convergents then follow the usual three-term recurrences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from expdioph.arith.expr import RealSource, evaluator
from expdioph.arith.real import (
    DEFAULT_PRECISION,
    CertifiedReal,
    Precision,
    escalate,
)
from expdioph.errors import IndexOutOfRange, PrecisionExhausted


@dataclass(frozen=True)
class ContinuedFraction:
    partial_quotients: tuple[int, ...]
    numerators: tuple[int, ...]
    denominators: tuple[int, ...]

    @classmethod
    def from_quotients(cls, quotients) -> "ContinuedFraction":
        quotients = tuple(int(a) for a in quotients)
        ps, qs = [], []
        # seeds chosen so that the first step yields p0 = a0, q0 = 1
        p, p_prev = 1, 0
        q, q_prev = 0, 1
        for a in quotients:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
            ps.append(p)
            qs.append(q)
        return cls(quotients, tuple(ps), tuple(qs))

    def __len__(self) -> int:
        return len(self.partial_quotients)

    @property
    def convergents(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(p, q) for p, q in zip(self.numerators, self.denominators))

    def p(self, k: int) -> int:
        return self.numerators[self._check(k)]

    def q(self, k: int) -> int:
        return self.denominators[self._check(k)]

    def _check(self, k: int) -> int:
        if not 0 <= k < len(self.partial_quotients):
            raise IndexOutOfRange(f"convergent {k} not computed (have {len(self)})")
        return k

    def first_index_exceeding(self, bound: int) -> int | None:
        """Smallest ``k`` with ``q_k > bound``, or None if none is stored."""
        for k, q in enumerate(self.denominators):
            if q > bound:
                return k
        return None


def convergent(cf: ContinuedFraction, k: int) -> Fraction:
    return Fraction(cf.p(k), cf.q(k))


def _quotients(lo: Fraction, hi: Fraction, limit: int) -> tuple[list[int], bool]:
    """Common partial quotients of every real in ``[lo, hi]``.

    Returns the quotients and whether the expansion stopped because the
    interval became ambiguous (as opposed to reaching ``limit``).
    """
    out: list[int] = []
    while len(out) < limit:
        a = lo.numerator // lo.denominator
        if hi.numerator // hi.denominator != a:
            return out, True
        lo_frac, hi_frac = lo - a, hi - a
        if lo_frac == 0:
            # the interval touches the integer a itself; the next quotient is
            # only meaningful if the value is strictly above a
            if hi_frac == 0:
                out.append(a)
                return out, False
            return out, True
        out.append(a)
        lo, hi = 1 / hi_frac, 1 / lo_frac
    return out, False


def cfrac_expand(x: CertifiedReal, k_max: int) -> ContinuedFraction:
    """Partial quotients ``a_0..a_{k_max}`` valid for every point of ``x``.

    Raises :class:`PrecisionExhausted` if the interval cannot certify all of
    them.  An exact rational input whose expansion ends early returns the
    shorter, complete expansion.
    """
    lo, hi = x.lower(), x.upper()
    quotients, ambiguous = _quotients(lo, hi, k_max + 1)
    if ambiguous and len(quotients) < k_max + 1:
        raise PrecisionExhausted(
            f"only {len(quotients)} partial quotients certified at {x.prec} bits"
        )
    return ContinuedFraction.from_quotients(quotients)


def cfrac_prefix(x: CertifiedReal, limit: int = 10_000) -> ContinuedFraction:
    """Every partial quotient the interval certifies (at most ``limit``)."""
    quotients, _ = _quotients(x.lower(), x.upper(), limit)
    return ContinuedFraction.from_quotients(quotients)


@lru_cache(maxsize=256)
def _cached_prefix(source, prec: int) -> ContinuedFraction:
    return cfrac_prefix(evaluator(source)(prec))


def expand_source(source: RealSource, k_max: int, precision: Precision = DEFAULT_PRECISION) -> ContinuedFraction:
    """Like :func:`cfrac_expand` but re-evaluates ``source`` at higher
    precision until ``k_max + 1`` quotients are certified."""

    def attempt(prec: int) -> ContinuedFraction:
        cf = prefix_at(source, prec)
        if len(cf) < k_max + 1:
            raise PrecisionExhausted(f"{len(cf)} quotients at {prec} bits")
        return ContinuedFraction.from_quotients(cf.partial_quotients[: k_max + 1])

    return escalate(attempt, precision)


def prefix_at(source: RealSource, prec: int) -> ContinuedFraction:
    """Certified prefix of ``source`` at ``prec`` bits (cached for hashable sources)."""
    try:
        return _cached_prefix(source, prec)
    except TypeError:  # unhashable source
        return cfrac_prefix(evaluator(source)(prec))
