"""Binary recurrence sequences, problem instances and growth constants."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from expdioph.arith.real import DEFAULT_PREC, CertifiedReal, certified_log, certified_sqrt
from expdioph.errors import DegenerateDenominator, DegenerateSpec
from expdioph.heights import QuadraticNumber


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def cmax(*xs: CertifiedReal) -> CertifiedReal:
    """Interval enclosing the maximum of the enclosed values."""
    lo = max(x.lower() for x in xs)
    hi = max(x.upper() for x in xs)
    return CertifiedReal.between(lo, hi, max(x.prec for x in xs))


def cmin(*xs: CertifiedReal) -> CertifiedReal:
    lo = min(x.lower() for x in xs)
    hi = min(x.upper() for x in xs)
    return CertifiedReal.between(lo, hi, max(x.prec for x in xs))


@dataclass(frozen=True)
class BinaryRecurrence:
    """``U_n = P U_{n-1} + Q U_{n-2}`` with seeds ``U_0, U_1``.

    Only non-degenerate sequences with positive discriminant are accepted.
    ``alpha`` is the dominant root, so ``|alpha| > |beta|``.
    """

    P: int
    Q: int
    U0: int
    U1: int
    _memo: list = field(default_factory=list, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.P * self.Q == 0:
            raise DegenerateSpec("P*Q must be non-zero")
        if abs(self.U0) + abs(self.U1) == 0:
            raise DegenerateSpec("seeds are both zero")
        if self.delta <= 0:
            raise DegenerateSpec("discriminant P^2+4Q must be positive")
        if not (self.a and self.b):
            raise DegenerateSpec("a*b*alpha*beta vanishes")
        ratio = self.alpha / self.beta
        if ratio.is_rational and abs(ratio.x) == 1:
            raise DegenerateSpec("alpha/beta is a root of unity")
        self._memo.extend([self.U0, self.U1])

    def __getstate__(self):
        return (self.P, self.Q, self.U0, self.U1)

    def __setstate__(self, state):
        object.__setattr__(self, "P", state[0])
        object.__setattr__(self, "Q", state[1])
        object.__setattr__(self, "U0", state[2])
        object.__setattr__(self, "U1", state[3])
        object.__setattr__(self, "_memo", [state[2], state[3]])
        object.__setattr__(self, "_lock", threading.Lock())

    @property
    def delta(self) -> int:
        return self.P * self.P + 4 * self.Q

    @property
    def alpha(self) -> QuadraticNumber:
        sign = 1 if self.P > 0 else -1
        return QuadraticNumber.make(Fraction(self.P, 2), Fraction(sign, 2), self.delta)

    @property
    def beta(self) -> QuadraticNumber:
        sign = 1 if self.P > 0 else -1
        return QuadraticNumber.make(Fraction(self.P, 2), Fraction(-sign, 2), self.delta)

    @property
    def a(self) -> QuadraticNumber:
        return self.U1 - self.U0 * self.beta

    @property
    def b(self) -> QuadraticNumber:
        return self.U1 - self.U0 * self.alpha

    def term(self, n: int) -> int:
        """Exact ``U_n`` by iteration over a shared append-only prefix."""
        if n < 0:
            raise ValueError("index must be non-negative")
        memo = self._memo
        if n < len(memo):
            return memo[n]
        with self._lock:
            while len(memo) <= n:
                memo.append(self.P * memo[-1] + self.Q * memo[-2])
        return memo[n]

    def terms(self, n_max: int) -> list[int]:
        self.term(n_max)
        return self._memo[: n_max + 1]

    def terms_mod(self, modulus: int, n_max: int) -> list[int]:
        """``U_n mod modulus`` for ``0 <= n <= n_max`` without big integers."""
        out = [self.U0 % modulus, self.U1 % modulus]
        P, Q = self.P % modulus, self.Q % modulus
        while len(out) <= n_max:
            out.append((P * out[-1] + Q * out[-2]) % modulus)
        return out[: n_max + 1]

    def binet(self, n: int, prec: int = DEFAULT_PREC) -> CertifiedReal:
        """``(a alpha^n - b beta^n)/(alpha - beta)`` evaluated on intervals."""
        al, be = self.alpha.to_real(prec), self.beta.to_real(prec)
        num = self.a.to_real(prec) * al**n - self.b.to_real(prec) * be**n
        return num / (al - be)


FIBONACCI = BinaryRecurrence(1, 1, 0, 1)


@dataclass(frozen=True)
class ProblemSpec:
    """An instance ``U_{n1}+...+U_{nt} = b1 p1^z1 + ... + bs ps^zs``."""

    recurrence: BinaryRecurrence
    primes: tuple[int, ...]
    coefficients: tuple[int, ...]
    t: int
    epsilon: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(self, "coefficients", tuple(int(b) for b in self.coefficients))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if not self.primes:
            raise DegenerateSpec("at least one prime is required")
        if len(self.primes) != len(self.coefficients):
            raise DegenerateSpec("need one coefficient per prime")
        if list(self.primes) != sorted(self.primes):
            raise DegenerateSpec("primes must be sorted ascending")
        if not all(is_prime(p) for p in self.primes):
            raise DegenerateSpec("all p_i must be prime")
        if any(b <= 0 for b in self.coefficients):
            raise DegenerateSpec("coefficients must be positive")
        if not 0 < self.epsilon < 1:
            raise DegenerateSpec("epsilon must lie strictly between 0 and 1")
        if self.t < 1:
            raise DegenerateSpec("t must be at least 1")

    @property
    def s(self) -> int:
        return len(self.primes)

    @property
    def K(self) -> int:
        return max(self.coefficients)

    def lhs(self, ns: Sequence[int]) -> int:
        return sum(self.recurrence.term(n) for n in ns)

    def rhs(self, zs: Sequence[int]) -> int:
        return sum(b * p**z for b, p, z in zip(self.coefficients, self.primes, zs))

    def is_solution(self, ns: Sequence[int], zs: Sequence[int]) -> bool:
        return len(ns) == self.t and len(zs) == self.s and self.lhs(ns) == self.rhs(zs)


def abs_alpha(rec: BinaryRecurrence, prec: int = DEFAULT_PREC) -> CertifiedReal:
    return abs(rec.alpha.to_real(prec))


def growth_constants(spec: ProblemSpec, prec: int = DEFAULT_PREC) -> tuple[CertifiedReal, CertifiedReal]:
    """``c0`` with ``|U_n| <= c0 |alpha|^n`` and ``c1`` with ``z_s <= c1 n1``."""
    rec = spec.recurrence
    c0 = (abs(rec.a.to_real(prec)) + abs(rec.b.to_real(prec))) / certified_sqrt(rec.delta, prec)
    log_alpha = certified_log(abs_alpha(rec, prec))
    log_ps = certified_log(spec.primes[-1], prec)
    log_p1 = certified_log(spec.primes[0], prec)
    first = 2 * log_alpha / log_ps
    second = log_alpha * (log_ps + log_p1) / (2 * log_p1 * log_ps)
    return c0, cmax(first, second)


def nonvanishing_branches(spec: ProblemSpec, i: int, prec: int = DEFAULT_PREC) -> tuple[CertifiedReal, ...]:
    """The three quotients whose maximum bounds ``n1`` when the ``i``-th form vanishes."""
    rec = spec.recurrence
    al = abs_alpha(rec, prec)
    be = abs(rec.beta.to_real(prec))
    abs_a = abs(rec.a.to_real(prec))
    ratio = i * abs(rec.b.to_real(prec)) / abs_a
    _, c1 = growth_constants(spec, prec)
    log_ps = certified_log(spec.primes[-1], prec)
    first = certified_log(ratio) / certified_log(al / be)
    second = certified_log(ratio) / certified_log(al)
    denom = certified_log(al) - c1 * log_ps
    if not (denom.is_positive() or denom.is_negative()):
        raise DegenerateDenominator("|alpha| = p_s^c1: the third branch has a zero denominator")
    third = certified_log(spec.coefficients[-1] * certified_sqrt(rec.delta, prec) / abs_a) / denom
    return first, second, third


def nonvanishing_threshold(spec: ProblemSpec, prec: int = DEFAULT_PREC) -> CertifiedReal:
    """``l = max_i l_i``; for ``n1 > l`` none of the linear forms vanishes."""
    per_form = [cmax(*nonvanishing_branches(spec, i, prec)) for i in range(1, spec.t + 1)]
    return cmax(*per_form)
