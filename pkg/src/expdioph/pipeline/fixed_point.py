"""Resolve ``n < C (log n)^k`` into an explicit bound on ``n``."""

from __future__ import annotations

from expdioph.arith.expr import RealSource, evaluator
from expdioph.arith.real import DEFAULT_PRECISION, CertifiedReal, Precision, certified_log, escalate
from expdioph.errors import DomainError, NonConvergence

MAX_ITER = 10_000


def solve_fixed_point(C: RealSource, k: int, precision: Precision = DEFAULT_PRECISION, max_iter: int = MAX_ITER) -> int:
    """Smallest integer ``N`` reached by ``N <- ceil(C (log N)^k)`` from above.

    The result satisfies ``N >= C (log N)^k`` and ``log N > k``; since
    ``n / (log n)^k`` increases once ``log n > k``, every ``n`` with
    ``n < C (log n)^k`` then has ``n < N``.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    src = evaluator(C)

    def attempt(prec: int) -> int:
        c = src(prec)
        if not c.is_positive():
            raise DomainError("C must be positive")
        if k == 0:
            return c.upper_ceil()

        def f(n: int) -> CertifiedReal:
            return c * certified_log(n, prec) ** k

        def above(n: int) -> bool:
            return certified_log(n, prec).certainly_gt(k) and f(n).certainly_le(n)

        # seed: double until n dominates C (log n)^k in the monotone region
        n = max(c.upper_ceil(), 3)
        for _ in range(max_iter):
            if above(n):
                break
            n *= 2
        else:
            raise NonConvergence("no seed above the fixed point found")
        for _ in range(max_iter):
            nxt = f(n).upper_ceil()
            if nxt >= n or not above(nxt):
                return n
            n = nxt
        raise NonConvergence(f"iteration did not settle within {max_iter} steps")

    return escalate(attempt, precision)
