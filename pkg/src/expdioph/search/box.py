"""Exhaustive search in a finite box and p-adic valuations."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import NamedTuple

from expdioph.recurrence import FIBONACCI, BinaryRecurrence


class SolutionTuple(NamedTuple):
    n1: int
    n2: int
    z1: int
    z2: int

    def __str__(self) -> str:
        return str(tuple(self))


def padic_valuation(x: int, p: int) -> int | float:
    """Exponent of ``p`` in ``x``; ``math.inf`` for ``x == 0``."""
    if p < 2:
        raise ValueError("p must be a prime")
    if x == 0:
        return math.inf
    x = abs(x)
    v = 0
    # strip big chunks first so huge valuations stay cheap
    step, chunk = 16, p**16
    while step:
        while x % chunk == 0:
            x //= chunk
            v += step
        step //= 2
        chunk = p**step if step else 1
    return v


def max_exponent(p: int, limit: int) -> int:
    """Largest ``z >= 0`` with ``p**z <= limit`` (``limit >= 1``)."""
    z, power = 0, p
    while power <= limit:
        z += 1
        power *= p
    return z


def power_sum_table(z2_max: int, small: int = 2, large: int = 3) -> dict[int, list[tuple[int, int]]]:
    """``small^z1 + large^z2 -> [(z1, z2), ...]`` for ``z1 <= z2 <= z2_max``."""
    table: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for z2 in range(z2_max + 1):
        big = large**z2
        for z1 in range(z2 + 1):
            table[small**z1 + big].append((z1, z2))
    return dict(table)


def enumerate_box(N: int, rec: BinaryRecurrence = FIBONACCI, small: int = 2, large: int = 3) -> list[SolutionTuple]:
    """All ``(n1, n2, z1, z2)`` with ``n2 <= n1 <= N``, ``z1 <= z2`` and
    ``U_n1 + U_n2 = small^z1 + large^z2``, sorted lexicographically.

    ``z2`` is capped at the largest exponent with ``large^z2 <= 2 max|U_n|``,
    which no solution can exceed.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    terms = rec.terms(N)
    top = max(2 * max(abs(u) for u in terms), 1)
    table = power_sum_table(max_exponent(large, top), small, large)
    found = set()
    for n1 in range(N + 1):
        for n2 in range(n1 + 1):
            for z1, z2 in table.get(terms[n1] + terms[n2], ()):
                found.add(SolutionTuple(n1, n2, z1, z2))
    return sorted(found)
