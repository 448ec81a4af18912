"""Brute-force checker for reduction outcomes on small instances.

Kept free of the package's interval code: everything is recomputed with
plain mpmath at high precision.
"""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath

GAMMAS = ["sqrt(2)", "sqrt(3)", "sqrt(7)", "log(3)/log(2)", "log(5)/log(3)", "(1+sqrt(5))/2", "log(7)/log(2)", "sqrt(11)/3"]
MUS = ["1/3", "2/7", "sqrt(5)/4", "log(2)", "5/11", "log(3)/7", "sqrt(2)-1", "3/13"]
BS = ["2", "3", "3/2", "(1+sqrt(5))/2", "sqrt(7)"]


def mp_eval(text: str):
    text = text.replace("^", "**")
    return eval(text, {"log": mpmath.log, "sqrt": mpmath.sqrt, "exp": mpmath.exp, "__builtins__": {}},
                {}) if not _is_rational(text) else mpmath.mpf(Fraction(text).numerator) / Fraction(text).denominator


def _is_rational(text: str) -> bool:
    try:
        Fraction(text)
        return True
    except ValueError:
        return False


def random_instance(rng: random.Random) -> dict:
    return {
        "gamma": rng.choice(GAMMAS),
        "mu": rng.choice(MUS),
        "A": rng.randint(1, 20),
        "B": rng.choice(BS),
        "M": rng.randint(5, 200),
    }


def counterexamples(inst: dict, m_bound: int) -> list[tuple[int, int, int]]:
    """All (u, n, m) with 0 <= u <= M, m >= m_bound and 0 < u*gamma - n + mu < A*B^-m.

    The right side shrinks with m, so m = m_bound is the only case to test.
    """
    out = []
    with mpmath.workdps(80):
        gamma, mu = mp_eval(inst["gamma"]), mp_eval(inst["mu"])
        B = mp_eval(inst["B"])
        m = max(m_bound, 0)
        rhs = inst["A"] * B ** (-m)
        for u in range(inst["M"] + 1):
            x = u * gamma + mu
            lo = int(mpmath.floor(x - rhs))
            for n in range(lo, int(mpmath.floor(x)) + 1):
                v = x - n
                if 0 < v < rhs:
                    out.append((u, n, m))
    return out
