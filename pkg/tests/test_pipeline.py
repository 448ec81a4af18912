from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from expdioph.arith.real import Precision
from expdioph.errors import ConstantDrift, DegenerateSpec, DomainError, ProofIncomplete
from expdioph.pipeline import (
    BoundLedger,
    agreement,
    delta_constants,
    encode,
    group_indices,
    solve_fixed_point,
    theorem1_constant,
    theorem2_solve,
)
from expdioph.pipeline.ledger import MATCH, ROUNDED_DOWN, SHARPER, UNSUPPORTED
from expdioph.recurrence import FIBONACCI, BinaryRecurrence, ProblemSpec
from expdioph.search import enumerate_box
from tests.known_values import EXPECTED_SOLUTIONS

FIB23 = ProblemSpec(FIBONACCI, (2, 3), (1, 1), 2)


def fixed_point_oracle(C, k):
    """Smallest integer n > e^k with n >= C (log n)^k, by bisection in mpmath."""
    with mpmath.workdps(60):
        C = mpmath.mpf(C)

        def ok(n):
            return mpmath.log(n) > k and n >= C * mpmath.log(n) ** k

        hi = 4
        while not ok(hi):
            hi *= 2
        lo = max(int(mpmath.e**k), 2)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid
        return hi


# -- fixed point ------------------------------------------------------------------


@pytest.mark.parametrize("C,k", [(100, 1), (50, 2), (3, 1), (10**6, 2), (7, 3)])
def test_fixed_point_is_valid_and_near_minimal(C, k):
    n = solve_fixed_point(C, k)
    with mpmath.workdps(60):
        assert n >= C * mpmath.log(n) ** k and mpmath.log(n) > k
    # iteration from above lands at most a hair past the true threshold
    assert fixed_point_oracle(C, k) <= n <= fixed_point_oracle(C, k) * 1.01 + 1


def test_fixed_point_small_values():
    assert solve_fixed_point(100, 1) == 648
    assert solve_fixed_point(Fraction(15, 2), 0) == 8


def test_fixed_point_of_the_published_constant():
    n = solve_fixed_point(Fraction(145, 100) * 10**27, 2)
    assert 6 * 10**30 <= n <= 135 * 10**29


@given(st.integers(2, 10**9), st.integers(1, 3))
def test_fixed_point_dominates(C, k):
    n = solve_fixed_point(C, k)
    with mpmath.workdps(50):
        assert n >= C * mpmath.log(n) ** k


def test_fixed_point_rejects_bad_input():
    with pytest.raises(DomainError):
        solve_fixed_point(-1, 2)
    with pytest.raises(DomainError):
        solve_fixed_point(10, -1)


# -- ledger -------------------------------------------------------------------------


def test_agreement_labels():
    assert agreement(Fraction(1001), 1000) == MATCH
    assert agreement(900, 1000) == SHARPER
    assert agreement(1015, 1000) == ROUNDED_DOWN
    assert agreement(1500, 1000) == UNSUPPORTED
    assert agreement(1015, 1000, strict=True) == ROUNDED_DOWN
    with pytest.raises(ConstantDrift):
        agreement(1500, 1000, strict=True)
    with pytest.raises(ConstantDrift):
        agreement(900, 1000, strict=True)


def test_ledger_rejects_duplicates_and_unknown_inputs():
    L = BoundLedger()
    L.add("a", "x < 1", "anchor")
    with pytest.raises(ValueError):
        L.add("a", "x < 2", "anchor")
    with pytest.raises(ValueError):
        L.add("b", "y < 1", "anchor", inputs=["missing"])
    L.add("b", "y < 1", "anchor", inputs=["a"], output=3, reference="3")
    assert L["b"].agreement == MATCH
    assert L.check_consistency() == []
    L.add("c", "z < 1", "anchor")
    L.add("d", "w < 1", "anchor", inputs=["c"])
    assert L.check_consistency() == ["b is never consumed"]


def test_ledger_round_trip():
    L = BoundLedger()
    L.add("a", "x < 1", "anchor", constants={"k": 3, "r": Fraction(1, 3)}, output=5)
    L.add("b", "y < x", "anchor", inputs=["a"], output=4, reference=5, note="n")
    again = BoundLedger.from_list(L.to_list())
    assert again.to_list() == L.to_list()
    assert again.names() == ["a", "b"]


def test_encode_shapes():
    assert encode(12) == "12"
    assert encode(Fraction(1, 3)) == "1/3"
    assert encode({"a": (1, True, None)}) == {"a": ["1", True, None]}
    with pytest.raises(TypeError):
        encode(1.5)


# -- general bound ------------------------------------------------------------------


def test_group_indices():
    assert group_indices([5, 3, 5, 1]) == ((5, 3, 1), (2, 1, 1))


def test_delta_constants_for_two_and_three():
    d = delta_constants(FIB23, 256)
    ratio = mpmath.log(2) / mpmath.log(3)
    assert abs(float(d.delta1) - min(0.5, float(1 - ratio))) < 1e-15
    assert abs(float(d.delta2) - float(1 - (mpmath.log(3) + mpmath.log(2)) / (2 * mpmath.log(3)))) < 1e-15


def brute_force(spec: ProblemSpec, n_max: int, z_max: int) -> list[tuple]:
    import itertools

    U = spec.recurrence.terms(n_max)
    rhs = {}
    for zs in itertools.product(range(z_max + 1), repeat=len(spec.primes)):
        v = sum(b * p**z for b, p, z in zip(spec.coefficients, spec.primes, zs))
        rhs.setdefault(v, []).append(zs)
    out = []
    for ns in itertools.combinations_with_replacement(range(n_max, -1, -1), spec.t):
        for zs in rhs.get(sum(U[n] for n in ns), []):
            out.append(ns + zs)
    return out


SPECS = [
    FIB23,
    ProblemSpec(FIBONACCI, (2,), (1,), 1),
    ProblemSpec(FIBONACCI, (3,), (1,), 3),
    ProblemSpec(BinaryRecurrence(2, 1, 0, 1), (2, 3, 5), (1, 2, 1), 2),
    ProblemSpec(BinaryRecurrence(1, 1, 2, 1), (2, 3), (1, 1), 2, epsilon=Fraction(1, 3)),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"t{s.t}-p{'_'.join(map(str, s.primes))}")
def test_general_constant_properties(spec):
    C, ledger = theorem1_constant(spec)
    assert isinstance(C, int) and C > 0
    assert ledger.check_consistency() == []
    assert ledger.names()[-1] == "constant"
    sols = brute_force(spec, 30, 12)
    assert sols
    assert all(max(s) < C for s in sols)


def test_general_constant_dominates_the_known_table():
    C, _ = theorem1_constant(FIB23)
    assert all(max(s) < C for s in EXPECTED_SOLUTIONS)


def test_general_constant_is_deterministic():
    a, la = theorem1_constant(FIB23)
    b, lb = theorem1_constant(FIB23)
    assert a == b and la.to_list() == lb.to_list()


def test_general_constant_needs_a_growing_root():
    with pytest.raises(DegenerateSpec):
        theorem1_constant(ProblemSpec(BinaryRecurrence(-1, 1, 0, 1), (2,), (1,), 1))


# -- the Fibonacci (2, 3) instance --------------------------------------------------


def test_fib23_solutions(fib23_run):
    sols, ledger = fib23_run
    assert {tuple(s) for s in sols} == EXPECTED_SOLUTIONS
    assert [tuple(s) for s in sols] == [tuple(s) for s in enumerate_box(100)]


def test_fib23_ledger_is_consistent(fib23_run):
    ledger = fib23_run.ledger
    assert ledger.check_consistency() == []
    assert ledger.names()[0] == "box_search" and ledger.names()[-1] == "solutions"
    for step in ledger:
        assert step.inequality and step.anchor


def test_fib23_chain_closes(fib23_run):
    L = fib23_run.ledger
    assert L["valuation_index_bound"].output <= 100
    assert L["contradiction"].output == L["valuation_index_bound"].output
    assert L["n1_final_bound"].output >= L["gap_bound"].output
    assert L["lambda1_pos_reduction"].output <= 490


def test_fib23_matveev_constants(fib23_run):
    L = fib23_run.ledger
    assert abs(float(L["lambda1_matveev"].output) / 1.8e12 - 1) < 0.01
    assert abs(float(L["lambda2_matveev"].output) / 1.06e12 - 1) < 0.01
    assert L["lambda1_matveev"].agreement == ROUNDED_DOWN


def test_fib23_is_deterministic(fib23_run):
    again = theorem2_solve()
    assert again.ledger.to_list() == fib23_run.ledger.to_list()


def test_partial_ledger_on_failure():
    with pytest.raises(ProofIncomplete) as info:
        theorem2_solve(precision=Precision(32, 32))
    assert len(info.value.ledger) > 0
    assert info.value.ledger.names()[0] == "box_search"


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


def test_no_solutions_just_above_the_box():
    for n1 in range(101, 160):
        for n2 in range(n1 + 1):
            v = FIBONACCI.term(n1) + FIBONACCI.term(n2)
            z2 = 0
            while 3**z2 < v:
                assert not is_power_of_two(v - 3**z2), (n1, n2, z2)
                z2 += 1
