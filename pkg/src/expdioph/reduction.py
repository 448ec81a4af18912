"""One-dimensional Baker-Davenport reduction and the direct-convergent fallback.

Given ``0 < u*gamma - n + mu < A * B^-m`` with ``1 <= u <= M``, pick a
convergent denominator ``q > 6M`` of ``gamma`` and put

    eps = ||mu q|| - M ||gamma q||.

If ``eps > 0`` there is no solution with ``m >= log(A q / eps) / log B``.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

from expdioph.arith.cfrac import ContinuedFraction, prefix_at
from expdioph.arith.expr import RealSource, evaluator
from expdioph.arith.real import (
    DEFAULT_PRECISION,
    CertifiedReal,
    Precision,
    certified_log,
    escalate,
    nearest_int_distance,
)
from expdioph.errors import (
    DegenerateCase,
    DomainError,
    ExpDiophError,
    HypothesisViolation,
    NoConvergentFound,
    PrecisionExhausted,
)

DEFAULT_RETRIES = 50
DEFAULT_K_MAX = 2000


class Status(str, enum.Enum):
    SUCCESS = "Success"
    EPSILON_NONPOSITIVE = "EpsilonNonpositive"


@dataclass(frozen=True)
class ReductionInstance:
    """``gamma``, ``mu``, ``A`` and ``B`` are real sources (expressions,
    callables or exact numbers) so that precision can be raised on demand."""

    gamma: RealSource
    mu: RealSource
    A: RealSource
    B: RealSource
    M: int

    def __post_init__(self):
        if int(self.M) < 1:
            raise HypothesisViolation("M must be a positive integer")

    def with_mu(self, mu: RealSource) -> "ReductionInstance":
        return ReductionInstance(self.gamma, mu, self.A, self.B, self.M)


@dataclass(frozen=True)
class ReductionOutcome:
    status: Status
    k: int
    q: int
    epsilon: CertifiedReal
    m_bound: int | None
    prec: int
    log_ratio: CertifiedReal | None = None  # log(Aq/eps)/log B

    @property
    def ok(self) -> bool:
        return self.status is Status.SUCCESS


def _check_constants(A: CertifiedReal, B: CertifiedReal) -> None:
    if not A.is_positive():
        if A.upper() <= 0:
            raise HypothesisViolation("A must be positive")
        raise PrecisionExhausted("A not certified positive")
    if not B.certainly_gt(1):
        if B.upper() <= 1:
            raise HypothesisViolation("B must exceed 1")
        raise PrecisionExhausted("B not certified above 1")


def epsilon_at(gamma: CertifiedReal, mu: CertifiedReal, q: int, M: int) -> CertifiedReal:
    return nearest_int_distance(mu * q) - M * nearest_int_distance(gamma * q)


def _cf_through(gamma_src, gamma: CertifiedReal, prec: int, index: int, k_max: int) -> ContinuedFraction:
    cf = prefix_at(gamma_src, prec) if _hashable(gamma_src) else None
    if cf is None:
        from expdioph.arith.cfrac import cfrac_prefix

        cf = cfrac_prefix(gamma, limit=k_max + 1)
    if len(cf) <= index:
        if gamma.width == 0:
            raise NoConvergentFound("gamma is rational and its expansion ended")
        raise PrecisionExhausted(f"need convergent {index}, have {len(cf)} at {prec} bits")
    return cf


def _hashable(x) -> bool:
    try:
        hash(x)
    except TypeError:
        return False
    return True


def _first_index(cf: ContinuedFraction, bound: int, gamma: CertifiedReal, prec: int, k_max: int) -> int:
    k = cf.first_index_exceeding(bound)
    if k is not None and k <= k_max:
        return k
    if len(cf) > k_max or gamma.width == 0:
        raise NoConvergentFound(f"no convergent denominator above {bound} within k <= {k_max}")
    raise PrecisionExhausted(f"no q_k > {bound} among {len(cf)} certified quotients at {prec} bits")


def baker_davenport(
    inst: ReductionInstance,
    precision: Precision = DEFAULT_PRECISION,
    retries: int = DEFAULT_RETRIES,
    convergent_index: int | None = None,
    k_max: int = DEFAULT_K_MAX,
) -> ReductionOutcome:
    """Reduce one instance.

    By default the smallest ``k`` with ``q_k > 6M`` is tried first and ``k``
    advances while ``eps <= 0``, at most ``retries`` times.  A straddling
    ``eps`` raises the working precision instead.  ``convergent_index`` pins
    a single ``k`` (which must still satisfy ``q_k > 6M``).
    """
    g_src, m_src = evaluator(inst.gamma), evaluator(inst.mu)
    a_src, b_src = evaluator(inst.A), evaluator(inst.B)
    M = int(inst.M)

    def attempt(prec: int) -> ReductionOutcome:
        gamma, mu = g_src(prec), m_src(prec)
        A, B = a_src(prec), b_src(prec)
        _check_constants(A, B)
        if convergent_index is None:
            cf = _cf_through(inst.gamma, gamma, prec, 0, k_max)
            k0 = _first_index(cf, 6 * M, gamma, prec, k_max)
            ks = range(k0, k0 + retries + 1)
        else:
            ks = range(convergent_index, convergent_index + 1)
        eps = None
        k = ks[0]
        for k in ks:
            cf = _cf_through(inst.gamma, gamma, prec, k, k_max)
            q = cf.q(k)
            if q <= 6 * M:
                raise HypothesisViolation(f"q_{k} = {q} does not exceed 6M")
            eps = epsilon_at(gamma, mu, q, M)
            if eps.is_positive():
                ratio = certified_log(A * q / eps) / certified_log(B)
                return ReductionOutcome(Status.SUCCESS, k, q, eps, max(0, ratio.upper_ceil()), prec, ratio)
            if not eps.is_negative() and not (eps.upper() == 0):
                raise PrecisionExhausted(f"eps straddles 0 at k={k}")
        return ReductionOutcome(Status.EPSILON_NONPOSITIVE, k, q, eps, None, prec)

    return escalate(attempt, precision)


def _reduce_one(args):
    key, inst, precision, retries, convergent_index = args
    try:
        return key, baker_davenport(inst, precision, retries, convergent_index)
    except (ExpDiophError, DomainError, ArithmeticError) as exc:
        return key, exc


@dataclass
class BatchResult:
    outcomes: dict = field(default_factory=dict)  # key -> ReductionOutcome
    errors: dict = field(default_factory=dict)  # key -> exception

    @property
    def nonpositive(self) -> list:
        return sorted(k for k, o in self.outcomes.items() if not o.ok)

    @property
    def succeeded(self) -> dict:
        return {k: o for k, o in self.outcomes.items() if o.ok}

    def max_bound(self) -> int | None:
        bounds = [o.m_bound for o in self.outcomes.values() if o.ok]
        return max(bounds) if bounds else None

    def argmax(self):
        ok = self.succeeded
        return max(sorted(ok), key=lambda g: ok[g].m_bound) if ok else None


def batch_reduce(
    family: Mapping,
    template: ReductionInstance,
    precision: Precision = DEFAULT_PRECISION,
    retries: int = DEFAULT_RETRIES,
    workers: int = 1,
    convergent_index: int | None = None,
) -> BatchResult:
    """Reduce ``template`` once per ``mu`` in ``family`` (a map key -> mu).

    Per-key failures are collected in ``errors`` rather than aborting.
    With ``workers > 1`` the keys are spread over worker processes, which
    requires picklable sources (expressions are).
    """
    jobs = [(key, template.with_mu(mu), precision, retries, convergent_index) for key, mu in family.items()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_reduce_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_reduce_one(job) for job in jobs]
    out = BatchResult()
    for key, res in sorted(results, key=lambda kv: kv[0]):
        if isinstance(res, BaseException):
            out.errors[key] = res
        else:
            out.outcomes[key] = res
    return out


def direct_convergent_bound(
    cf: ContinuedFraction,
    k: int,
    A: RealSource,
    B: RealSource,
    numerator_scale,
    precision: Precision = DEFAULT_PRECISION,
) -> int:
    """Bound ``n`` in ``0 < z*gamma - p < A * B^-n`` when ``1 <= z <= numerator_scale``.

    Needs ``q_{k+1} > numerator_scale``.  Then ``z < q_{k+1}``, and by best
    approximation ``|z gamma - p| >= |q_k gamma - p_k| > 1/(q_k + q_{k+1})``.
    Returns the least integer ``n*`` such that every solution has ``n < n*``.
    """
    qk, qk1 = cf.q(k), cf.q(k + 1)
    scale = numerator_scale.upper() if isinstance(numerator_scale, CertifiedReal) else numerator_scale
    if qk1 <= scale:
        raise DegenerateCase(f"q_{k + 1} = {qk1} does not exceed the multiplier bound {scale}")
    a_src, b_src = evaluator(A), evaluator(B)

    def attempt(prec: int) -> int:
        a, b = a_src(prec), b_src(prec)
        _check_constants(a, b)
        value = certified_log(a * (qk + qk1)) / certified_log(b)
        return value.upper_ceil()

    return escalate(attempt, precision)


def smallest_index_for_multiplier(cf: ContinuedFraction, multiplier_bound) -> int:
    """Least ``k`` with ``q_{k+1}`` above the multiplier bound."""
    k1 = cf.first_index_exceeding(int(multiplier_bound))
    if k1 is None:
        raise NoConvergentFound(f"no stored q exceeds {multiplier_bound}")
    return max(0, k1 - 1)
