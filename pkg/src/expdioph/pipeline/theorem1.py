"""The general effective bound for ``U_n1 + ... + U_nt = b1 p1^z1 + ... + bs ps^zs``.

The chain follows the classical scheme: one Matveev estimate per grouped
linear form bounds the gaps ``n1 - n_(i+1) < G_i (log n1)^i``, a final form
bounds ``n1 < G_t (log n1)^t``, and a fixed-point solve turns that into a
number.  Every constant goes into the ledger.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from expdioph.arith.real import DEFAULT_PRECISION, CertifiedReal, Precision, certified_log, certified_sqrt, escalate
from expdioph.errors import DegenerateSpec
from expdioph.heights import a_of_i, log_height
from expdioph.matveev import A_FLOOR, matveev_coefficient
from expdioph.pipeline.fixed_point import solve_fixed_point
from expdioph.pipeline.ledger import BoundLedger
from expdioph.recurrence import ProblemSpec, cmax, cmin, growth_constants, nonvanishing_threshold

MATVEEV = "Matveev lower bound"
GROWTH = "growth constants lemma"
NONVANISHING = "nonvanishing lemma for the linear forms"
HEIGHT_BOUND = "height bound for the composite algebraic number"


@dataclass(frozen=True)
class DeltaConstants:
    delta1: CertifiedReal
    delta2: CertifiedReal | None  # undefined when all primes coincide
    delta3: CertifiedReal


def group_indices(ns: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Distinct indices in decreasing order and their multiplicities."""
    distinct = sorted(set(ns), reverse=True)
    return tuple(distinct), tuple(list(ns).count(n) for n in distinct)


def delta_constants(spec: ProblemSpec, prec: int) -> DeltaConstants:
    eps = CertifiedReal.exact(spec.epsilon, prec)
    ps, p1 = spec.primes[-1], spec.primes[0]
    if p1 == ps:
        return DeltaConstants(eps, None, eps)
    log_ps = certified_log(ps, prec)
    ratio = max((certified_log(p, prec) / log_ps for p in spec.primes if p < ps), key=lambda r: r.upper())
    delta1 = cmin(eps, 1 - ratio)
    delta2 = 1 - (log_ps + certified_log(p1, prec)) / (2 * log_ps)
    return DeltaConstants(delta1, delta2, cmin(eps, delta2))


def _log_plus(x: CertifiedReal) -> CertifiedReal:
    if x.certainly_le(1):
        return CertifiedReal.exact(0, x.prec)
    return cmax(certified_log(cmax(x, CertifiedReal.exact(1, x.prec))), CertifiedReal.exact(0, x.prec))


def _trivial_thresholds(spec: ProblemSpec, c0: CertifiedReal, prec: int) -> list[CertifiedReal]:
    # n1 below these makes z_s bounded outright
    log_alpha = certified_log(abs(spec.recurrence.alpha.to_real(prec)))
    tc0 = _log_plus(spec.t * c0)
    out = [tc0 / log_alpha]
    p1, ps = spec.primes[0], spec.primes[-1]
    if p1 < ps:
        lp1, lps = certified_log(p1, prec), certified_log(ps, prec)
        out.append(2 * tc0 * lp1 / (log_alpha * (lps - lp1)))
    return out


def _chain(spec: ProblemSpec, prec: int) -> tuple[int, BoundLedger]:
    rec = spec.recurrence
    if not rec.alpha.to_real(prec).certainly_gt(1):
        raise DegenerateSpec("the chain needs a dominant root alpha > 1")
    L = BoundLedger()
    alpha = rec.alpha.to_real(prec)
    beta_abs = abs(rec.beta.to_real(prec))
    log_alpha = certified_log(alpha)
    abs_a, abs_b = abs(rec.a.to_real(prec)), abs(rec.b.to_real(prec))
    sqrt_delta = certified_sqrt(rec.delta, prec)
    t, s, K = spec.t, spec.s, spec.K
    ps = spec.primes[-1]
    log_ps = certified_log(ps, prec)

    c0, c1 = growth_constants(spec, prec)
    c1p = cmax(c1, CertifiedReal.exact(1, prec))
    L.add("growth_constants", "|U_n| <= c0 |alpha|^n and z_s <= c1 n1", GROWTH,
          constants={"c0": c0, "c1": c1, "c1_prime": c1p}, output=c1p)

    ell = nonvanishing_threshold(spec, prec)
    trivial = _trivial_thresholds(spec, c0, prec)
    n0 = max([3, ell.upper_ceil()] + [x.upper_ceil() for x in trivial])
    log_n0 = certified_log(n0, prec)
    L.add("n1_threshold", "n1 > N0 makes every linear form nonzero and z_s non-trivially bounded",
          NONVANISHING, constants={"ell": ell, "trivial_thresholds": trivial}, inputs=["growth_constants"],
          output=n0)

    d = delta_constants(spec, prec)
    if not d.delta3.is_positive():
        raise DegenerateSpec("delta_3 is not positive")
    rho = cmin(alpha / beta_abs, alpha)
    decay = d.delta3 * certified_log(rho)
    L.add("delta_constants", "small-prime part <= (s-1) K p_s^((1-delta1) z_s); decay rate delta3 log rho",
          "bound on the non-dominant prime powers",
          constants={"delta1": d.delta1, "delta2": d.delta2, "delta3": d.delta3, "rho": rho},
          inputs=["n1_threshold"], output=decay)

    a1 = cmax(2 * log_ps, CertifiedReal.exact(A_FLOOR, prec))
    a2 = cmax(2 * log_height(rec.alpha, prec), abs(log_alpha), CertifiedReal.exact(A_FLOOR, prec))
    base = matveev_coefficient(3, 2, [a1, a2], prec)
    kappa = 1 + (1 + certified_log(c1p)) / log_n0
    L.add("matveev_base", "log|Lambda| > -base * A3 * (1 + log(c1' n1)), 1 + log(c1' n1) <= kappa log n1",
          MATVEEV, constants={"A1": a1, "A2": a2, "D": 2, "t": 3, "kappa": kappa},
          inputs=["delta_constants"], output=base)

    worst = None
    worst_name = None
    for r in range(1, t + 1):
        gaps_coeffs: list[CertifiedReal] = []
        prev = "matveev_base"
        for i in range(1, r + 1):
            grouped, rest = t - r + i, t - i
            num = grouped * abs_b + (s - 1) * K * sqrt_delta
            if i < r:
                num = num + rest * c0 * sqrt_delta
            err = num / abs_a
            height = (a_of_i(spec, [0] * (i - 1), prec) + 2 * certified_log(spec.coefficients[-1], prec)
                      + 2 * i * certified_log(t, prec))
            a3 = height / log_n0 ** (i - 1) if i > 1 else cmax(height, CertifiedReal.exact(A_FLOOR, prec))
            if gaps_coeffs:
                a3 = a3 + 2 * log_alpha * sum(gaps_coeffs[1:], gaps_coeffs[0])
            G = (_log_plus(err) / log_n0 + base * kappa * a3) / decay
            last = i == r
            name = f"groups{r}_final" if last else f"groups{r}_gap{i}"
            target = f"n1 < G (log n1)^{r}" if last else f"n1 - n_{i + 1} < G (log n1)^{i}"
            L.add(name, target, MATVEEV,
                  constants={"error_coefficient": err, "A3_coefficient": a3, "groups": r, "step": i},
                  inputs=[prev], output=G,
                  note="A3 from the height bound with the grouping allowance 2 i log t")
            prev = name
            gaps_coeffs.append(G)
        G_final = gaps_coeffs[-1]
        n_star = solve_fixed_point(G_final, r)
        z_bound = (_log_plus(t * c0) + n_star * log_alpha) / log_ps
        c_r = max(n0 + 1, n_star, z_bound.upper_ceil() + 1)
        L.add(f"groups{r}_constant", "max(n_i, z_j) < C", "effective constant",
              constants={"n1_bound": n_star, "zs_bound": z_bound}, inputs=[prev], output=c_r)
        if worst is None or c_r > worst:
            worst, worst_name = c_r, f"groups{r}_constant"
    names = [f"groups{r}_constant" for r in range(1, t + 1)]
    L.add("constant", "every T_eps solution has max(n_i, z_j) < C", "effective constant",
          constants={"from": worst_name}, inputs=names, output=worst)
    return worst, L


def theorem1_constant(spec: ProblemSpec, precision: Precision = DEFAULT_PRECISION) -> tuple[int, BoundLedger]:
    """Explicit ``C`` with ``max(n_1..n_t, z_1..z_s) < C`` on ``T_eps``, plus its ledger.

    Every way of grouping equal indices into ``r <= t`` distinct ones is
    covered by running the chain once per ``r`` and keeping the largest C.
    """
    return escalate(lambda prec: _chain(spec, prec), precision)
