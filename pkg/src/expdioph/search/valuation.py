"""The valuation scan: max of ``nu_p(U_n1 + U_n2 - base^z1)`` over a box.

The heavy loop runs in a compiled kernel when available.  Set
``EXPDIOPH_PURE_PYTHON=1`` to force the pure-Python kernel.
"""

from __future__ import annotations

import os
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from expdioph.arith.real import DEFAULT_PRECISION, Precision, certified_log, escalate
from expdioph.recurrence import FIBONACCI, BinaryRecurrence
from expdioph.search import _scan_py
from expdioph.search.box import padic_valuation

try:
    from expdioph.search import _scan as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

KERNELS = {"python": _scan_py}
if _compiled is not None:
    KERNELS["cython"] = _compiled

if os.environ.get("EXPDIOPH_PURE_PYTHON") == "1" or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_ZERO_CAP = 4096


def residue_exponent(p: int) -> int:
    """Largest ``K`` with ``p^K < 2^63``, so two residues sum inside a uint64."""
    K = 0
    while p ** (K + 1) < 2**63:
        K += 1
    return K


@dataclass
class ScanResult:
    max_valuation: int | None
    witness: tuple[int, int, int] | None  # (n1, n2, z1) attaining the max
    cells: int
    exact_zeros: list = field(default_factory=list)  # (n1, n2, z1) with zero difference
    high_residues: int = 0  # cells whose residue vanished mod p^K
    backend: str = BACKEND


def _strata(n1_range: Iterable[int], gap_max: int, z1_max: int, z1_cap) -> list[tuple[int, int, int]]:
    out = []
    for n1 in n1_range:
        top = z1_max if z1_cap is None else min(z1_max, z1_cap(n1))
        if top >= 0:
            out.append((n1, max(0, n1 - gap_max), top))
    return out


def scan_details(
    n1_range: Iterable[int],
    gap_max: int,
    z1_max: int,
    p: int = 3,
    rec: BinaryRecurrence = FIBONACCI,
    base: int = 2,
    threads: int | None = None,
    backend: str | None = None,
    z1_cap: Callable[[int], int] | None = None,
) -> ScanResult:
    """Scan ``n1`` in ``n1_range``, ``max(0, n1-gap_max) <= n2 <= n1`` and
    ``0 <= z1 <= z1_max``, skipping exactly-zero differences.

    ``z1_cap(n1)``, if given, further limits ``z1`` within each stratum.
    """
    kernel = KERNELS[backend or BACKEND]
    strata = _strata(n1_range, gap_max, z1_max, z1_cap) if gap_max >= 0 else []
    if not strata:
        return ScanResult(None, None, 0, backend=backend or BACKEND)
    n_top = max(n1 for n1, _, _ in strata)
    K = residue_exponent(p)
    modulus = p**K
    f_res = array("Q", rec.terms_mod(modulus, n_top))
    pow_res = array("Q", [pow(base, z, modulus) for z in range(z1_max + 1)])
    terms = rec.terms(n_top)

    def run(stratum):
        n1, n2_lo, z_top = stratum
        buf = array("i", bytes(8 * _ZERO_CAP))
        best_v, best_n2, best_z1, n_zero = kernel.scan_stratum(f_res, pow_res, n1, n2_lo, z_top, modulus, p, buf)
        if n_zero > _ZERO_CAP:
            pairs = [(n2, z1) for n2 in range(n2_lo, n1 + 1) for z1 in range(z_top + 1)
                     if (terms[n1] + terms[n2] - base**z1) % modulus == 0]
        else:
            pairs = [(buf[2 * i], buf[2 * i + 1]) for i in range(n_zero)]
        zeros = []
        # exact recheck of cells whose residue vanished
        for n2, z1 in pairs:
            x = terms[n1] + terms[n2] - base**z1
            if x == 0:
                zeros.append((n1, n2, z1))
                continue
            v = padic_valuation(x, p)
            if v > best_v or (v == best_v and (n2, z1) < (best_n2, best_z1)):
                best_v, best_n2, best_z1 = v, n2, z1
        cells = (n1 - n2_lo + 1) * (z_top + 1)
        return n1, best_v, best_n2, best_z1, zeros, len(pairs), cells

    workers = threads or os.cpu_count() or 1
    if workers > 1 and len(strata) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, strata))
    else:
        parts = [run(s) for s in strata]

    result = ScanResult(None, None, 0, backend=backend or BACKEND)
    for n1, v, n2, z1, zeros, high, cells in sorted(parts):
        result.cells += cells
        result.high_residues += high
        result.exact_zeros.extend(zeros)
        if v >= 0 and (result.max_valuation is None or v > result.max_valuation):
            result.max_valuation = v
            result.witness = (n1, n2, z1)
    return result


def valuation_scan(n1_range: Iterable[int], gap_max: int, z1_max: int, p: int = 3, **kwargs) -> int | None:
    """Max valuation over the box (None when every cell is an exact zero)."""
    return scan_details(n1_range, gap_max, z1_max, p, **kwargs).max_valuation


def valuation_scan_exact(
    n1_range: Iterable[int], gap_max: int, z1_max: int, p: int = 3,
    rec: BinaryRecurrence = FIBONACCI, base: int = 2, z1_cap: Callable[[int], int] | None = None,
) -> int | None:
    """Big-integer reference implementation of :func:`valuation_scan`."""
    best = None
    for n1, n2_lo, z_top in _strata(n1_range, gap_max, z1_max, z1_cap):
        for n2 in range(n2_lo, n1 + 1):
            s = rec.term(n1) + rec.term(n2)
            for z1 in range(z_top + 1):
                x = s - base**z1
                if x:
                    v = padic_valuation(x, p)
                    if best is None or v > best:
                        best = v
    return best


def valuation_to_index_bound(
    z2_max: int, rec: BinaryRecurrence = FIBONACCI, p: int = 3, precision: Precision = DEFAULT_PRECISION
) -> int:
    """Least ``n*`` with ``alpha^(n*-2) > 2 p^z2_max``, so that
    ``alpha^(n1-2) <= 2 p^z2`` forces ``n1 <= n*``."""
    if z2_max < 0:
        raise ValueError("z2_max must be non-negative")

    def attempt(prec: int) -> int:
        log_alpha = certified_log(abs(rec.alpha.to_real(prec)))
        return 2 + (certified_log(2 * p**z2_max, prec) / log_alpha).upper_ceil()

    return escalate(attempt, precision)
