"""Box enumeration, p-adic valuations and the valuation scan."""

from expdioph.search.box import SolutionTuple, enumerate_box, padic_valuation, power_sum_table
from expdioph.search.valuation import (
    BACKEND,
    KERNELS,
    ScanResult,
    scan_details,
    valuation_scan,
    valuation_scan_exact,
    valuation_to_index_bound,
)

__all__ = [
    "BACKEND",
    "KERNELS",
    "ScanResult",
    "SolutionTuple",
    "enumerate_box",
    "padic_valuation",
    "power_sum_table",
    "scan_details",
    "valuation_scan",
    "valuation_scan_exact",
    "valuation_to_index_bound",
]
