"""Theorem-level pipelines: the general effective constant and the full Fibonacci solve."""

from expdioph.pipeline.fixed_point import solve_fixed_point
from expdioph.pipeline.ledger import BoundLedger, LedgerStep, agreement, encode
from expdioph.pipeline.theorem1 import DeltaConstants, delta_constants, group_indices, theorem1_constant
from expdioph.pipeline.theorem2 import SPEC as FIB23_SPEC
from expdioph.pipeline.theorem2 import Theorem2Result, theorem2_solve

__all__ = [
    "FIB23_SPEC",
    "BoundLedger",
    "DeltaConstants",
    "LedgerStep",
    "Theorem2Result",
    "agreement",
    "delta_constants",
    "encode",
    "group_indices",
    "solve_fixed_point",
    "theorem1_constant",
    "theorem2_solve",
]
