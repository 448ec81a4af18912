"""Exact and certified arithmetic: interval reals, expressions, continued fractions."""

from expdioph.arith.cfrac import (
    ContinuedFraction,
    cfrac_expand,
    cfrac_prefix,
    convergent,
    expand_source,
)
from expdioph.arith.expr import Expr, evaluator, parse_expr
from expdioph.arith.real import (
    DEFAULT_PREC,
    DEFAULT_PRECISION,
    MAX_PREC,
    CertifiedReal,
    Precision,
    certified_exp,
    certified_log,
    certified_sqrt,
    escalate,
    nearest_int_distance,
)

__all__ = [
    "DEFAULT_PREC",
    "DEFAULT_PRECISION",
    "MAX_PREC",
    "CertifiedReal",
    "ContinuedFraction",
    "Expr",
    "Precision",
    "certified_exp",
    "certified_log",
    "certified_sqrt",
    "cfrac_expand",
    "cfrac_prefix",
    "convergent",
    "escalate",
    "evaluator",
    "expand_source",
    "nearest_int_distance",
    "parse_expr",
]
