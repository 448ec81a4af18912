"""Real-number expressions that can be re-evaluated at any precision.

The precision-escalation loop needs a *recipe* for each constant rather than
a single interval, so constants such as ``log(3)/log((1+sqrt(5))/2)`` are
held as small expression trees.  The text form accepts integers, decimal
literals (read exactly), ``+ - * / ^ **``, parentheses and the functions
``log``, ``sqrt`` and ``exp``.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Callable, Union

from expdioph.arith.real import (
    CertifiedReal,
    certified_exp,
    certified_log,
    certified_sqrt,
)
from expdioph.errors import DomainError

_BINARY = {"add", "sub", "mul", "div"}
_UNARY = {"neg", "log", "sqrt", "exp"}
_PRINT_PRIORITY = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


class Expr:
    """Immutable expression node; ``eval(prec)`` returns a :class:`CertifiedReal`."""

    __slots__ = ("op", "args", "_cache", "_hash")

    def __init__(self, op: str, *args):
        self.op = op
        self.args = args
        self._cache: dict[int, CertifiedReal] = {}
        self._hash = hash((op, args))

    # structural identity, so equal recipes share cache entries in dicts
    def __eq__(self, other):
        return isinstance(other, Expr) and self.op == other.op and self.args == other.args

    def __hash__(self):
        return self._hash

    def __getstate__(self):
        return (self.op, self.args)

    def __setstate__(self, state):
        op, args = state
        self.op = op
        self.args = args
        self._cache = {}
        self._hash = hash((op, args))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(value) -> "Expr":
        return Expr("const", Fraction(value))

    @staticmethod
    def lift(value) -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, (int, Fraction)):
            return Expr.const(value)
        raise TypeError(f"cannot build an expression from {type(value).__name__}")

    def _bin(self, op, other, swap=False):
        try:
            other = Expr.lift(other)
        except TypeError:
            return NotImplemented
        a, b = (other, self) if swap else (self, other)
        if a.op == "const" and b.op == "const":
            x, y = a.args[0], b.args[0]
            if op == "div" and y == 0:
                raise DomainError("division by zero in constant expression")
            return Expr.const({"add": x + y, "sub": x - y, "mul": x * y, "div": x / y if y else 0}[op])
        return Expr(op, a, b)

    def __add__(self, o):
        return self._bin("add", o)

    def __radd__(self, o):
        return self._bin("add", o, swap=True)

    def __sub__(self, o):
        return self._bin("sub", o)

    def __rsub__(self, o):
        return self._bin("sub", o, swap=True)

    def __mul__(self, o):
        return self._bin("mul", o)

    def __rmul__(self, o):
        return self._bin("mul", o, swap=True)

    def __truediv__(self, o):
        return self._bin("div", o)

    def __rtruediv__(self, o):
        return self._bin("div", o, swap=True)

    def __neg__(self):
        if self.op == "const":
            return Expr.const(-self.args[0])
        return Expr("neg", self)

    def __pow__(self, n):
        if isinstance(n, int):
            if self.op == "const" and (n >= 0 or self.args[0] != 0):
                return Expr.const(self.args[0] ** n)
            return Expr("pow", self, n)
        # real exponent: x**y == exp(y*log(x)) for x > 0
        return (Expr.lift(n) * self.log()).exp()

    def log(self) -> "Expr":
        return Expr("log", self)

    def sqrt(self) -> "Expr":
        return Expr("sqrt", self)

    def exp(self) -> "Expr":
        return Expr("exp", self)

    # -- evaluation -----------------------------------------------------

    def eval(self, prec: int) -> CertifiedReal:
        hit = self._cache.get(prec)
        if hit is not None:
            return hit
        value = self._eval(prec).with_prec(prec)
        # keep enclosures nested: finer precision never widens the interval
        for p, cached in list(self._cache.items()):
            if p < prec:
                value = value.intersect(cached)
        for p, cached in list(self._cache.items()):
            if p > prec:
                value = value.hull(cached)
        value = value.with_prec(prec)
        self._cache[prec] = value
        return value

    def __call__(self, prec: int) -> CertifiedReal:
        return self.eval(prec)

    def _eval(self, prec: int) -> CertifiedReal:
        op, args = self.op, self.args
        if op == "const":
            return CertifiedReal.exact(args[0], prec)
        if op in _BINARY:
            a, b = args[0].eval(prec), args[1].eval(prec)
            if op == "add":
                return a + b
            if op == "sub":
                return a - b
            if op == "mul":
                return a * b
            return a / b
        if op == "pow":
            return args[0].eval(prec) ** args[1]
        a = args[0].eval(prec)
        if op == "neg":
            return -a
        if op == "log":
            return certified_log(a, prec)
        if op == "sqrt":
            return certified_sqrt(a, prec)
        if op == "exp":
            return certified_exp(a, prec)
        raise AssertionError(op)

    # -- text -----------------------------------------------------------

    def __str__(self) -> str:
        op, args = self.op, self.args
        if op == "const":
            v = args[0]
            return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
        if op in ("log", "sqrt", "exp"):
            return f"{op}({args[0]})"
        if op == "neg":
            return f"-{_wrap(args[0], 3)}"
        if op == "pow":
            return f"{_wrap(args[0], 5)}^{args[1]}"
        sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[op]
        pr = _PRINT_PRIORITY[op]
        left = _wrap(args[0], pr)
        right = _wrap(args[1], pr + 1)
        return f"{left}{sym}{right}"

    def __repr__(self) -> str:
        return f"Expr({str(self)!r})"


def _wrap(e: Expr, priority: int) -> str:
    s = str(e)
    if e.op in _PRINT_PRIORITY and _PRINT_PRIORITY[e.op] < priority:
        return f"({s})"
    if e.op == "const" and e.args[0] < 0 and priority > 1:
        return f"({s})"
    return s


_FUNCS = {"log": Expr.log, "sqrt": Expr.sqrt, "exp": Expr.exp}


def parse_expr(text: str) -> Expr:
    """Parse the mini-grammar into an :class:`Expr`.

    >>> str(parse_expr("log(3)/log((1+sqrt(5))/2)"))
    'log(3)/log((1+sqrt(5))/2)'
    """
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}: {exc.msg}") from None

    def build(node) -> Expr:
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            literal = ast.get_source_segment(source, node) or repr(node.value)
            return Expr.const(Fraction(literal))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = build(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            left, right = build(node.left), build(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
            if isinstance(node.op, ast.Pow):
                if right.op == "const" and right.args[0].denominator == 1:
                    return left ** int(right.args[0])
                return left ** right
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _FUNCS[node.func.id](build(node.args[0]))
        raise ValueError(f"unsupported syntax in expression {text!r}: {ast.dump(node)[:60]}")

    return build(tree.body)


RealSource = Union[Expr, CertifiedReal, Callable[[int], CertifiedReal], int, Fraction, str]


def evaluator(x: RealSource) -> Callable[[int], CertifiedReal]:
    """Normalise a real-valued input into a ``prec -> CertifiedReal`` callable.

    A bare :class:`CertifiedReal` cannot be refined, so escalation past its
    own precision will not narrow it.
    """
    if isinstance(x, str):
        return parse_expr(x).eval
    if isinstance(x, Expr):
        return x.eval
    if isinstance(x, CertifiedReal):
        return lambda prec: x
    if isinstance(x, (int, Fraction)):
        return Expr.const(x).eval
    if callable(x):
        return x
    raise TypeError(f"not a real-number source: {type(x).__name__}")


# frequently used recipes
SQRT5 = Expr.const(5).sqrt()
GOLDEN = (1 + SQRT5) / 2
LOG2 = Expr.const(2).log()
LOG3 = Expr.const(3).log()
LOG_GOLDEN = GOLDEN.log()
