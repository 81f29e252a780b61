"""
Expression trees for constraint functions and their natural interval extension.
"""
from dataclasses import dataclass
from typing import Optional, Set, Union

from src.interval.box import Box
from src.interval.interval import ArithOp, Interval, UnaryOp, arith, unary


@dataclass(frozen=True)
class Constant:
    """A constant, stored as an enclosure of the literal it came from"""
    value: Interval

    @classmethod
    def of(cls, x: float) -> "Constant":
        return cls(Interval.point(x))


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Binary:
    op: ArithOp
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Unary:
    op: UnaryOp
    arg: "Expr"
    exponent: Optional[int] = None

    def __post_init__(self):
        if (self.op is UnaryOp.POW) != (self.exponent is not None):
            raise ValueError(f"Exponent is required for POW and only for POW (op={self.op})")


Expr = Union[Constant, Var, Binary, Unary]


def evaluate(expr: Expr, box: Box) -> Interval:
    """Enclosure of {expr(x) | x in box}; Empty when expr is undefined everywhere on box"""
    if isinstance(expr, Var):
        return box[expr.index]
    if isinstance(expr, Constant):
        return expr.value
    if isinstance(expr, Binary):
        left = evaluate(expr.left, box)
        if left.is_empty:
            return left
        right = evaluate(expr.right, box)
        if right.is_empty:
            return right
        return arith(expr.op, left, right)
    if isinstance(expr, Unary):
        arg = evaluate(expr.arg, box)
        if arg.is_empty:
            return arg
        return unary(expr.op, arg, expr.exponent)
    raise TypeError(f"Not an expression node: {expr!r}")


def variables(expr: Expr) -> Set[int]:
    """Indices of the variables occurring in expr"""
    if isinstance(expr, Var):
        return {expr.index}
    if isinstance(expr, Constant):
        return set()
    if isinstance(expr, Binary):
        return variables(expr.left) | variables(expr.right)
    return variables(expr.arg)


def is_constant(expr: Expr, value: Optional[float] = None) -> bool:
    """Whether expr is a point constant (equal to value when given)"""
    if not isinstance(expr, Constant) or not expr.value.is_degenerate:
        return False
    return value is None or expr.value.lo == value


# Builders used by the differentiator and the builtin problems

def add(a: Expr, b: Expr) -> Expr:
    if is_constant(a, 0.0):
        return b
    if is_constant(b, 0.0):
        return a
    return Binary(ArithOp.ADD, a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if is_constant(b, 0.0):
        return a
    if is_constant(a, 0.0):
        return neg(b)
    return Binary(ArithOp.SUB, a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if is_constant(a, 0.0) or is_constant(b, 0.0):
        return Constant.of(0.0)
    if is_constant(a, 1.0):
        return b
    if is_constant(b, 1.0):
        return a
    return Binary(ArithOp.MUL, a, b)


def div(a: Expr, b: Expr) -> Expr:
    if is_constant(a, 0.0):
        return Constant.of(0.0)
    if is_constant(b, 1.0):
        return a
    return Binary(ArithOp.DIV, a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Constant):
        return Constant(-a.value)
    if isinstance(a, Unary) and a.op is UnaryOp.NEG:
        return a.arg
    return Unary(UnaryOp.NEG, a)


def apply(op: UnaryOp, a: Expr, exponent: Optional[int] = None) -> Expr:
    if op is UnaryOp.NEG:
        return neg(a)
    return Unary(op, a, exponent)
