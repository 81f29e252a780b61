"""
Hull-consistency contraction (HC4).

hc4_revise walks a constraint tree twice: the forward pass encloses every
node over the box, the backward pass intersects the root with the constraint's
relation and projects that value down through inverse operations onto the
variable domains. propagate repeats revise over all constraints until a full
round stops shrinking the box.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.interval.box import Box
from src.interval.interval import ENTIRE, NONNEGATIVE, ZERO, ArithOp, Interval, UnaryOp, arith, unary
from src.model.expr import Binary, Constant, Expr, Var
from src.model.problem import NCSP, Constraint, Relation

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-3
DEFAULT_MAX_ROUNDS = 50


@dataclass
class _Node:
    """Expression node annotated with its forward enclosure"""
    expr: Expr
    value: Interval
    children: Tuple["_Node", ...] = ()


def _forward(expr: Expr, domains: List[Interval]) -> Optional[_Node]:
    if isinstance(expr, Var):
        return _Node(expr, domains[expr.index])
    if isinstance(expr, Constant):
        return _Node(expr, expr.value)
    if isinstance(expr, Binary):
        left = _forward(expr.left, domains)
        if left is None:
            return None
        right = _forward(expr.right, domains)
        if right is None:
            return None
        value = arith(expr.op, left.value, right.value)
        return None if value.is_empty else _Node(expr, value, (left, right))
    child = _forward(expr.arg, domains)
    if child is None:
        return None
    value = unary(expr.op, child.value, expr.exponent)
    return None if value.is_empty else _Node(expr, value, (child,))


def _signed_root(value: Interval, k: int, domain: Interval) -> Interval:
    """Real solutions of t^k in value that lie in domain, for k >= 1"""
    positive = value.root(k)
    negative = -positive if k % 2 == 0 else -((-value).root(k))
    # clip each branch before the hull
    return positive.intersect(domain).hull(negative.intersect(domain))


def _unary_projection(op: UnaryOp, value: Interval, exponent: Optional[int], domain: Interval) -> Interval:
    """Enclosure of the argument values in domain whose image lies in value"""
    if op is UnaryOp.SQR:
        return _signed_root(value, 2, domain)
    if op is UnaryOp.POW and exponent is not None and exponent >= 1:
        return _signed_root(value, exponent, domain)
    return domain.intersect(_inverse_image(op, value))


def _inverse_image(op: UnaryOp, value: Interval) -> Interval:
    if op is UnaryOp.NEG:
        return -value
    if op is UnaryOp.SQRT:
        return value.intersect(NONNEGATIVE).sqr()
    if op is UnaryOp.EXP:
        return value.log()
    if op is UnaryOp.LOG:
        return value.exp()
    # sin and cos are not inverted
    return ENTIRE


def _quotient(z: Interval, y: Interval) -> Interval:
    """Enclosure of the x with x * y in z for some y in y"""
    if z.contains(0.0) and y.contains(0.0):
        return ENTIRE
    return z / y


def _backward(node: _Node, target: Interval, domains: List[Interval]) -> bool:
    value = node.value.intersect(target)
    if value.is_empty:
        return False
    expr = node.expr

    if isinstance(expr, Var):
        narrowed = domains[expr.index].intersect(value)
        if narrowed.is_empty:
            return False
        domains[expr.index] = narrowed
        return True

    if isinstance(expr, Constant):
        return True

    if isinstance(expr, Binary):
        left, right = node.children
        x, y = left.value, right.value
        if expr.op is ArithOp.ADD:
            x_new = x.intersect(value - y)
            y_new = y.intersect(value - x_new)
        elif expr.op is ArithOp.SUB:
            x_new = x.intersect(value + y)
            y_new = y.intersect(x_new - value)
        elif expr.op is ArithOp.MUL:
            x_new = x.intersect(_quotient(value, y))
            y_new = y.intersect(_quotient(value, x_new)) if not x_new.is_empty else x_new
        else:
            x_new = x.intersect(value * y)
            y_new = y.intersect(_quotient(x_new, value)) if not x_new.is_empty else x_new
        if x_new.is_empty or y_new.is_empty:
            return False
        return _backward(left, x_new, domains) and _backward(right, y_new, domains)

    (child,) = node.children
    projected = _unary_projection(expr.op, value, expr.exponent, child.value)
    if projected.is_empty:
        return False
    return _backward(child, projected, domains)


def _relation_target(relation: Relation) -> Interval:
    return ZERO if relation is Relation.EQ_ZERO else NONNEGATIVE


def hc4_revise(constraint: Constraint, box: Box) -> Optional[Box]:
    """Narrow box with respect to one constraint; None when it holds nowhere in box"""
    domains = list(box.components)
    root = _forward(constraint.expr, domains)
    if root is None:
        return None
    if not _backward(root, _relation_target(constraint.relation), domains):
        return None
    return box.with_components(domains)


def _shrunk(old: Interval, new: Interval, rtol: float) -> bool:
    old_width = old.width()
    if old_width == float("inf"):
        return new != old
    return old_width - new.width() > rtol * old_width


def propagate(problem: NCSP, box: Box, rtol: float = DEFAULT_RTOL,
              max_rounds: int = DEFAULT_MAX_ROUNDS) -> Optional[Box]:
    """Apply hc4_revise over all constraints until a round shrinks no component by more than rtol"""
    current = box
    for _ in range(max_rounds):
        start = current
        for constraint in problem.constraints:
            revised = hc4_revise(constraint, current)
            if revised is None:
                return None
            current = revised
        if not any(_shrunk(a, b, rtol) for a, b in zip(start.components, current.components)):
            break
    return current
