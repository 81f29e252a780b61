"""
Interval Jacobians and the parametric Krawczyk inner test.

A box is inner when every inequality holds strictly on it and, for every
value of the parameter variables in the box, the equations have a unique
solution in the projection components. The Krawczyk operator is evaluated
with the parameters kept as intervals; a result strictly inside the
projection components proves both.
"""
import logging
from typing import List, Sequence

import numpy as np

from src.interval.box import Box
from src.interval.interval import ArithOp, Interval, UnaryOp
from src.model import expr as ex
from src.model.expr import Binary, Constant, Expr, Unary, Var, evaluate, variables
from src.model.problem import NCSP

logger = logging.getLogger(__name__)

_ZERO = Constant.of(0.0)
_ONE = Constant.of(1.0)
_TWO = Constant.of(2.0)


def differentiate(expr: Expr, index: int) -> Expr:
    """Symbolic partial derivative of expr with respect to variable index"""
    if index not in variables(expr):
        return _ZERO
    if isinstance(expr, Var):
        return _ONE

    if isinstance(expr, Binary):
        a, b = expr.left, expr.right
        da, db = differentiate(a, index), differentiate(b, index)
        if expr.op is ArithOp.ADD:
            return ex.add(da, db)
        if expr.op is ArithOp.SUB:
            return ex.sub(da, db)
        if expr.op is ArithOp.MUL:
            return ex.add(ex.mul(da, b), ex.mul(a, db))
        return ex.div(ex.sub(ex.mul(da, b), ex.mul(a, db)), Unary(UnaryOp.SQR, b))

    a = expr.arg
    da = differentiate(a, index)
    op = expr.op
    if op is UnaryOp.NEG:
        return ex.neg(da)
    if op is UnaryOp.SQR:
        return ex.mul(ex.mul(_TWO, a), da)
    if op is UnaryOp.POW:
        k = expr.exponent
        if k - 1 == 1:
            lowered = a
        elif k - 1 == 2:
            lowered = Unary(UnaryOp.SQR, a)
        else:
            lowered = Unary(UnaryOp.POW, a, k - 1)
        return ex.mul(ex.mul(Constant.of(float(k)), lowered), da)
    if op is UnaryOp.SQRT:
        return ex.div(da, ex.mul(_TWO, expr))
    if op is UnaryOp.EXP:
        return ex.mul(expr, da)
    if op is UnaryOp.LOG:
        return ex.div(da, a)
    if op is UnaryOp.SIN:
        return ex.mul(Unary(UnaryOp.COS, a), da)
    return ex.mul(ex.neg(Unary(UnaryOp.SIN, a)), da)


def derivative_table(problem: NCSP) -> List[List[Expr]]:
    """Symbolic e x n Jacobian of the equations, cached on the problem"""
    table = problem.memo.get("jacobian")
    if table is None:
        table = [[differentiate(eq.expr, j) for j in range(problem.n)] for eq in problem.equations]
        problem.memo["jacobian"] = table
        logger.debug(f"Derived {len(table)}x{problem.n} Jacobian for {problem.title or 'problem'}")
    return table


def jacobian(problem: NCSP, box: Box) -> List[List[Interval]]:
    """Interval enclosure of the equations' e x n Jacobian over box"""
    return [[evaluate(d, box) for d in row] for row in derivative_table(problem)]


def _midpoint_matrix(rows: Sequence[Sequence[Interval]]):
    values = []
    for row in rows:
        if any(entry.is_empty or not entry.is_bounded for entry in row):
            return None
        values.append([entry.midpoint() for entry in row])
    return np.array(values, dtype=float)


def _inequalities_hold(problem: NCSP, box: Box) -> bool:
    for constraint in problem.inequalities:
        value = evaluate(constraint.expr, box)
        if value.is_empty or not value.lo > 0:
            return False
    return True


def verify_inner(problem: NCSP, box: Box) -> bool:
    """Sound test that box is an inner box of problem; False means inconclusive"""
    if not box.is_bounded or box.is_empty:
        return False
    if not _inequalities_hold(problem, box):
        return False
    if problem.equation_count == 0:
        return True

    chosen = problem.projection
    full = jacobian(problem, box)
    block = [[row[j] for j in chosen] for row in full]
    center = _midpoint_matrix(block)
    if center is None:
        return False
    try:
        preconditioner = np.linalg.inv(center)
    except np.linalg.LinAlgError:
        return False
    if not np.all(np.isfinite(preconditioner)):
        return False

    x_mid = [box[j].midpoint() for j in chosen]
    at_mid = box
    for j, m in zip(chosen, x_mid):
        at_mid = at_mid.replace_component(j, Interval.point(m))
    residual = [evaluate(eq.expr, at_mid) for eq in problem.equations]
    if any(r.is_empty or not r.is_bounded for r in residual):
        return False

    e = len(chosen)
    offsets = [box[j] - Interval.point(m) for j, m in zip(chosen, x_mid)]
    for r in range(e):
        y_row = [Interval.point(float(preconditioner[r, k])) for k in range(e)]
        image = Interval.point(x_mid[r])
        for k in range(e):
            image = image - y_row[k] * residual[k]
        for j in range(e):
            coefficient = Interval.point(1.0 if r == j else 0.0)
            for k in range(e):
                coefficient = coefficient - y_row[k] * block[k][j]
            image = image + coefficient * offsets[j]
        if image.is_empty or not image.is_interior(box[chosen[r]]):
            return False
    return True
