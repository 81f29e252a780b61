import os
import sys

import mpmath
import pytest

# Add project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.interval.interval import ArithOp, UnaryOp  # noqa: E402
from src.model.builtins import builtin  # noqa: E402
from src.model.expr import Binary, Constant, Var  # noqa: E402
from src.model.parser import parse  # noqa: E402


@pytest.fixture
def sphere_plane():
    return builtin("sphere-plane")


@pytest.fixture
def rpr_analog():
    return builtin("3rpr-analog")


@pytest.fixture
def circle():
    """Unit circle in a [-2, 2]^2 box; x is solved for, y is the parameter"""
    return parse("var x in [-2, 2]; var y in [-2, 2]; eq: x^2 + y^2 = 1;", title="circle")


@pytest.fixture
def half_line():
    return parse("var x in [1, 2]; ineq: x >= 0;", title="half-line")


@pytest.fixture
def annulus():
    """Ring 0.25 <= x^2 + y^2 <= 1, inequalities only"""
    return parse(
        """
        var x in [-1.5, 1.5];
        var y in [-1.5, 1.5];
        ineq: 1 - x^2 - y^2 >= 0;
        ineq: x^2 + y^2 - 0.25 >= 0;
        """,
        title="annulus",
    )


def _mp_value(expr, point):
    """Value of expr at point in 200-bit arithmetic; constants are read at their lower endpoint"""
    if isinstance(expr, Var):
        return mpmath.mpf(point[expr.index])
    if isinstance(expr, Constant):
        return mpmath.mpf(expr.value.lo)
    if isinstance(expr, Binary):
        left, right = _mp_value(expr.left, point), _mp_value(expr.right, point)
        return {
            ArithOp.ADD: lambda: left + right,
            ArithOp.SUB: lambda: left - right,
            ArithOp.MUL: lambda: left * right,
            ArithOp.DIV: lambda: left / right,
        }[expr.op]()
    arg = _mp_value(expr.arg, point)
    return {
        UnaryOp.NEG: lambda: -arg,
        UnaryOp.SQR: lambda: arg ** 2,
        UnaryOp.POW: lambda: arg ** expr.exponent,
        UnaryOp.SQRT: lambda: mpmath.sqrt(arg),
        UnaryOp.EXP: lambda: mpmath.exp(arg),
        UnaryOp.LOG: lambda: mpmath.log(arg),
        UnaryOp.SIN: lambda: mpmath.sin(arg),
        UnaryOp.COS: lambda: mpmath.cos(arg),
    }[expr.op]()


@pytest.fixture(scope="session")
def point_value():
    """High-precision point evaluation of an expression tree"""
    def value(expr, point):
        with mpmath.workprec(200):
            return _mp_value(expr, point)
    return value
