"""
Builtin benchmark problems.

Both are self-contained analogs of well-known under-constrained benchmarks,
written in the problem file format:

sphere-plane
    x1^2 + x2^2 + x3^2 + x4^2 = 1 and x1 + x2 + x3 + x4 = 0 on [-1, 1]^4.
    The solution set is a 2-sphere inside a hyperplane of R^4.

3rpr-analog
    Planar platform with pose (x, y, theta) hanging from three legs of
    lengths l1, l2, l3 in [0.3, 0.45]. Base anchors form the unit
    equilateral triangle (0, 0), (1, 0), (0.5, sqrt(3)/2); the platform
    attachment points sit at radius 0.2 around (x, y), at angles 210, 330
    and 90 degrees, each facing its anchor. Pose variables are projected,
    leg lengths are parameters.
"""
import logging
from typing import Dict, List

from src.model.parser import parse
from src.model.problem import NCSP

logger = logging.getLogger(__name__)


class UnknownProblemError(ValueError):
    """Raised for a builtin name that does not exist"""


SPHERE_PLANE = """
var x1 in [-1, 1];
var x2 in [-1, 1];
var x3 in [-1, 1];
var x4 in [-1, 1];
eq: x1^2 + x2^2 + x3^2 + x4^2 - 1 = 0;
eq: x1 + x2 + x3 + x4 = 0;
"""

# anchors (a_k, b_k) and attachment angles (210, 330, 90 degrees in radians)
THREE_RPR_ANALOG = """
var x in [0.3, 0.7];
var y in [0.1, 0.5];
var theta in [-0.5, 0.5];
var l1 in [0.3, 0.45];
var l2 in [0.3, 0.45];
var l3 in [0.3, 0.45];
eq: (x + 0.2 * cos(theta + 3.6651914291880923))^2
  + (y + 0.2 * sin(theta + 3.6651914291880923))^2 - l1^2 = 0;
eq: (x + 0.2 * cos(theta - 0.5235987755982988) - 1)^2
  + (y + 0.2 * sin(theta - 0.5235987755982988))^2 - l2^2 = 0;
eq: (x + 0.2 * cos(theta + 1.5707963267948966) - 0.5)^2
  + (y + 0.2 * sin(theta + 1.5707963267948966) - 0.8660254037844386)^2 - l3^2 = 0;
proj: x y theta;
"""

_SOURCES: Dict[str, str] = {
    "sphere-plane": SPHERE_PLANE,
    "3rpr-analog": THREE_RPR_ANALOG,
}


def list_builtins() -> List[str]:
    return sorted(_SOURCES)


def builtin_source(name: str) -> str:
    if name not in _SOURCES:
        raise UnknownProblemError(f"Unknown builtin problem {name!r}; choose from {', '.join(list_builtins())}")
    return _SOURCES[name]


def builtin(name: str) -> NCSP:
    """Parse the named builtin problem"""
    problem = parse(builtin_source(name), title=name)
    logger.debug(f"Loaded builtin {name}: {problem.summary()}")
    return problem
