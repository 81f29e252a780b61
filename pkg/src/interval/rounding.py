"""
Directed rounding on top of round-to-nearest floats.

Each helper returns a float that bounds the exact real result from one side.
Sums and products use error-free transformations so exact results stay
exact; anything that cannot be checked falls back to a one-ULP step outward.
"""
import math
import sys
from typing import Optional, Tuple

INF = math.inf
_MAX = sys.float_info.max

# Veltkamp splitter for binary64
_SPLITTER = 134217729.0
# Beyond these magnitudes the splitting overflows or the error term underflows
_SPLIT_LIMIT = 1e300
_TINY_LIMIT = 1e-290


def down(x: float) -> float:
    """One ULP toward -inf (infinities unchanged)"""
    if math.isinf(x):
        return x
    return math.nextafter(x, -INF)


def up(x: float) -> float:
    """One ULP toward +inf (infinities unchanged)"""
    if math.isinf(x):
        return x
    return math.nextafter(x, INF)


def two_sum(a: float, b: float) -> Tuple[float, float]:
    """s, err with s + err == a + b exactly (finite, non-overflowing inputs)"""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a: float) -> Tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_product(a: float, b: float) -> Optional[Tuple[float, float]]:
    """p, err with p + err == a * b exactly, or None when the check is unsafe"""
    p = a * b
    if not math.isfinite(p):
        return None
    if abs(a) > _SPLIT_LIMIT or abs(b) > _SPLIT_LIMIT:
        return None
    if p == 0.0:
        return (p, 0.0) if a == 0.0 or b == 0.0 else None
    if abs(p) < _TINY_LIMIT:
        return None
    a_hi, a_lo = _split(a)
    b_hi, b_lo = _split(b)
    err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, err


def add_down(a: float, b: float) -> float:
    s = a + b
    if math.isinf(a) or math.isinf(b):
        return -INF if math.isnan(s) else s
    if s == INF:
        # finite operands overflowed, the exact sum is finite
        return _MAX
    if s == -INF:
        return s
    s, err = two_sum(a, b)
    return s if err >= 0 else down(s)


def add_up(a: float, b: float) -> float:
    s = a + b
    if math.isinf(a) or math.isinf(b):
        return INF if math.isnan(s) else s
    if s == -INF:
        return -_MAX
    if s == INF:
        return s
    s, err = two_sum(a, b)
    return s if err <= 0 else up(s)


def sub_down(a: float, b: float) -> float:
    return add_down(a, -b)


def sub_up(a: float, b: float) -> float:
    return add_up(a, -b)


def _mul_special(a: float, b: float) -> Optional[float]:
    # 0 * inf is taken as 0 for interval endpoints
    if a == 0.0 or b == 0.0:
        return 0.0
    if math.isinf(a) or math.isinf(b):
        return a * b
    return None


def mul_down(a: float, b: float) -> float:
    special = _mul_special(a, b)
    if special is not None:
        return special
    p = a * b
    if math.isinf(p):
        return p if p < 0 else math.nextafter(p, -INF)
    exact = two_product(a, b)
    if exact is None:
        return down(p)
    p, err = exact
    return p if err >= 0 else down(p)


def mul_up(a: float, b: float) -> float:
    special = _mul_special(a, b)
    if special is not None:
        return special
    p = a * b
    if math.isinf(p):
        return p if p > 0 else math.nextafter(p, INF)
    exact = two_product(a, b)
    if exact is None:
        return up(p)
    p, err = exact
    return p if err <= 0 else up(p)


def _div_residual_sign(a: float, b: float, q: float) -> Optional[int]:
    """Sign of a/b - q, or None when it cannot be established exactly"""
    exact = two_product(q, b)
    if exact is None:
        return None
    p, err = exact
    residual = (a - p) - err
    if residual == 0.0:
        return 0
    sign = 1 if residual > 0 else -1
    return sign if b > 0 else -sign


def div_down(a: float, b: float) -> float:
    """Lower bound of a / b for b != 0"""
    if math.isinf(a) and math.isinf(b):
        return -INF
    q = a / b
    if math.isinf(a) or math.isinf(b):
        return q
    if math.isinf(q):
        return q if q < 0 else math.nextafter(q, -INF)
    if q == 0.0 and a != 0.0:
        return down(q)
    sign = _div_residual_sign(a, b, q)
    if sign is None:
        return down(q)
    return q if sign >= 0 else down(q)


def div_up(a: float, b: float) -> float:
    """Upper bound of a / b for b != 0"""
    if math.isinf(a) and math.isinf(b):
        return INF
    q = a / b
    if math.isinf(a) or math.isinf(b):
        return q
    if math.isinf(q):
        return q if q > 0 else math.nextafter(q, INF)
    if q == 0.0 and a != 0.0:
        return up(q)
    sign = _div_residual_sign(a, b, q)
    if sign is None:
        return up(q)
    return q if sign <= 0 else up(q)


def sqrt_down(x: float) -> float:
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return x
    s = math.sqrt(x)
    exact = two_product(s, s)
    if exact is not None and exact == (x, 0.0):
        return s
    return max(0.0, down(s))


def sqrt_up(x: float) -> float:
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return x
    s = math.sqrt(x)
    exact = two_product(s, s)
    if exact is not None and exact == (x, 0.0):
        return s
    return up(s)
