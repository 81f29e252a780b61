"""
Closed real intervals with outward rounding.

Every operation returns an enclosure of the exact image of its operands.
The designated empty interval absorbs everything it touches.
"""
import math
import sys
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from src.interval import rounding
from src.interval.rounding import INF

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi
_MAX = sys.float_info.max


class ArithOp(Enum):
    """Binary interval operations"""
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"


class UnaryOp(Enum):
    """Unary interval operations"""
    NEG = "neg"
    SQR = "sqr"
    SQRT = "sqrt"
    POW = "pow"
    EXP = "exp"
    LOG = "log"
    SIN = "sin"
    COS = "cos"


def _format_endpoint(x: float) -> Union[float, str]:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _parse_endpoint(value: Union[float, int, str]) -> float:
    # "inf" and "-inf" parse directly
    return float(value)


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi]; lo may be -inf and hi may be +inf"""
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError(f"Interval endpoints must not be NaN: [{lo}, {hi}]")
        if lo == INF and hi == -INF:
            return  # the empty interval
        if lo > hi:
            raise ValueError(f"Malformed interval: [{lo}, {hi}]")
        if lo == INF or hi == -INF:
            raise ValueError(f"Interval cannot be a single infinite point: [{lo}, {hi}]")

    # Construction

    @classmethod
    def empty(cls) -> "Interval":
        return EMPTY

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def entire(cls) -> "Interval":
        return ENTIRE

    @classmethod
    def from_decimal(cls, text: str) -> "Interval":
        """Tightest float enclosure of a decimal literal (a point when exact)"""
        exact = Fraction(text)
        try:
            nearest = float(exact)
        except OverflowError:
            if exact > 0:
                return cls(_MAX, INF)
            return cls(-INF, -_MAX)
        approx = Fraction(nearest)
        if approx == exact:
            return cls(nearest, nearest)
        if approx < exact:
            return cls(nearest, rounding.up(nearest))
        return cls(rounding.down(nearest), nearest)

    @classmethod
    def from_pair(cls, pair: Sequence[Union[float, int, str]]) -> "Interval":
        lo, hi = pair
        return cls(_parse_endpoint(lo), _parse_endpoint(hi))

    def to_pair(self) -> List[Union[float, str]]:
        return [_format_endpoint(self.lo), _format_endpoint(self.hi)]

    # Predicates

    @property
    def is_empty(self) -> bool:
        return self.lo == INF and self.hi == -INF

    @property
    def is_bounded(self) -> bool:
        return not self.is_empty and math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def is_degenerate(self) -> bool:
        return not self.is_empty and self.lo == self.hi

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def is_subset(self, other: "Interval") -> bool:
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return other.lo <= self.lo and self.hi <= other.hi

    def is_interior(self, other: "Interval") -> bool:
        """True when self lies strictly inside other"""
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return other.lo < self.lo and self.hi < other.hi

    # Measures

    def width(self) -> float:
        if self.is_empty:
            return 0.0
        if not self.is_bounded:
            return INF
        return rounding.sub_up(self.hi, self.lo)

    def midpoint(self) -> float:
        """Rounded center, always inside the interval"""
        if self.is_empty:
            raise ValueError("Midpoint of an empty interval")
        lo, hi = self.lo, self.hi
        if lo == -INF and hi == INF:
            return 0.0
        if lo == -INF:
            return hi
        if hi == INF:
            return lo
        mid = 0.5 * lo + 0.5 * hi
        if not math.isfinite(mid):
            mid = lo / 2.0 + hi / 2.0
        return min(max(mid, lo), hi)

    # Set operations (exact)

    def intersect(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return EMPTY
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return EMPTY
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    # Arithmetic

    def __neg__(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        return Interval(-self.hi, -self.lo)

    def __add__(self, other: "Interval") -> "Interval":
        other = _coerce(other)
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval(rounding.add_down(self.lo, other.lo), rounding.add_up(self.hi, other.hi))

    def __sub__(self, other: "Interval") -> "Interval":
        other = _coerce(other)
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval(rounding.sub_down(self.lo, other.hi), rounding.sub_up(self.hi, other.lo))

    def __mul__(self, other: "Interval") -> "Interval":
        other = _coerce(other)
        if self.is_empty or other.is_empty:
            return EMPTY
        pairs = ((self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi))
        lo = min(rounding.mul_down(a, b) for a, b in pairs)
        hi = max(rounding.mul_up(a, b) for a, b in pairs)
        return Interval(lo, hi)

    def __truediv__(self, other: "Interval") -> "Interval":
        other = _coerce(other)
        if self.is_empty or other.is_empty:
            return EMPTY
        if other.lo > 0 or other.hi < 0:
            pairs = ((self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi))
            lo = min(rounding.div_down(a, b) for a, b in pairs)
            hi = max(rounding.div_up(a, b) for a, b in pairs)
            return Interval(lo, hi)
        return self._extended_div(other)

    def _extended_div(self, other: "Interval") -> "Interval":
        """Hull of the quotient set when 0 lies in the divisor"""
        if other.lo == 0 and other.hi == 0:
            return EMPTY
        if self.lo <= 0 <= self.hi:
            return ENTIRE
        if other.lo < 0 < other.hi:
            return ENTIRE
        if other.lo == 0:
            # divisor [0, d] with d > 0
            if self.lo > 0:
                return Interval(rounding.div_down(self.lo, other.hi), INF)
            return Interval(-INF, rounding.div_up(self.hi, other.hi))
        # divisor [c, 0] with c < 0
        if self.lo > 0:
            return Interval(-INF, rounding.div_up(self.lo, other.lo))
        return Interval(rounding.div_down(self.hi, other.lo), INF)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other) -> "Interval":
        return _coerce(other) - self

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other) / self

    # Elementary functions

    def sqr(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        lo, hi = self.lo, self.hi
        if lo >= 0:
            return Interval(rounding.mul_down(lo, lo), rounding.mul_up(hi, hi))
        if hi <= 0:
            return Interval(rounding.mul_down(hi, hi), rounding.mul_up(lo, lo))
        m = max(-lo, hi)
        return Interval(0.0, rounding.mul_up(m, m))

    def pow(self, k: int) -> "Interval":
        """Integer power"""
        if self.is_empty:
            return EMPTY
        if k == 0:
            return Interval(1.0, 1.0)
        if k == 1:
            return self
        if k == 2:
            return self.sqr()
        if k < 0:
            return Interval(1.0, 1.0) / self.pow(-k)
        lo, hi = self.lo, self.hi
        if lo >= 0:
            return Interval(_pow_down(lo, k), _pow_up(hi, k))
        if hi <= 0:
            if k % 2 == 0:
                return Interval(_pow_down(-hi, k), _pow_up(-lo, k))
            return Interval(-_pow_up(-lo, k), -_pow_down(-hi, k))
        if k % 2 == 0:
            return Interval(0.0, _pow_up(max(-lo, hi), k))
        return Interval(-_pow_up(-lo, k), _pow_up(hi, k))

    def root(self, k: int) -> "Interval":
        """Nonnegative k-th root of the nonnegative part, k >= 1"""
        part = self.intersect(Interval(0.0, INF))
        if part.is_empty:
            return EMPTY
        if k == 1:
            return part
        if k == 2:
            return part.sqrt()
        return Interval(_root_down(part.lo, k), _root_up(part.hi, k))

    def sqrt(self) -> "Interval":
        part = self.intersect(Interval(0.0, INF))
        if part.is_empty:
            return EMPTY
        return Interval(rounding.sqrt_down(part.lo), rounding.sqrt_up(part.hi))

    def exp(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        lo = _exp(self.lo)
        lo = _MAX if lo == INF else max(0.0, rounding.down(lo))
        return Interval(lo, rounding.up(_exp(self.hi)))

    def log(self) -> "Interval":
        part = self.intersect(Interval(0.0, INF))
        if part.is_empty or part.hi == 0.0:
            return EMPTY
        lo = -INF if part.lo == 0.0 else rounding.down(math.log(part.lo))
        hi = INF if part.hi == INF else rounding.up(math.log(part.hi))
        return Interval(lo, hi)

    def sin(self) -> "Interval":
        return _periodic(self, math.sin, HALF_PI, -HALF_PI)

    def cos(self) -> "Interval":
        return _periodic(self, math.cos, 0.0, math.pi)

    def __repr__(self) -> str:
        if self.is_empty:
            return "Interval(empty)"
        return f"Interval({self.lo!r}, {self.hi!r})"


def _coerce(value) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.point(float(value))


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return INF


def _pow_down(x: float, k: int) -> float:
    """Lower bound of x**k for x >= 0"""
    result = 1.0
    for _ in range(k):
        result = rounding.mul_down(result, x)
    return result


def _pow_up(x: float, k: int) -> float:
    """Upper bound of x**k for x >= 0"""
    result = 1.0
    for _ in range(k):
        result = rounding.mul_up(result, x)
    return result


_ROOT_STEPS = 16


def _root_down(z: float, k: int) -> float:
    if z <= 0.0:
        return 0.0
    if z == INF:
        return _MAX
    r = z ** (1.0 / k)
    for _ in range(_ROOT_STEPS):
        if _pow_up(r, k) <= z:
            return r
        r = rounding.down(r)
    return 0.0


def _root_up(z: float, k: int) -> float:
    if z <= 0.0:
        return 0.0
    if z == INF:
        return INF
    r = z ** (1.0 / k)
    for _ in range(_ROOT_STEPS):
        if _pow_down(r, k) >= z:
            return r
        r = rounding.up(r)
    return INF


def _hits_phase(lo: float, hi: float, phase: float) -> bool:
    """Whether some phase + 2*pi*k lies in [lo, hi], erring toward yes"""
    tol = 1e-9 * (1.0 + abs(lo) + abs(hi))
    k = math.ceil((lo - tol - phase) / TWO_PI)
    return phase + TWO_PI * k <= hi + tol


def _periodic(x: Interval, fn, max_phase: float, min_phase: float) -> Interval:
    if x.is_empty:
        return EMPTY
    if not x.is_bounded or x.hi - x.lo >= TWO_PI:
        return Interval(-1.0, 1.0)
    a, b = fn(x.lo), fn(x.hi)
    lo = max(-1.0, rounding.down(min(a, b)))
    hi = min(1.0, rounding.up(max(a, b)))
    if _hits_phase(x.lo, x.hi, max_phase):
        hi = 1.0
    if _hits_phase(x.lo, x.hi, min_phase):
        lo = -1.0
    return Interval(lo, hi)


def arith(op: ArithOp, a: Interval, b: Interval) -> Interval:
    """Dispatch a binary operation"""
    if op is ArithOp.ADD:
        return a + b
    if op is ArithOp.SUB:
        return a - b
    if op is ArithOp.MUL:
        return a * b
    if op is ArithOp.DIV:
        return a / b
    raise ValueError(f"Unknown binary operation: {op}")


def unary(op: UnaryOp, a: Interval, exponent: Optional[int] = None) -> Interval:
    """Dispatch a unary operation; exponent is required for POW"""
    if op is UnaryOp.NEG:
        return -a
    if op is UnaryOp.SQR:
        return a.sqr()
    if op is UnaryOp.SQRT:
        return a.sqrt()
    if op is UnaryOp.POW:
        if exponent is None:
            raise ValueError("POW needs an integer exponent")
        return a.pow(exponent)
    if op is UnaryOp.EXP:
        return a.exp()
    if op is UnaryOp.LOG:
        return a.log()
    if op is UnaryOp.SIN:
        return a.sin()
    if op is UnaryOp.COS:
        return a.cos()
    raise ValueError(f"Unknown unary operation: {op}")


def intersect(a: Interval, b: Interval) -> Interval:
    return a.intersect(b)


def hull(a: Interval, b: Interval) -> Interval:
    return a.hull(b)


EMPTY = Interval(INF, -INF)
ENTIRE = Interval(-INF, INF)
ZERO = Interval(0.0, 0.0)
NONNEGATIVE = Interval(0.0, INF)
