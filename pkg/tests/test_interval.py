import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.interval import rounding
from src.interval.interval import (
    EMPTY, ENTIRE, ArithOp, Interval, UnaryOp, arith, hull, intersect, unary,
)

mpmath.mp.prec = 200

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw, elements=finite):
    a = draw(elements)
    b = draw(elements)
    return Interval(min(a, b), max(a, b))


@st.composite
def interval_and_point(draw, elements=finite):
    x = draw(intervals(elements))
    t = draw(st.floats(min_value=0.0, max_value=1.0))
    point = x.lo + t * (x.hi - x.lo)
    return x, min(max(point, x.lo), x.hi)


def _at_most(bound: float, value: Fraction) -> bool:
    return bound == -math.inf or Fraction(bound) <= value


def _at_least(bound: float, value: Fraction) -> bool:
    return bound == math.inf or value <= Fraction(bound)


def _contains_exact(result: Interval, value: Fraction) -> bool:
    return _at_most(result.lo, value) and _at_least(result.hi, value)


def _contains_mp(result: Interval, value) -> bool:
    return mpmath.mpf(result.lo) <= value <= mpmath.mpf(result.hi)


class TestRounding:
    def test_exact_sum_is_not_widened(self):
        assert rounding.add_down(1.0, 2.0) == 3.0
        assert rounding.add_up(1.0, 2.0) == 3.0

    def test_inexact_sum_is_bracketed(self):
        lo, hi = rounding.add_down(0.1, 0.2), rounding.add_up(0.1, 0.2)
        exact = Fraction(0.1) + Fraction(0.2)
        assert Fraction(lo) <= exact <= Fraction(hi)
        assert lo < hi

    def test_exact_product_is_not_widened(self):
        assert rounding.mul_down(3.0, 4.0) == 12.0
        assert rounding.mul_up(-1.0, 4.0) == -4.0

    def test_division_exactness(self):
        assert rounding.div_down(1.0, 4.0) == 0.25
        assert Fraction(rounding.div_down(1.0, 3.0)) <= Fraction(1, 3) <= Fraction(rounding.div_up(1.0, 3.0))

    def test_sqrt_exact_square(self):
        assert rounding.sqrt_down(4.0) == 2.0
        assert rounding.sqrt_up(4.0) == 2.0
        assert Fraction(rounding.sqrt_down(2.0)) ** 2 <= 2 <= Fraction(rounding.sqrt_up(2.0)) ** 2

    def test_overflowing_sum_of_finite_numbers(self):
        big = 1.7e308
        assert rounding.add_down(big, big) == 1.7976931348623157e308
        assert rounding.add_up(big, big) == math.inf

    @given(finite, finite)
    def test_sum_bounds(self, a, b):
        exact = Fraction(a) + Fraction(b)
        assert Fraction(rounding.add_down(a, b)) <= exact <= Fraction(rounding.add_up(a, b))

    @given(finite, finite)
    def test_product_bounds(self, a, b):
        exact = Fraction(a) * Fraction(b)
        assert Fraction(rounding.mul_down(a, b)) <= exact <= Fraction(rounding.mul_up(a, b))

    @given(finite, finite)
    def test_quotient_bounds(self, a, b):
        assume(b != 0.0)
        exact = Fraction(a) / Fraction(b)
        assert _at_most(rounding.div_down(a, b), exact)
        assert _at_least(rounding.div_up(a, b), exact)


class TestConstruction:
    def test_rejects_reversed_bounds(self):
        with pytest.raises(ValueError):
            Interval(1.0, 0.0)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            Interval(float("nan"), 1.0)

    def test_empty_is_designated(self):
        assert Interval.empty().is_empty
        assert EMPTY.is_empty
        assert not Interval(0.0, 0.0).is_empty

    def test_from_decimal_exact(self):
        assert Interval.from_decimal("0.5") == Interval(0.5, 0.5)
        assert Interval.from_decimal("3") == Interval(3.0, 3.0)

    def test_from_decimal_encloses_inexact_literal(self):
        x = Interval.from_decimal("0.1")
        assert x.lo < x.hi
        assert Fraction(x.lo) <= Fraction("0.1") <= Fraction(x.hi)
        assert rounding.up(x.lo) == x.hi

    def test_pair_serialization_of_infinities(self):
        assert ENTIRE.to_pair() == ["-inf", "inf"]
        assert Interval.from_pair(["-inf", 2.5]) == Interval(-math.inf, 2.5)


class TestArithmetic:
    def test_add(self):
        assert arith(ArithOp.ADD, Interval(1, 2), Interval(3, 4)) == Interval(4, 6)

    def test_mul(self):
        assert arith(ArithOp.MUL, Interval(-1, 2), Interval(3, 4)) == Interval(-4, 8)

    def test_div_by_straddling_interval(self):
        assert arith(ArithOp.DIV, Interval(1, 2), Interval(-1, 1)) == ENTIRE

    def test_div_by_half_open_zero(self):
        result = Interval(1, 2) / Interval(0, 4)
        assert result.lo == 0.25 and result.hi == math.inf

    def test_div_by_zero_point(self):
        assert (Interval(1, 2) / Interval(0, 0)).is_empty

    def test_empty_absorbs(self):
        assert (EMPTY + Interval(1, 2)).is_empty
        assert (Interval(1, 2) * EMPTY).is_empty

    def test_unbounded_products(self):
        assert Interval(0, math.inf) * Interval(0, 0) == Interval(0, 0)
        assert Interval(1, math.inf) * Interval(-1, -1) == Interval(-math.inf, -1)

    @settings(max_examples=300)
    @given(interval_and_point(), interval_and_point(), st.sampled_from(list(ArithOp)))
    def test_containment(self, first, second, op):
        (a, x), (b, y) = first, second
        fx, fy = Fraction(x), Fraction(y)
        if op is ArithOp.DIV:
            assume(y != 0.0)
            exact = fx / fy
        elif op is ArithOp.ADD:
            exact = fx + fy
        elif op is ArithOp.SUB:
            exact = fx - fy
        else:
            exact = fx * fy
        assert _contains_exact(arith(op, a, b), exact)

    @given(intervals(), intervals(), intervals(), intervals(), st.sampled_from([ArithOp.ADD, ArithOp.SUB, ArithOp.MUL]))
    def test_inclusion_monotonicity(self, a, a_extra, b, b_extra, op):
        wide_a, wide_b = a.hull(a_extra), b.hull(b_extra)
        assert arith(op, a, b).is_subset(arith(op, wide_a, wide_b))


class TestUnary:
    def test_sqrt_clips_domain(self):
        assert unary(UnaryOp.SQRT, Interval(-1, 4)) == Interval(0, 2)

    def test_sqrt_of_negative_is_empty(self):
        assert unary(UnaryOp.SQRT, Interval(-2, -1)).is_empty

    def test_sqr(self):
        assert unary(UnaryOp.SQR, Interval(-2, 1)) == Interval(0, 4)

    def test_sin_half_period(self):
        result = unary(UnaryOp.SIN, Interval(0, math.pi))
        assert result.lo <= 0.0 and result.hi == 1.0
        assert result.lo > -1e-15

    def test_cos_full_period(self):
        assert unary(UnaryOp.COS, Interval(-10, 10)) == Interval(-1, 1)

    def test_log_of_nonpositive_is_empty(self):
        assert unary(UnaryOp.LOG, Interval(-3, 0)).is_empty

    def test_exp_overflow_is_unbounded(self):
        result = unary(UnaryOp.EXP, Interval(0, 1000))
        assert result.lo <= 1.0 and result.hi == math.inf

    def test_odd_and_negative_powers(self):
        assert unary(UnaryOp.POW, Interval(-2, 1), 3) == Interval(-8, 1)
        assert unary(UnaryOp.POW, Interval(2, 4), -1).contains(0.3)

    def test_root(self):
        cube = Interval(8, 27).root(3)
        assert cube.contains(2.0) and cube.contains(3.0)

    @settings(max_examples=300)
    @given(interval_and_point(st.floats(min_value=-50, max_value=50)),
           st.sampled_from([UnaryOp.SQR, UnaryOp.SQRT, UnaryOp.EXP, UnaryOp.LOG, UnaryOp.SIN, UnaryOp.COS]))
    def test_containment(self, sample, op):
        a, x = sample
        mx = mpmath.mpf(x)
        if op is UnaryOp.SQRT:
            assume(x >= 0)
            exact = mpmath.sqrt(mx)
        elif op is UnaryOp.LOG:
            assume(x > 0)
            exact = mpmath.log(mx)
        elif op is UnaryOp.SQR:
            exact = mx * mx
        elif op is UnaryOp.EXP:
            exact = mpmath.exp(mx)
        elif op is UnaryOp.SIN:
            exact = mpmath.sin(mx)
        else:
            exact = mpmath.cos(mx)
        assert _contains_mp(unary(op, a), exact)

    @given(interval_and_point(st.floats(min_value=-20, max_value=20)), st.integers(min_value=3, max_value=7))
    def test_pow_containment(self, sample, k):
        a, x = sample
        assert _contains_exact(unary(UnaryOp.POW, a, k), Fraction(x) ** k)


class TestSetOperations:
    def test_intersect_examples(self):
        assert intersect(Interval(-1, 2), Interval(0, 3)) == Interval(0, 2)
        assert intersect(Interval(0, 1), Interval(2, 3)).is_empty
        assert intersect(Interval(1, 1), Interval(1, 2)) == Interval(1, 1)

    def test_hull_with_empty_is_neutral(self):
        assert hull(EMPTY, Interval(1, 2)) == Interval(1, 2)

    @given(intervals(), intervals())
    def test_commutative(self, a, b):
        assert intersect(a, b) == intersect(b, a)
        assert hull(a, b) == hull(b, a)

    @given(intervals())
    def test_idempotent(self, a):
        assert intersect(a, a) == a
        assert hull(a, a) == a
        assert intersect(a, EMPTY).is_empty

    def test_interior(self):
        assert Interval(0.25, 0.75).is_interior(Interval(0, 1))
        assert not Interval(0, 0.75).is_interior(Interval(0, 1))

    def test_midpoint(self):
        assert Interval(1, 2).midpoint() == 1.5
        assert Interval(3, math.inf).midpoint() == 3.0
        assert ENTIRE.midpoint() == 0.0
        big = Interval(-1.7e308, 1.7e308)
        assert big.contains(big.midpoint())
