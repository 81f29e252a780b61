import math

import pytest

from src.interval.box import Box, DegenerateDimensionError, bisect, volume, width
from src.interval.interval import EMPTY, Interval


def test_width_is_largest_component():
    box = Box.from_bounds([(0, 1), (0, 4), (2, 2.5)])
    assert width(box) == 4.0


def test_volume():
    assert volume(Box.from_bounds([(0, 2), (1, 4)])) == 6.0
    assert Box.from_bounds([(0, 2), (1, 1)]).volume() == 0.0
    assert Box.from_bounds([(0, math.inf), (0, 1)]).volume() == math.inf


def test_bisect_splits_at_midpoint_and_deepens():
    box = Box.from_bounds([(0, 2), (-1, 1)], depth=3)
    left, right = bisect(box, 0)
    assert left[0] == Interval(0, 1) and right[0] == Interval(1, 2)
    assert left[1] == box[1] and right[1] == box[1]
    assert left.depth == right.depth == 4
    assert left.hull(right).components == box.components


def test_bisect_rejects_degenerate_component():
    box = Box.from_bounds([(1, 1), (0, 1)])
    assert not box.can_bisect(0)
    with pytest.raises(DegenerateDimensionError):
        box.bisect(0)


def test_bisect_rejects_unbounded_component():
    box = Box.from_bounds([(0, math.inf)])
    with pytest.raises(DegenerateDimensionError):
        box.bisect(0)


def test_empty_when_any_component_empty():
    box = Box((Interval(0, 1), EMPTY))
    assert box.is_empty
    assert Box.from_bounds([(0, 1), (0, 1)]).intersect(Box.from_bounds([(2, 3), (0, 1)])).is_empty


def test_subset_and_points():
    outer = Box.from_bounds([(0, 4), (0, 4)])
    inner = Box.from_bounds([(1, 2), (1, 3)])
    assert inner.is_subset(outer)
    assert not outer.is_subset(inner)
    assert inner.contains_point((1.5, 3.0))
    assert not inner.contains_point((0.5, 2.0))


def test_pairs_keep_infinities():
    box = Box.from_bounds([(-math.inf, 0), (1, 2)])
    assert box.to_pairs() == [["-inf", 0.0], [1.0, 2.0]]
    assert Box.from_pairs(box.to_pairs()) == box


def test_inflate_moves_endpoints_outward():
    box = Box.from_bounds([(1, 2)])
    wide = box.inflate(2)
    assert wide[0].lo < 1.0 and wide[0].hi > 2.0
    assert box.is_subset(wide)


def test_negative_depth_rejected():
    with pytest.raises(ValueError):
        Box.from_bounds([(0, 1)], depth=-1)
