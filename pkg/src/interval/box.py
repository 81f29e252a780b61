from dataclasses import dataclass, replace
from typing import Iterable, List, Sequence, Tuple, Union

from src.interval import rounding
from src.interval.interval import Interval


class DegenerateDimensionError(ValueError):
    """Raised when bisecting a zero-width or unbounded component"""


@dataclass(frozen=True)
class Box:
    """Interval vector with the number of bisections since the root box"""
    components: Tuple[Interval, ...]
    depth: int = 0

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.depth < 0:
            raise ValueError(f"Box depth must be nonnegative (got {self.depth})")

    @classmethod
    def from_bounds(cls, bounds: Iterable[Sequence[float]], depth: int = 0) -> "Box":
        return cls(tuple(Interval(lo, hi) for lo, hi in bounds), depth)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[Union[float, str]]], depth: int = 0) -> "Box":
        return cls(tuple(Interval.from_pair(pair) for pair in pairs), depth)

    def to_pairs(self) -> List[List[Union[float, str]]]:
        return [component.to_pair() for component in self.components]

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, index: int) -> Interval:
        return self.components[index]

    def __iter__(self):
        return iter(self.components)

    @property
    def is_empty(self) -> bool:
        return any(component.is_empty for component in self.components)

    @property
    def is_bounded(self) -> bool:
        return all(component.is_bounded for component in self.components)

    def width(self) -> float:
        """Largest component width"""
        if not self.components:
            return 0.0
        return max(component.width() for component in self.components)

    def volume(self) -> float:
        """Product of component widths, rounded up"""
        result = 1.0
        for component in self.components:
            w = component.width()
            if w == 0.0:
                return 0.0
            result = rounding.mul_up(result, w)
        return result

    def midpoint(self) -> Tuple[float, ...]:
        return tuple(component.midpoint() for component in self.components)

    def replace_component(self, index: int, value: Interval) -> "Box":
        components = list(self.components)
        components[index] = value
        return replace(self, components=tuple(components))

    def with_components(self, components: Sequence[Interval]) -> "Box":
        """Same depth, new components"""
        return Box(tuple(components), self.depth)

    def can_bisect(self, dim: int) -> bool:
        component = self.components[dim]
        return component.is_bounded and component.lo < component.hi

    def bisect(self, dim: int) -> Tuple["Box", "Box"]:
        """Split component dim at its midpoint; both children go one level deeper"""
        if not self.can_bisect(dim):
            raise DegenerateDimensionError(
                f"Cannot bisect dimension {dim} of width {self.components[dim].width()}"
            )
        component = self.components[dim]
        mid = component.midpoint()
        left = list(self.components)
        right = list(self.components)
        left[dim] = Interval(component.lo, mid)
        right[dim] = Interval(mid, component.hi)
        return Box(tuple(left), self.depth + 1), Box(tuple(right), self.depth + 1)

    def intersect(self, other: "Box") -> "Box":
        return self.with_components(a.intersect(b) for a, b in zip(self.components, other.components))

    def hull(self, other: "Box") -> "Box":
        return self.with_components(a.hull(b) for a, b in zip(self.components, other.components))

    def is_subset(self, other: "Box") -> bool:
        return all(a.is_subset(b) for a, b in zip(self.components, other.components))

    def contains_point(self, point: Sequence[float]) -> bool:
        return all(component.contains(x) for component, x in zip(self.components, point))

    def inflate(self, ulps: int = 1) -> "Box":
        """Each endpoint moved outward by the given number of ULPs"""
        components = []
        for component in self.components:
            lo, hi = component.lo, component.hi
            for _ in range(ulps):
                lo, hi = rounding.down(lo), rounding.up(hi)
            components.append(Interval(lo, hi))
        return self.with_components(components)

    def __repr__(self) -> str:
        body = ", ".join(
            "empty" if c.is_empty else f"[{c.lo!r}, {c.hi!r}]" for c in self.components
        )
        return f"Box(({body}), depth={self.depth})"


def width(box: Box) -> float:
    return box.width()


def volume(box: Box) -> float:
    return box.volume()


def midpoint(interval: Interval) -> float:
    return interval.midpoint()


def bisect(box: Box, dim: int) -> Tuple[Box, Box]:
    return box.bisect(dim)
