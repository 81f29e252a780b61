from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Tuple

from src.interval.box import Box
from src.model.expr import Expr, variables


class Relation(Enum):
    """How a constraint expression relates to zero"""
    EQ_ZERO = "eq"
    GEQ_ZERO = "ineq"


@dataclass(frozen=True)
class Constraint:
    expr: Expr
    relation: Relation

    @property
    def is_equation(self) -> bool:
        return self.relation is Relation.EQ_ZERO


@dataclass(frozen=True)
class NCSP:
    """Variables, initial box and a conjunction of f(v) = 0 and g(v) >= 0 constraints

    projection lists the variables the interval Newton test solves for; the
    remaining variables act as parameters.
    """
    names: Tuple[str, ...]
    initial: Box
    constraints: Tuple[Constraint, ...]
    projection: Tuple[int, ...] = ()
    title: str = ""
    # per-instance cache for derived data (derivatives, index lists)
    memo: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "projection", tuple(self.projection))
        n = len(self.names)

        if len(set(self.names)) != n:
            raise ValueError(f"Duplicate variable names: {self.names}")
        if len(self.initial) != n:
            raise ValueError(f"Initial box has {len(self.initial)} components for {n} variables")
        if self.initial.is_empty:
            raise ValueError("Initial box is empty")
        for position, constraint in enumerate(self.constraints):
            out_of_range = [i for i in variables(constraint.expr) if not 0 <= i < n]
            if out_of_range:
                raise ValueError(f"Constraint {position} refers to unknown variable indices {out_of_range}")

        e = self.equation_count
        if e > n:
            raise ValueError(f"{e} equations over {n} variables")
        if e > 0:
            if len(self.projection) != e:
                raise ValueError(f"Projection lists {len(self.projection)} variables but there are {e} equations")
            if len(set(self.projection)) != e or any(not 0 <= i < n for i in self.projection):
                raise ValueError(f"Invalid projection variables: {self.projection}")
        elif self.projection:
            raise ValueError("Projection variables given for a problem without equations")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def equations(self) -> List[Constraint]:
        return [c for c in self.constraints if c.relation is Relation.EQ_ZERO]

    @property
    def inequalities(self) -> List[Constraint]:
        return [c for c in self.constraints if c.relation is Relation.GEQ_ZERO]

    @property
    def equation_count(self) -> int:
        return sum(1 for c in self.constraints if c.relation is Relation.EQ_ZERO)

    @property
    def inequality_count(self) -> int:
        return len(self.constraints) - self.equation_count

    @property
    def projection_count(self) -> int:
        return len(self.projection)

    @property
    def parameters(self) -> Tuple[int, ...]:
        chosen = set(self.projection)
        return tuple(i for i in range(self.n) if i not in chosen)

    @property
    def is_under_constrained(self) -> bool:
        return self.n > self.equation_count

    def summary(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "n": self.n,
            "e": self.equation_count,
            "i": self.inequality_count,
            "projection": [self.names[i] for i in self.projection],
        }
