from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple, Union

from src.interval.box import Box


class ProtocolError(RuntimeError):
    """Raised when a worker receives a message its routing does not allow"""


class Color(Enum):
    WHITE = 0
    BLACK = 1


@dataclass(frozen=True)
class BoxBatch:
    """Boxes shipped between workers; initial batches come from the preprocess split and may be empty"""
    sender: int
    boxes: Tuple[Box, ...]
    initial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        if not self.boxes and not self.initial:
            raise ValueError("Only initial batches may be empty")


@dataclass(frozen=True)
class LoadReport:
    sender: int
    load: int

    def __post_init__(self):
        if self.load < 0:
            raise ValueError(f"Load must be nonnegative (got {self.load})")


@dataclass(frozen=True)
class Token:
    """Termination token: color plus the running sum of per-worker message counters"""
    color: Color
    count: int


@dataclass(frozen=True)
class Terminate:
    pass


Message = Union[BoxBatch, LoadReport, Token, Terminate]

# (destination worker id, message)
Envelope = Tuple[int, Message]
Outbox = List[Envelope]


def describe(message: Message) -> dict:
    """Short JSON-ready summary used in trace logs"""
    if isinstance(message, BoxBatch):
        return {
            "type": "BoxBatch",
            "sender": message.sender,
            "boxes": len(message.boxes),
            "initial": message.initial,
        }
    if isinstance(message, LoadReport):
        return {"type": "LoadReport", "sender": message.sender, "load": message.load}
    if isinstance(message, Token):
        return {"type": "Token", "color": message.color.name.lower(), "count": message.count}
    return {"type": "Terminate"}
