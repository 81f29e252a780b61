import csv
import logging
from dataclasses import dataclass
from typing import List, Sequence, TextIO, Tuple

from src.search.state import Paving

logger = logging.getLogger(__name__)

HEADER = ["layer", "status", "x_lo", "x_hi", "y_lo", "y_hi"]


@dataclass(frozen=True)
class Rectangle:
    layer: str
    status: str
    x: Tuple[float, float]
    y: Tuple[float, float]


def project(paving: Paving, dims: Tuple[int, int], layer: str = "") -> List[Rectangle]:
    """2-D projections of the paving boxes onto dims"""
    rectangles = []
    for entry in paving:
        check_dims(dims, len(entry.box))
        a, b = entry.box[dims[0]], entry.box[dims[1]]
        rectangles.append(Rectangle(layer, entry.status.value, (a.lo, a.hi), (b.lo, b.hi)))
    return rectangles


def check_dims(dims: Tuple[int, int], n: int):
    for d in dims:
        if not 0 <= d < n:
            raise ValueError(f"Dimension {d} out of range for {n}-dimensional boxes")


def write_rectangles(layers: Sequence[Tuple[str, Paving]], dims: Tuple[int, int], stream: TextIO) -> int:
    """CSV of every layer's rectangles; returns the number of rows written"""
    writer = csv.writer(stream)
    writer.writerow(HEADER)
    rows = 0
    for layer, paving in layers:
        for rect in project(paving, dims, layer):
            writer.writerow([rect.layer, rect.status, rect.x[0], rect.x[1], rect.y[0], rect.y[1]])
            rows += 1
    logger.debug(f"Wrote {rows} rectangles over dims {dims}")
    return rows
