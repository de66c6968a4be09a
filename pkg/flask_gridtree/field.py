"""This module implements the sensor field: nodes, grid cells and the
field-to-grid partition.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import dataclasses
import math
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Tuple

from . import (DuplicateNodeError, InvalidCellSizeError, NodeOutOfBoundsError, TreeError,
               UnknownNodeError)


@dataclasses.dataclass(frozen=True)
class Rect(object):
    """Axis-aligned rectangle ``[x0, x1) x [y0, y1)`` in meters."""
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def center(self) -> Tuple[float, float]:
        return ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)

    @property
    def has_area(self) -> bool:
        return self.x1 > self.x0 and self.y1 > self.y0

    def contains(self, x: float, y: float) -> bool:
        """Half-open containment: the low edges belong to the rectangle, the high edges do not."""
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1

    def intersects(self, other: 'Rect') -> bool:
        """True if both rectangles share a region of positive area."""
        return (self.x0 < other.x1 and other.x0 < self.x1
                and self.y0 < other.y1 and other.y0 < self.y1)

    def union(self, other: 'Rect') -> 'Rect':
        return Rect(min(self.x0, other.x0), min(self.y0, other.y0),
                    max(self.x1, other.x1), max(self.y1, other.y1))


@dataclasses.dataclass(frozen=True)
class SensorNode(object):
    """A fixed sensor with a residual energy budget and a reporting state.

    ``alive`` is derived from the residual energy, so a node is dead
    exactly when its energy reached zero.
    """
    id: int
    x: float
    y: float
    residual_energy: float
    transmission_range: float
    last_reported: Optional[float] = None

    @property
    def position(self) -> Tuple[float, float]:
        return (self.x, self.y)

    @property
    def alive(self) -> bool:
        return self.residual_energy > 0

    def distance_to(self, x: float, y: float) -> float:
        return math.hypot(self.x - x, self.y - y)

    def with_energy(self, residual_energy: float) -> 'SensorNode':
        return dataclasses.replace(self, residual_energy=max(residual_energy, 0.0))

    def with_report(self, value: float) -> 'SensorNode':
        return dataclasses.replace(self, last_reported=value)


@dataclasses.dataclass(frozen=True)
class GridCell(object):
    id: int
    row: int
    col: int
    bounds: Rect
    members: frozenset = frozenset()
    weight: float = 0.0
    head: Optional[int] = None

    @property
    def center(self) -> Tuple[float, float]:
        return self.bounds.center


@dataclasses.dataclass(frozen=True, eq=False)
class Field(object):
    """The deployment region, cut into square grid cells of ``cell_size`` meters."""
    bounds: Rect
    cell_size: float
    rows: int
    cols: int
    cells: Tuple[GridCell, ...]
    nodes: Mapping[int, SensorNode]
    base_station: Tuple[float, float]

    def cell(self, cell_id: int) -> GridCell:
        if not 0 <= cell_id < len(self.cells):
            raise TreeError('Unknown cell id %r.' % (cell_id,))
        return self.cells[cell_id]

    def cell_at(self, x: float, y: float) -> GridCell:
        """Return the unique cell containing position ``(x, y)``."""
        if not self.bounds.contains(x, y):
            raise NodeOutOfBoundsError(
                'Position (%s, %s) lies outside the field bounds.' % (x, y))
        col = min(int(math.floor((x - self.bounds.x0) / self.cell_size)), self.cols - 1)
        row = min(int(math.floor((y - self.bounds.y0) / self.cell_size)), self.rows - 1)
        return self.cells[row * self.cols + col]

    def node(self, node_id: int) -> SensorNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeError('Unknown node id %r.' % (node_id,))

    @property
    def nonempty_cells(self) -> Tuple[GridCell, ...]:
        return tuple(cell for cell in self.cells if cell.members)

    @property
    def alive_nodes(self) -> Tuple[SensorNode, ...]:
        return tuple(node for node_id, node in sorted(self.nodes.items()) if node.alive)

    def replace_cells(self, cells: Iterable[GridCell]) -> 'Field':
        return dataclasses.replace(self, cells=tuple(cells))


def compute_cell_weight(cell: GridCell, nodes: Mapping[int, SensorNode]) -> float:
    """Return the sum of residual energy over the alive members of ``cell``."""
    weight = 0.0
    for node_id in sorted(cell.members):
        node = nodes.get(node_id)
        if node is None:
            raise UnknownNodeError('Cell %d lists unknown member %r.' % (cell.id, node_id))
        if node.alive:
            weight += node.residual_energy
    return weight


def partition_field(bounds: Rect, cell_size: float, nodes: Iterable[SensorNode],
                    base_station: Tuple[float, float] = (0.0, 0.0)) -> Field:
    """Split ``bounds`` into half-open grid cells and assign every alive node to its cell.

    Raises:
        InvalidCellSizeError: ``cell_size`` is not positive.
        DuplicateNodeError: two nodes share an id.
        NodeOutOfBoundsError: a node lies outside ``bounds``.
    """
    if not cell_size > 0:
        raise InvalidCellSizeError('Cell size must be positive, got %r.' % (cell_size,))

    node_map = {}
    for node in nodes:
        if node.id in node_map:
            raise DuplicateNodeError('Duplicate node id %r.' % (node.id,))
        if not bounds.contains(node.x, node.y):
            raise NodeOutOfBoundsError(
                'Node %d at (%s, %s) lies outside the field bounds.' % (node.id, node.x, node.y))
        node_map[node.id] = node

    cols = int(math.ceil(bounds.width / cell_size))
    rows = int(math.ceil(bounds.height / cell_size))

    members = [set() for _ in range(rows * cols)]
    cells = []
    for row in range(rows):
        for col in range(cols):
            cell_bounds = Rect(bounds.x0 + col * cell_size,
                               bounds.y0 + row * cell_size,
                               bounds.x0 + (col + 1) * cell_size,
                               bounds.y0 + (row + 1) * cell_size)
            cells.append(GridCell(id=row * cols + col, row=row, col=col, bounds=cell_bounds))

    field = Field(bounds=bounds, cell_size=float(cell_size), rows=rows, cols=cols,
                  cells=tuple(cells), nodes=MappingProxyType(node_map),
                  base_station=tuple(base_station))

    for node_id in sorted(node_map):
        node = node_map[node_id]
        if node.alive:
            members[field.cell_at(node.x, node.y).id].add(node_id)

    filled = []
    for cell in cells:
        cell = dataclasses.replace(cell, members=frozenset(members[cell.id]))
        filled.append(dataclasses.replace(cell, weight=compute_cell_weight(cell, node_map)))
    return field.replace_cells(filled)
