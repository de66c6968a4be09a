"""This module implements the sensor trace table and its CSV reader.

A trace file has the header row ``node_id,x,y,t,value`` and one reading per row.
Every node must have exactly one reading for every tick ``0 .. T-1`` and a single
fixed position.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import csv
import dataclasses
import os
from types import MappingProxyType
from typing import Iterable, List, Mapping, Tuple

from . import TraceError

TRACE_COLUMNS = ('node_id', 'x', 'y', 't', 'value')


@dataclasses.dataclass(frozen=True, eq=False)
class TraceTable(object):
    positions: Mapping[int, Tuple[float, float]]
    values: Mapping[int, Tuple[float, ...]]
    ticks: int

    @property
    def node_ids(self) -> Tuple[int, ...]:
        return tuple(sorted(self.positions))

    def value(self, node_id: int, tick: int) -> float:
        try:
            return self.values[node_id][tick]
        except (KeyError, IndexError):
            raise TraceError('No reading for node %r at tick %r.' % (node_id, tick))

    @classmethod
    def from_rows(cls, rows: Iterable[Tuple[int, float, float, int, float]]) -> 'TraceTable':
        """Build a table from ``(node_id, x, y, t, value)`` tuples."""
        positions = {}
        readings = {}
        for node_id, x, y, t, value in rows:
            position = (float(x), float(y))
            if positions.setdefault(node_id, position) != position:
                raise TraceError('Node %d changes position at tick %d.' % (node_id, t))
            if t < 0:
                raise TraceError('Node %d has a negative tick %d.' % (node_id, t))
            node_readings = readings.setdefault(node_id, {})
            if t in node_readings:
                raise TraceError('Node %d has two readings for tick %d.' % (node_id, t))
            node_readings[t] = float(value)

        if not positions:
            raise TraceError('The trace holds no readings.')

        ticks = 1 + max(max(node_readings) for node_readings in readings.values())
        values = {}
        for node_id in sorted(readings):
            missing = [t for t in range(ticks) if t not in readings[node_id]]
            if missing:
                raise TraceError('Node %d has no reading for tick %d.' % (node_id, missing[0]))
            values[node_id] = tuple(readings[node_id][t] for t in range(ticks))

        return cls(positions=MappingProxyType(positions), values=MappingProxyType(values), ticks=ticks)

    def rows(self) -> List[Tuple[int, float, float, int, float]]:
        return [(node_id,) + self.positions[node_id] + (t, self.values[node_id][t])
                for t in range(self.ticks) for node_id in self.node_ids]


def read_traces(path: str) -> TraceTable:
    """Read a trace CSV file.

    Raises:
        TraceError: the file is missing, has a wrong header, a malformed row,
            or does not cover every node at every tick.
    """
    if not os.path.isfile(path):
        raise TraceError('Trace file not found: %s' % path)

    rows = []
    with open(path, newline='') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(column.strip() for column in header) != TRACE_COLUMNS:
            raise TraceError('Trace file %s must start with the header %s.' % (path, ','.join(TRACE_COLUMNS)))
        for record in reader:
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != len(TRACE_COLUMNS):
                raise TraceError('Trace file %s, line %d: expected %d columns, got %d.'
                                 % (path, reader.line_num, len(TRACE_COLUMNS), len(record)))
            try:
                node_id, x, y, t, value = record
                rows.append((int(node_id), float(x), float(y), int(t), float(value)))
            except ValueError:
                raise TraceError('Trace file %s, line %d: malformed row %r.' % (path, reader.line_num, record))

    try:
        return TraceTable.from_rows(rows)
    except TraceError as e:
        raise TraceError('Trace file %s: %s' % (path, e))


def write_traces(path: str, table: TraceTable) -> None:
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(TRACE_COLUMNS)
        for node_id, x, y, t, value in table.rows():
            writer.writerow((node_id, repr(x), repr(y), t, repr(value)))
