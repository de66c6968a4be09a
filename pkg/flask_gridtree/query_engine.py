"""This module implements region queries over the index tree and the values
stored at the base station, and the cluster-count accuracy sweep.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import ConfigError, QueryError
from .field import Field, Rect
from .index_tree import CELL, IndexTree
from .simulation import AGGREGATES, ScenarioConfig, SimulationResult, TickState, filter_at_head, run
from .traces import TraceTable

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class RegionQuery(object):
    region: Rect
    t_start: int
    t_end: int
    fn: str = 'avg'

    def __post_init__(self):
        if not self.region.has_area:
            raise QueryError('Query region must have positive area, got %r.' % (self.region,))
        if self.t_start > self.t_end:
            raise QueryError('Query window start %d is after its end %d.' % (self.t_start, self.t_end))
        if self.fn not in AGGREGATES:
            raise QueryError('Unknown query function %r; expected one of %s.' % (self.fn, ', '.join(AGGREGATES)))


def parse_query(text: str) -> RegionQuery:
    """Parse ``x1 y1 x2 y2 t_start t_end fn``."""
    tokens = text.split()
    if len(tokens) != 7:
        raise QueryError('A query has 7 fields "x1 y1 x2 y2 t_start t_end fn", got %r.' % (text,))
    try:
        x1, y1, x2, y2 = (float(token) for token in tokens[:4])
        t_start, t_end = int(tokens[4]), int(tokens[5])
    except ValueError:
        raise QueryError('Malformed query %r.' % (text,))
    if not all(math.isfinite(v) for v in (x1, y1, x2, y2)):
        raise QueryError('Query coordinates must be finite, got %r.' % (text,))
    return RegionQuery(Rect(min(x1, x2), min(y1, y2), max(x1, x2), max(y1, y2)), t_start, t_end, tokens[6])


def route_query(tree: IndexTree, field: Optional[Field], region: Rect) -> FrozenSet[int]:
    """Return the ids of the leaf cells whose bounds intersect ``region``.

    Subtrees whose bounding box does not intersect the region are never visited.
    """
    field = field or tree.field
    matched = set()
    pending = [tree.root]
    while pending:
        key = pending.pop()
        if not tree.boxes[key].intersects(region):
            continue
        if key[0] == CELL:
            if field.cell(key[1]).bounds.intersects(region):
                matched.add(key[1])
            continue
        pending.extend(tree.children.get(key, ()))
    return frozenset(matched)


def _window(query: RegionQuery, states: Sequence[TickState]) -> List[TickState]:
    by_tick = {state.tick: state for state in states}
    if query.t_start not in by_tick or query.t_end not in by_tick:
        raise QueryError('Query window [%d, %d] lies outside the simulated ticks.' % (query.t_start, query.t_end))
    return [by_tick[tick] for tick in range(query.t_start, query.t_end + 1)]


def answer_query(query: RegionQuery, tree: IndexTree, states: Sequence[TickState],
                 exact: bool = False) -> Tuple[float, Tuple[int, ...]]:
    """Answer ``query`` from the values the base station stored.

    Every matched cell contributes the stored value of its reporting cluster at
    each tick of the window; the collected values are combined with ``query.fn``.
    With ``exact``, the raw readings of the nodes in matched cells that reached
    the base station are combined instead.

    Returns:
        ``(value, contributing cell ids)``.
    """
    cells = route_query(tree, tree.field, query.region)
    if not cells:
        raise QueryError('Query region %r: no cells matched.' % (query.region,))
    window = _window(query, states)

    values = []
    if exact:
        node_ids = sorted(node_id for cell_id in cells for node_id in tree.field.cell(cell_id).members)
        for state in window:
            values.extend(state.known[node_id] for node_id in node_ids if node_id in state.known)
    else:
        owners = sorted({tree.cell_owner[cell_id] for cell_id in cells})
        for state in window:
            values.extend(state.stored[owner] for owner in owners if owner in state.stored)

    if not values:
        raise QueryError('No stored values for the matched cells in window [%d, %d].'
                         % (query.t_start, query.t_end))
    return filter_at_head(values, query.fn), tuple(sorted(cells))


def node_accuracy(result: SimulationResult) -> float:
    """Mean over ticks and alive nodes of |stored value of the node's cluster - node's true reading|.

    Nodes whose cluster has nothing stored yet are left out.
    """
    deployment = result.deployment
    owners = {node_id: deployment.owner_of(node_id) for node_id in deployment.field.nodes}
    errors = []
    for state in result.states:
        for node_id in sorted(state.sensed):
            owner = owners[node_id]
            if owner in state.stored:
                errors.append(abs(state.stored[owner] - state.sensed[node_id]))
    return math.fsum(errors) / len(errors) if errors else 0.0


def aggregate_accuracy(result: SimulationResult) -> float:
    errors = [error for error in result.accuracy if error is not None]
    return math.fsum(errors) / len(errors) if errors else 0.0


ACCURACY_METRICS = {
    'node': node_accuracy,
    'aggregate': aggregate_accuracy,
}


def accuracy_sweep(config: ScenarioConfig, counts: Iterable[int], traces: TraceTable,
                   metric: str = 'node', workers: int = 1) -> List[Tuple[int, float]]:
    """Run the scenario once per cluster count and report each run's mean error.

    Args:
        config: The scenario template; only ``target_clusters`` changes between runs.
        counts: Cluster counts, each within ``[m, M]``.
        traces: The shared, read-only trace table.
        metric: ``'node'`` or ``'aggregate'``.
        workers: Runs executed concurrently. Results keep the order of ``counts``.
    """
    if metric not in ACCURACY_METRICS:
        raise ConfigError("Unknown accuracy metric %r; expected 'node' or 'aggregate'." % (metric,))
    counts = list(counts)
    for count in counts:
        if not config.bounds.m <= count <= config.bounds.M:
            raise ConfigError('Cluster count %d lies outside [m, M] = [%d, %d].'
                              % (count, config.bounds.m, config.bounds.M))
    measure = ACCURACY_METRICS[metric]

    def evaluate(count):
        error = measure(run(config.replace(target_clusters=count), traces))
        logger.debug('accuracy_sweep: %d clusters -> error %.6f', count, error)
        return (count, error)

    if workers <= 1:
        return [evaluate(count) for count in counts]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(evaluate, counts))
