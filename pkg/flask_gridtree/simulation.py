"""This module implements the round-based simulation engine.

Each tick, alive nodes sense a reading from the trace and report it when it moved
by more than the report delta. Reports go to the headers of the node's target
clusters, every header filters what it received and forwards the result along
its route to the base station. Every transmission is charged to the run's
energy ledger.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import dataclasses
import logging
import math
from types import MappingProxyType
from typing import List, Mapping, Optional, Sequence, Tuple

from . import AggregateError, ConfigError, DeadNodeError, TraceError
from .dedup import CoverageMap, detect_overlaps, report_targets
from .energy_ledger import EnergyLedger, charge_transmission
from .field import Field, Rect, SensorNode, partition_field
from .head_election import HeadPolicy, elect_cell_heads
from .index_tree import (Cluster, ClusterBounds, IndexTree, build_clusters, build_index_tree,
                         should_split, split_cluster)
from .routing import hops, reporting_routes
from .signals import run_finished, tick_completed, transmission_dropped
from .traces import TraceTable

logger = logging.getLogger(__name__)

AGGREGATES = ('avg', 'min', 'max')


def filter_at_head(values: Sequence[float], fn: str) -> float:
    """Aggregate the readings a header received: ``'avg'``, ``'min'`` or ``'max'``."""
    if fn not in AGGREGATES:
        raise AggregateError('Unknown aggregate function %r; expected one of %s.' % (fn, ', '.join(AGGREGATES)))
    values = list(values)
    if not values:
        raise AggregateError('Cannot %s an empty list of values.' % fn)
    if fn == 'min':
        return min(values)
    if fn == 'max':
        return max(values)
    return math.fsum(values) / len(values)


@dataclasses.dataclass(frozen=True)
class ReportRule(object):
    delta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delta) and self.delta >= 0):
            raise ConfigError('Report delta must be finite and >= 0, got %r.' % (self.delta,))


def threshold_report(node: SensorNode, value: float, rule: ReportRule) -> Tuple[bool, SensorNode]:
    """Decide whether ``node`` reports ``value``.

    Returns:
        ``(reported, node)``. The returned node has ``last_reported`` set to ``value``
        when it reported, and is unchanged otherwise.
    """
    if not node.alive:
        raise DeadNodeError('Node %d is dead and cannot report.' % node.id)
    if node.last_reported is None or abs(value - node.last_reported) > rule.delta:
        return True, node.with_report(value)
    return False, node


@dataclasses.dataclass(frozen=True)
class ScenarioConfig(object):
    """Everything a run needs besides the trace."""
    field_width: float = 100.0
    field_height: float = 100.0
    cell_size: float = 25.0
    base_station: Tuple[float, float] = (50.0, 50.0)
    bounds: ClusterBounds = ClusterBounds()
    target_clusters: int = 1
    head_policy: HeadPolicy = HeadPolicy()
    coverage_radius: float = 50.0
    comm_range: float = 150.0
    report_rule: ReportRule = ReportRule()
    forward_delta: Optional[float] = None
    unit_cost: float = 30.0
    initial_energy: float = 10000.0
    transmission_range: float = 30.0
    dedup: bool = True
    seed: int = 0
    ticks: Optional[int] = None
    bootstrap_ticks: int = 0
    aggregate: str = 'avg'
    kmeans_tol: float = 1e-9
    kmeans_max_iter: int = 100
    kmeans_restarts: int = 10

    def __post_init__(self):
        def require(condition, name, value, message):
            if not condition:
                raise ConfigError('%s %s, got %r.' % (name, message, value))

        require(self.field_width > 0 and self.field_height > 0, 'field size', (self.field_width, self.field_height), 'must be positive')
        require(self.cell_size > 0, 'cell_size', self.cell_size, 'must be positive')
        require(self.bounds.m <= self.target_clusters <= self.bounds.M, 'target_clusters', self.target_clusters,
                'must lie within [%d, %d]' % (self.bounds.m, self.bounds.M))
        require(self.coverage_radius > 0, 'coverage_radius', self.coverage_radius, 'must be positive')
        require(self.comm_range > 0, 'comm_range', self.comm_range, 'must be positive')
        require(self.forward_delta is None or (math.isfinite(self.forward_delta) and self.forward_delta >= 0),
                'forward_delta', self.forward_delta, 'must be None or finite and >= 0')
        require(self.unit_cost > 0, 'unit_cost', self.unit_cost, 'must be positive')
        require(self.initial_energy > 0, 'initial_energy', self.initial_energy, 'must be positive')
        require(self.transmission_range > 0, 'transmission_range', self.transmission_range, 'must be positive')
        require(self.ticks is None or self.ticks >= 1, 'ticks', self.ticks, 'must be None or >= 1')
        require(self.bootstrap_ticks >= 0, 'bootstrap_ticks', self.bootstrap_ticks, 'must be >= 0')
        require(self.aggregate in AGGREGATES, 'aggregate', self.aggregate, 'must be one of %s' % ', '.join(AGGREGATES))
        require(self.kmeans_tol >= 0, 'kmeans_tol', self.kmeans_tol, 'must be >= 0')
        require(self.kmeans_max_iter >= 1, 'kmeans_max_iter', self.kmeans_max_iter, 'must be >= 1')
        require(self.kmeans_restarts >= 1, 'kmeans_restarts', self.kmeans_restarts, 'must be >= 1')

    @property
    def field_bounds(self) -> Rect:
        return Rect(0.0, 0.0, float(self.field_width), float(self.field_height))

    def replace(self, **changes) -> 'ScenarioConfig':
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True, eq=False)
class Deployment(object):
    """The static structure of a run, built once before the first tick."""
    field: Field
    clusters: Tuple[Cluster, ...]
    tree: IndexTree
    routes: Mapping[int, Tuple]
    coverage: CoverageMap
    targets: Mapping[int, Tuple[int, ...]]

    @property
    def reporting(self) -> Tuple[Cluster, ...]:
        return self.tree.reporting_clusters()

    def header_of(self, cluster_id: int) -> int:
        return self.tree.header_of(cluster_id)

    def hops(self, cluster_id: int) -> int:
        return hops(self.routes[cluster_id])

    def owner_of(self, node_id: int) -> int:
        """Reporting cluster owning the cell the node sits in."""
        node = self.field.node(node_id)
        return self.tree.cell_owner[self.field.cell_at(node.x, node.y).id]


def deploy(config: ScenarioConfig, traces: TraceTable) -> Deployment:
    nodes = [SensorNode(id=node_id, x=x, y=y,
                        residual_energy=float(config.initial_energy),
                        transmission_range=float(config.transmission_range))
             for node_id, (x, y) in sorted(traces.positions.items())]
    field = partition_field(config.field_bounds, config.cell_size, nodes, config.base_station)
    field = elect_cell_heads(field, config.head_policy, config.seed)

    clusters = []
    for cluster in build_clusters(field, config.bounds, config.target_clusters, config.head_policy, config.seed):
        if should_split(cluster, field, config.bounds.split_threshold):
            subclusters = split_cluster(cluster, field, config.bounds.split_threshold, config.seed,
                                        policy=config.head_policy, tol=config.kmeans_tol,
                                        max_iter=config.kmeans_max_iter, restarts=config.kmeans_restarts)
            clusters.append(cluster.with_children(subclusters))
            clusters.extend(subclusters)
        else:
            clusters.append(cluster)

    tree = build_index_tree(clusters, field)
    routes = reporting_routes(tree, field, config.comm_range)
    reporting = tree.reporting_clusters()
    coverage = detect_overlaps(field, reporting, config.coverage_radius)
    targets = report_targets(coverage, reporting, config.dedup)

    return Deployment(field=field,
                      clusters=tuple(c for c in clusters if c.parent is None),
                      tree=tree,
                      routes=MappingProxyType(routes),
                      coverage=coverage,
                      targets=MappingProxyType(targets))


@dataclasses.dataclass(frozen=True, eq=False)
class TickState(object):
    """State of the network after a tick.

    ``filtered`` holds the values headers computed this tick, keyed by reporting
    cluster id, and exists only for clusters that received a report. ``stored``
    is what the base station holds per reporting cluster, carried over from
    earlier ticks. ``known`` is the latest raw reading per node that reached
    the base station.
    """
    tick: int
    nodes: Mapping[int, SensorNode]
    sensed: Mapping[int, float]
    reports: Mapping[int, float]
    filtered: Mapping[int, float]
    stored: Mapping[int, float]
    forwarded: Mapping[int, float]
    known: Mapping[int, float]

    @classmethod
    def initial(cls, nodes: Mapping[int, SensorNode], first_tick: int = 0) -> 'TickState':
        empty = MappingProxyType({})
        return cls(tick=first_tick - 1, nodes=MappingProxyType(dict(nodes)), sensed=empty, reports=empty,
                   filtered=empty, stored=empty, forwarded=empty, known=empty)


def step(state: TickState, config: ScenarioConfig, deployment: Deployment,
         traces: TraceTable) -> Tuple[TickState, EnergyLedger]:
    """Advance the network by one tick.

    Returns:
        The next state, and a ledger holding only this tick's charges and drops.
    """
    tick = state.tick + 1
    row = tick + config.bootstrap_ticks
    if not 0 <= row < traces.ticks:
        raise TraceError('Trace exhausted: no readings for trace tick %d (the trace has %d ticks).' % (row, traces.ticks))

    nodes = dict(state.nodes)
    ledger = EnergyLedger(config.unit_cost)

    sensed = {}
    reporters = []
    for node_id in sorted(nodes):
        node = nodes[node_id]
        if not node.alive:
            continue
        sensed[node_id] = traces.value(node_id, row)
        reported, nodes[node_id] = threshold_report(node, sensed[node_id], config.report_rule)
        if reported:
            reporters.append(node_id)

    # Node -> header reports, including a header reporting to itself
    inbox = {}
    reports = {}
    for node_id in reporters:
        for cluster_id in deployment.targets.get(node_id, ()):
            header = deployment.header_of(cluster_id)
            if not nodes[header].alive:
                ledger.record_drop(tick, node_id, 1, 'header %d is dead' % header)
                continue
            sent = charge_transmission(ledger, tick, nodes[node_id], 1)
            nodes[node_id] = sent.sender
            if not sent.delivered:
                continue
            inbox.setdefault(cluster_id, []).append((node_id, sensed[node_id]))
            reports[node_id] = sensed[node_id]

    # Header -> base station forwarding
    filtered = {}
    stored = dict(state.stored)
    forwarded = dict(state.forwarded)
    known = dict(state.known)
    for cluster_id in sorted(inbox):
        received = inbox[cluster_id]
        value = filter_at_head([v for _, v in received], config.aggregate)
        filtered[cluster_id] = value
        if (config.forward_delta is not None and cluster_id in forwarded
                and abs(value - forwarded[cluster_id]) <= config.forward_delta):
            continue
        header = deployment.header_of(cluster_id)
        sent = charge_transmission(ledger, tick, nodes[header], deployment.hops(cluster_id))
        nodes[header] = sent.sender
        if not sent.delivered:
            continue
        stored[cluster_id] = value
        forwarded[cluster_id] = value
        known.update(received)

    next_state = TickState(tick=tick,
                           nodes=MappingProxyType(nodes),
                           sensed=MappingProxyType(sensed),
                           reports=MappingProxyType(reports),
                           filtered=MappingProxyType(filtered),
                           stored=MappingProxyType(stored),
                           forwarded=MappingProxyType(forwarded),
                           known=MappingProxyType(known))
    return next_state, ledger


def aggregate_error(state: TickState, fn: str) -> Optional[float]:
    """|base-station aggregate - true aggregate over alive nodes|, None while nothing is stored."""
    if not state.stored or not state.sensed:
        return None
    stored = [state.stored[cluster_id] for cluster_id in sorted(state.stored)]
    sensed = [state.sensed[node_id] for node_id in sorted(state.sensed)]
    return abs(filter_at_head(stored, fn) - filter_at_head(sensed, fn))


@dataclasses.dataclass(frozen=True, eq=False)
class SimulationResult(object):
    config: ScenarioConfig
    deployment: Deployment
    ledger: EnergyLedger
    states: Tuple[TickState, ...]
    accuracy: Tuple[Optional[float], ...]

    @property
    def measured_ticks(self) -> Tuple[int, ...]:
        """Ticks after the warm-up rounds, which are numbered below 0."""
        return tuple(state.tick for state in self.states if state.tick >= 0)

    def energy_series(self) -> List[float]:
        return self.ledger.series(self.measured_ticks)

    def total_energy(self) -> float:
        return math.fsum(self.energy_series())

    def accuracy_series(self) -> List[Optional[float]]:
        return [error for state, error in zip(self.states, self.accuracy)
                if state.tick >= 0]

    @property
    def final_state(self) -> TickState:
        return self.states[-1]


def run(config: ScenarioConfig, traces: TraceTable, deployment: Optional[Deployment] = None) -> SimulationResult:
    """Run the scenario over the trace, tick by tick.

    The first ``config.bootstrap_ticks`` trace ticks are warm-up rounds numbered
    below 0; measured ticks count from 0. ``deployment`` defaults to a fresh
    ``deploy(config, traces)``.
    """
    ticks = traces.ticks if config.ticks is None else config.ticks
    if ticks > traces.ticks:
        raise TraceError('The scenario asks for %d ticks but the trace covers only %d.' % (ticks, traces.ticks))
    if config.bootstrap_ticks >= ticks:
        raise ConfigError('bootstrap_ticks (%d) must be smaller than the number of ticks (%d).'
                          % (config.bootstrap_ticks, ticks))

    if deployment is None:
        deployment = deploy(config, traces)
    state = TickState.initial(deployment.field.nodes, first_tick=-config.bootstrap_ticks)
    ledger = EnergyLedger(config.unit_cost)
    states = []
    accuracy = []
    for _ in range(ticks):
        state, delta = step(state, config, deployment, traces)
        ledger.extend(delta)
        states.append(state)
        accuracy.append(aggregate_error(state, config.aggregate))
        for event in delta.drops:
            transmission_dropped.send(config, event=event)
        tick_completed.send(config, state=state, ledger=delta)
        logger.debug('tick %d: %d reports, %.2f energy', state.tick, len(state.reports), delta.total())

    result = SimulationResult(config=config, deployment=deployment, ledger=ledger,
                              states=tuple(states), accuracy=tuple(accuracy))
    run_finished.send(config, result=result)
    return result
